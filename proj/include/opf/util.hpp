#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace opf {

// FNV-1a 64-bit content hash. Used for case/partition/dataset integrity
// guards, not for security.
inline std::uint64_t fnv1a64(const void* data, std::size_t len,
                             std::uint64_t h = 0xcbf29ce484222325ULL) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

inline std::uint64_t fnv1a64(const std::string& s) {
  return fnv1a64(s.data(), s.size());
}

std::string hash_hex(std::uint64_t h);

// splitmix64, used to derive seeds for independent streams.
inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// xoshiro256++ with explicit uniform mappings. Deterministic across
// platforms, unlike the std:: distributions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) {
    std::uint64_t sm = seed;
    for (auto& w : s_) w = splitmix64(sm);
  }

  // Derive an independent stream from (seed, tag...). Streams with distinct
  // tags never collide in practice.
  static Rng stream(std::uint64_t seed, std::uint64_t tag_a,
                    std::uint64_t tag_b = 0) {
    std::uint64_t sm = seed;
    std::uint64_t h = splitmix64(sm);
    h ^= 0x9e3779b97f4a7c15ULL * (tag_a + 1);
    h ^= 0xc2b2ae3d27d4eb4fULL * (tag_b + 1);
    return Rng(h);
  }

  std::uint64_t next_u64() {
    const std::uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
  }

  // Uniform in [0, 1).
  double uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("Rng::below(0)");
    return next_u64() % n;
  }

  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = below(i);
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  static std::uint64_t rotl(std::uint64_t x, int k) {
    return (x << k) | (x >> (64 - k));
  }
  std::uint64_t s_[4];
};

// Inclusive linear-interpolation quantile of a pool of values; q in [0, 1].
double quantile(std::vector<double> pool, double q);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace opf
