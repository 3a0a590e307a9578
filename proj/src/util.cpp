#include "opf/util.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace opf {

std::string hash_hex(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", (unsigned long long)h);
  return std::string(buf);
}

double quantile(std::vector<double> pool, double q) {
  if (pool.empty()) throw std::invalid_argument("quantile of empty pool");
  if (q < 0.0 || q > 1.0) throw std::invalid_argument("quantile q out of [0,1]");
  std::sort(pool.begin(), pool.end());
  double pos = q * double(pool.size() - 1);
  std::size_t lo = std::size_t(pos);
  if (lo + 1 >= pool.size()) return pool.back();
  double frac = pos - double(lo);
  return pool[lo] * (1.0 - frac) + pool[lo + 1] * frac;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw std::runtime_error("cannot write file: " + path);
  f << content;
  if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace opf
