#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace opf {

// All quantities are per-unit on the case base_mva; angles in radians.

struct Bus {
  int id = 0;
  double v_min = 0.0;
  double v_max = 0.0;
  std::optional<int> region_hint;
};

struct Branch {
  int from_bus = 0;
  int to_bus = 0;
  double g = 0.0;      // effective series conductance
  double b = 0.0;      // effective series susceptance
  double s_max = 0.0;  // thermal limit, apparent power
};

struct CostCurve {
  double c2 = 0.0;  // $/p.u.^2
  double c1 = 0.0;  // $/p.u.
  double c0 = 0.0;  // $
};

struct Generator {
  int bus = 0;
  double p_min = 0.0, p_max = 0.0;
  double q_min = 0.0, q_max = 0.0;
  CostCurve cost;
};

struct Load {
  int bus = 0;
  double p_nom = 0.0;
  double q_nom = 0.0;
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CaseStats {
  int n_bus = 0;
  int n_branch = 0;
  int n_load = 0;
  int n_gen = 0;
  bool operator==(const CaseStats&) const = default;
};

struct NetworkCase {
  double base_mva = 100.0;
  std::vector<Bus> buses;            // sorted by id
  std::vector<Branch> branches;      // input order
  std::vector<Generator> generators; // input order
  std::vector<Load> loads;           // sorted by bus id, one per bus

  // Dense index lookups (rebuilt after parsing/deserialization).
  int bus_index(int id) const {
    auto it = bus_index_.find(id);
    if (it == bus_index_.end())
      throw ValidationError("unknown bus id " + std::to_string(id));
    return it->second;
  }
  bool has_bus(int id) const { return bus_index_.count(id) != 0; }
  int n_bus() const { return int(buses.size()); }
  int n_branch() const { return int(branches.size()); }
  int n_gen() const { return int(generators.size()); }
  int n_load() const { return int(loads.size()); }

  // Generators attached to each bus index, and the per-bus incident arcs,
  // see acopf for the arc convention.
  const std::vector<std::vector<int>>& gens_at_bus() const { return gens_at_bus_; }

  void rebuild_indexes();

 private:
  std::map<int, int> bus_index_;
  std::vector<std::vector<int>> gens_at_bus_;
};

// Parse a MATPOWER-subset .m case or the native JSON case format; the format
// is auto-detected. All quantities are converted to per-unit, loads are
// aggregated per bus, branch taps are folded into the series admittance and
// charging / bus shunts are discarded (see README for the folding rule).
NetworkCase parse_case(const std::string& text);

CaseStats case_stats(const NetworkCase& c);

// Canonical native-JSON serialization; parse_case(serialize_case(c)) == c.
std::string serialize_case(const NetworkCase& c);

// Content hash of the canonical serialization.
std::uint64_t case_hash(const NetworkCase& c);

}  // namespace opf
