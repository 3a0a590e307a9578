#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "opf/netmodel.hpp"

namespace opf {

// Regions are numbered 1..K. All derived sets hold dense indices (bus index,
// branch index, generator index, load index) in ascending order.

struct RegionAssignment {
  std::map<int, int> region_of;  // bus id -> region in [1, K]
  int K = 0;
};

struct Partition {
  RegionAssignment assignment;
  std::vector<std::vector<int>> region_buses;      // N^k, bus indices
  std::vector<std::vector<int>> internal_edges;    // E^k, branch indices
  std::vector<int> coupling_edges;                 // branch indices
  std::vector<int> coupling_buses;                 // bus indices
  std::vector<std::vector<int>> region_coupling_edges;  // per region
  std::vector<std::vector<int>> region_coupling_buses;  // per region
  std::vector<std::vector<int>> region_loads;      // load indices
  std::vector<std::vector<int>> region_generators; // generator indices

  int K() const { return assignment.K; }
  // region (1..K) of a bus index, given the case used to induce this
  std::vector<int> region_of_bus;  // dense, by bus index
};

struct PartitionStats {
  std::vector<int> region_sizes;   // |N^k|
  int coupling_edge_count = 0;     // |E_coupling|
  double max_region_fraction = 0;  // max_k |N^k| / |N|
  double coupling_fraction = 0;    // |E_coupling| / |E|
};

// Induce all partition sets from an assignment. Throws ValidationError if a
// bus is unassigned or a region is empty. Disconnected regions are accepted
// for user-supplied assignments (auto_partition always produces connected
// regions).
Partition induce_partition(const NetworkCase& c, const RegionAssignment& a);

// Greedy multilevel growth from K spread seeds followed by boundary
// refinement passes that move single buses while regions stay connected and
// nonempty. Deterministic for a fixed seed.
RegionAssignment auto_partition(const NetworkCase& c, int K, std::uint64_t seed);

PartitionStats partition_stats(const Partition& p);

// JSON map of bus id -> region index.
std::string serialize_assignment(const RegionAssignment& a);
RegionAssignment parse_assignment(const std::string& text);
std::uint64_t assignment_hash(const RegionAssignment& a);

}  // namespace opf
