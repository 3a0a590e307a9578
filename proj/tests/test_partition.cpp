#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>

#include "opf/partition.hpp"
#include "opf/util.hpp"

using namespace opf;

static std::string data(const std::string& f) {
  return std::string(OPFLEARN_DATA_DIR) + "/" + f;
}

static RegionAssignment two_region_toy() {
  RegionAssignment a;
  a.K = 2;
  for (int b : {1, 2, 3}) a.region_of[b] = 1;
  for (int b : {4, 5, 6}) a.region_of[b] = 2;
  return a;
}

// Brute-force oracle: classify every edge by its endpoint regions and
// recollect all sets independently of induce_partition.
struct BruteSets {
  std::set<int> coupling_edges, coupling_buses;
  std::vector<std::set<int>> internal, to_region, coupling_in_region;
};
static BruteSets brute_force(const NetworkCase& c, const RegionAssignment& a) {
  BruteSets bs;
  bs.internal.resize(a.K);
  bs.to_region.resize(a.K);
  bs.coupling_in_region.resize(a.K);
  for (int e = 0; e < c.n_branch(); ++e) {
    int i = c.bus_index(c.branches[e].from_bus);
    int j = c.bus_index(c.branches[e].to_bus);
    int ri = a.region_of.at(c.buses[i].id), rj = a.region_of.at(c.buses[j].id);
    if (ri == rj) {
      bs.internal[ri - 1].insert(e);
    } else {
      bs.coupling_edges.insert(e);
      bs.coupling_buses.insert(i);
      bs.coupling_buses.insert(j);
      bs.to_region[ri - 1].insert(e);
      bs.to_region[rj - 1].insert(e);
      bs.coupling_in_region[ri - 1].insert(i);
      bs.coupling_in_region[rj - 1].insert(j);
    }
  }
  return bs;
}

static void check_against_brute(const NetworkCase& c, const RegionAssignment& a) {
  Partition p = induce_partition(c, a);
  BruteSets bs = brute_force(c, a);
  CHECK(std::set<int>(p.coupling_edges.begin(), p.coupling_edges.end()) ==
        bs.coupling_edges);
  CHECK(std::set<int>(p.coupling_buses.begin(), p.coupling_buses.end()) ==
        bs.coupling_buses);
  for (int k = 0; k < a.K; ++k) {
    CHECK(std::set<int>(p.internal_edges[k].begin(), p.internal_edges[k].end()) ==
          bs.internal[k]);
    CHECK(std::set<int>(p.region_coupling_edges[k].begin(),
                        p.region_coupling_edges[k].end()) == bs.to_region[k]);
    CHECK(std::set<int>(p.region_coupling_buses[k].begin(),
                        p.region_coupling_buses[k].end()) ==
          bs.coupling_in_region[k]);
  }
  // edge partition property
  std::size_t total = p.coupling_edges.size();
  for (const auto& ie : p.internal_edges) total += ie.size();
  CHECK(total == std::size_t(c.n_branch()));
  // every coupling bus is an endpoint of some coupling edge and every
  // region-coupling edge touches its region
  for (int k = 0; k < a.K; ++k)
    for (int e : p.region_coupling_edges[k]) {
      int i = c.bus_index(c.branches[e].from_bus);
      int j = c.bus_index(c.branches[e].to_bus);
      CHECK((p.region_of_bus[i] == k + 1 || p.region_of_bus[j] == k + 1));
    }
}

TEST_CASE("toy two-region split matches the known coupling sets") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  Partition p = induce_partition(c, two_region_toy());
  // coupling buses are 3 and 4; the single coupling line is 3-4
  REQUIRE(p.coupling_buses.size() == 2);
  CHECK(c.buses[p.coupling_buses[0]].id == 3);
  CHECK(c.buses[p.coupling_buses[1]].id == 4);
  REQUIRE(p.coupling_edges.size() == 1);
  const Branch& br = c.branches[p.coupling_edges[0]];
  CHECK(br.from_bus == 3);
  CHECK(br.to_bus == 4);
  PartitionStats st = partition_stats(p);
  CHECK(st.region_sizes == std::vector<int>{3, 3});
  CHECK(st.coupling_edge_count == 1);
}

TEST_CASE("single region has no coupling") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  RegionAssignment a;
  a.K = 1;
  for (const auto& b : c.buses) a.region_of[b.id] = 1;
  Partition p = induce_partition(c, a);
  CHECK(p.coupling_edges.empty());
  CHECK(p.coupling_buses.empty());
  CHECK(p.internal_edges[0].size() == std::size_t(c.n_branch()));
  CHECK(partition_stats(p).coupling_fraction == 0.0);
}

TEST_CASE("unassigned bus and empty region raise") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  RegionAssignment a = two_region_toy();
  a.region_of.erase(5);
  CHECK_THROWS_AS(induce_partition(c, a), ValidationError);
  RegionAssignment b = two_region_toy();
  b.K = 3;  // region 3 empty
  CHECK_THROWS_AS(induce_partition(c, b), ValidationError);
}

TEST_CASE("random assignments equal brute-force classification") {
  NetworkCase c = parse_case(read_file(data("case118.m")));
  Rng rng(77);
  for (int trial = 0; trial < 25; ++trial) {
    int K = 2 + int(rng.below(5));
    RegionAssignment a;
    a.K = K;
    // random but guaranteed nonempty: first K buses cover each region
    for (int i = 0; i < c.n_bus(); ++i)
      a.region_of[c.buses[i].id] = i < K ? i + 1 : 1 + int(rng.below(K));
    check_against_brute(c, a);
  }
}

TEST_CASE("induce_partition is deterministic") {
  NetworkCase c = parse_case(read_file(data("case118.m")));
  RegionAssignment a = auto_partition(c, 4, 7);
  Partition p1 = induce_partition(c, a);
  Partition p2 = induce_partition(c, a);
  CHECK(p1.coupling_edges == p2.coupling_edges);
  CHECK(p1.coupling_buses == p2.coupling_buses);
  for (int k = 0; k < 4; ++k) {
    CHECK(p1.internal_edges[k] == p2.internal_edges[k]);
    CHECK(p1.region_buses[k] == p2.region_buses[k]);
  }
}

TEST_CASE("auto_partition K=1 and K=N degenerate cases") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  RegionAssignment a1 = auto_partition(c, 1, 3);
  Partition p1 = induce_partition(c, a1);
  CHECK(p1.coupling_edges.empty());
  RegionAssignment an = auto_partition(c, c.n_bus(), 3);
  Partition pn = induce_partition(c, an);
  CHECK(int(pn.coupling_edges.size()) == c.n_branch());
  CHECK_THROWS_AS(auto_partition(c, c.n_bus() + 1, 3), ValidationError);
}

TEST_CASE("auto_partition on the toy case finds a near-optimal 2-cut") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  // exhaustive oracle over all 2-partitions with both regions nonempty
  int best = c.n_branch();
  for (int mask = 1; mask < (1 << 6) - 1; ++mask) {
    int cut = 0;
    for (const auto& br : c.branches) {
      int bi = c.bus_index(br.from_bus), bj = c.bus_index(br.to_bus);
      if (((mask >> bi) & 1) != ((mask >> bj) & 1)) ++cut;
    }
    best = std::min(best, cut);
  }
  CHECK(best == 1);
  for (std::uint64_t seed : {0ULL, 1ULL, 2ULL, 3ULL, 42ULL}) {
    Partition p = induce_partition(c, auto_partition(c, 2, seed));
    CHECK(int(p.coupling_edges.size()) <= 2);
  }
}

TEST_CASE("auto_partition determinism and connected nonempty regions") {
  NetworkCase c = parse_case(read_file(data("case118.m")));
  RegionAssignment a = auto_partition(c, 4, 11);
  RegionAssignment b = auto_partition(c, 4, 11);
  CHECK(a.region_of == b.region_of);
  Partition p = induce_partition(c, a);
  for (int k = 0; k < 4; ++k) CHECK(!p.region_buses[k].empty());
  // connectivity of each region by BFS over internal edges
  for (int k = 0; k < 4; ++k) {
    std::set<int> nodes(p.region_buses[k].begin(), p.region_buses[k].end());
    std::set<int> seen{*nodes.begin()};
    bool grewflag = true;
    while (grewflag) {
      grewflag = false;
      for (int e : p.internal_edges[k]) {
        int i = c.bus_index(c.branches[e].from_bus);
        int j = c.bus_index(c.branches[e].to_bus);
        if (seen.count(i) && !seen.count(j)) { seen.insert(j); grewflag = true; }
        if (seen.count(j) && !seen.count(i)) { seen.insert(i); grewflag = true; }
      }
    }
    CHECK(seen == nodes);
  }
}

TEST_CASE("partition stats recount on auto partition") {
  NetworkCase c = parse_case(read_file(data("case118.m")));
  Partition p = induce_partition(c, auto_partition(c, 4, 5));
  PartitionStats st = partition_stats(p);
  int n = 0, maxsz = 0;
  for (int s : st.region_sizes) {
    n += s;
    maxsz = std::max(maxsz, s);
  }
  CHECK(n == c.n_bus());
  CHECK(st.max_region_fraction == doctest::Approx(double(maxsz) / c.n_bus()));
  // recount oracle
  BruteSets bs = brute_force(c, p.assignment);
  CHECK(st.coupling_edge_count == int(bs.coupling_edges.size()));
}

TEST_CASE("assignment file round trip") {
  NetworkCase c = parse_case(read_file(data("case6.m")));
  RegionAssignment a = two_region_toy();
  RegionAssignment b = parse_assignment(serialize_assignment(a));
  CHECK(a.K == b.K);
  CHECK(a.region_of == b.region_of);
  CHECK(assignment_hash(a) == assignment_hash(b));
}
