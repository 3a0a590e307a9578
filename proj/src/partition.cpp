#include "opf/partition.hpp"

#include <algorithm>
#include <queue>
#include <set>

#include <json.hpp>

#include "opf/util.hpp"

namespace opf {

using nlohmann::json;

namespace {

std::vector<std::vector<int>> bus_adjacency(const NetworkCase& c) {
  std::vector<std::vector<int>> adj(c.n_bus());
  for (const Branch& br : c.branches) {
    int a = c.bus_index(br.from_bus), b = c.bus_index(br.to_bus);
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& v : adj) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
  }
  return adj;
}

// Count of coupling edges under a dense region labeling.
int cut_size(const NetworkCase& c, const std::vector<int>& region) {
  int cut = 0;
  for (const Branch& br : c.branches)
    if (region[c.bus_index(br.from_bus)] != region[c.bus_index(br.to_bus)]) ++cut;
  return cut;
}

// True if region k stays connected after removing bus `drop`.
bool region_connected_without(const std::vector<std::vector<int>>& adj,
                              const std::vector<int>& region, int k, int drop) {
  int start = -1, total = 0;
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region[i] == k && int(i) != drop) {
      ++total;
      if (start < 0) start = int(i);
    }
  if (total == 0) return false;  // would empty the region
  std::vector<char> vis(region.size(), 0);
  std::queue<int> q;
  q.push(start);
  vis[start] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!vis[v] && v != drop && region[v] == k) {
        vis[v] = 1;
        ++reached;
        q.push(v);
      }
  }
  return reached == total;
}

}  // namespace

Partition induce_partition(const NetworkCase& c, const RegionAssignment& a) {
  if (a.K < 1) throw ValidationError("partition needs K >= 1");
  Partition p;
  p.assignment = a;
  p.region_of_bus.assign(c.n_bus(), 0);
  for (int i = 0; i < c.n_bus(); ++i) {
    auto it = a.region_of.find(c.buses[i].id);
    if (it == a.region_of.end())
      throw ValidationError("bus " + std::to_string(c.buses[i].id) +
                            " has no region assignment");
    if (it->second < 1 || it->second > a.K)
      throw ValidationError("bus " + std::to_string(c.buses[i].id) +
                            " assigned to region " + std::to_string(it->second) +
                            " outside [1," + std::to_string(a.K) + "]");
    p.region_of_bus[i] = it->second;
  }

  p.region_buses.assign(a.K, {});
  for (int i = 0; i < c.n_bus(); ++i)
    p.region_buses[p.region_of_bus[i] - 1].push_back(i);
  for (int k = 0; k < a.K; ++k)
    if (p.region_buses[k].empty())
      throw ValidationError("region " + std::to_string(k + 1) + " is empty");

  p.internal_edges.assign(a.K, {});
  p.region_coupling_edges.assign(a.K, {});
  for (int e = 0; e < c.n_branch(); ++e) {
    const Branch& br = c.branches[e];
    int rf = p.region_of_bus[c.bus_index(br.from_bus)];
    int rt = p.region_of_bus[c.bus_index(br.to_bus)];
    if (rf == rt) {
      p.internal_edges[rf - 1].push_back(e);
    } else {
      p.coupling_edges.push_back(e);
      p.region_coupling_edges[rf - 1].push_back(e);
      p.region_coupling_edges[rt - 1].push_back(e);
    }
  }

  std::set<int> nco;
  for (int e : p.coupling_edges) {
    nco.insert(c.bus_index(c.branches[e].from_bus));
    nco.insert(c.bus_index(c.branches[e].to_bus));
  }
  p.coupling_buses.assign(nco.begin(), nco.end());

  p.region_coupling_buses.assign(a.K, {});
  for (int i : p.coupling_buses)
    p.region_coupling_buses[p.region_of_bus[i] - 1].push_back(i);

  p.region_loads.assign(a.K, {});
  for (int l = 0; l < c.n_load(); ++l)
    p.region_loads[p.region_of_bus[c.bus_index(c.loads[l].bus)] - 1].push_back(l);
  p.region_generators.assign(a.K, {});
  for (int g = 0; g < c.n_gen(); ++g)
    p.region_generators[p.region_of_bus[c.bus_index(c.generators[g].bus)] - 1]
        .push_back(g);
  return p;
}

RegionAssignment auto_partition(const NetworkCase& c, int K, std::uint64_t seed) {
  const int n = c.n_bus();
  if (K < 1 || K > n)
    throw ValidationError("auto_partition: require 1 <= K <= |N|");
  auto adj = bus_adjacency(c);
  Rng rng = Rng::stream(seed, 0x9a27u);

  // Spread seeds: first at random, the rest farthest-first by BFS distance.
  std::vector<int> seeds;
  seeds.push_back(int(rng.below(std::uint64_t(n))));
  std::vector<int> dist(n, -1);
  auto bfs_from = [&](int s, std::vector<int>& d) {
    std::queue<int> q;
    q.push(s);
    d[s] = 0;
    while (!q.empty()) {
      int u = q.front();
      q.pop();
      for (int v : adj[u])
        if (d[v] < 0) {
          d[v] = d[u] + 1;
          q.push(v);
        }
    }
  };
  std::vector<int> mind(n, -1);
  bfs_from(seeds[0], mind);
  while (int(seeds.size()) < K) {
    int best = -1, bestd = -1;
    for (int i = 0; i < n; ++i)
      if (mind[i] > bestd) {
        bestd = mind[i];
        best = i;
      }
    seeds.push_back(best);
    std::vector<int> d(n, -1);
    bfs_from(best, d);
    for (int i = 0; i < n; ++i) mind[i] = std::min(mind[i], d[i]);
  }

  // Greedy growth: the smallest region absorbs its lowest-id frontier bus.
  std::vector<int> region(n, 0);
  std::vector<int> size(K, 0);
  for (int k = 0; k < K; ++k) {
    region[seeds[k]] = k + 1;
    size[k] = 1;
  }
  int assigned = K;
  while (assigned < n) {
    int grew = 0;
    // order regions by (size, k) so growth stays balanced and deterministic
    std::vector<int> order(K);
    for (int k = 0; k < K; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      return size[a] != size[b] ? size[a] < size[b] : a < b;
    });
    for (int k : order) {
      int pick = -1;
      for (int i = 0; i < n && pick < 0; ++i)
        if (region[i] == k + 1)
          for (int v : adj[i])
            if (region[v] == 0) {
              if (pick < 0 || v < pick) pick = v;
            }
      if (pick >= 0) {
        region[pick] = k + 1;
        ++size[k];
        ++assigned;
        grew = 1;
        break;  // re-evaluate smallest region
      }
    }
    if (!grew) {
      // isolated leftovers cannot occur on a connected graph, but guard
      for (int i = 0; i < n; ++i)
        if (region[i] == 0) {
          region[i] = 1;
          ++assigned;
        }
    }
  }

  // Boundary refinement: move one bus at a time (ascending index) when it
  // strictly reduces the cut, keeps the source region connected and nonempty.
  int cut = cut_size(c, region);
  bool improved = true;
  while (improved) {
    improved = false;
    for (int i = 0; i < n; ++i) {
      int rk = region[i];
      std::set<int> neighbor_regions;
      for (int v : adj[i])
        if (region[v] != rk) neighbor_regions.insert(region[v]);
      for (int nr : neighbor_regions) {
        region[i] = nr;
        int newcut = cut_size(c, region);
        if (newcut < cut && region_connected_without(adj, region, rk, -1) &&
            region_connected_without(adj, region, nr, -1)) {
          // also require the donor region nonempty
          bool empty = true;
          for (int j = 0; j < n; ++j)
            if (region[j] == rk) {
              empty = false;
              break;
            }
          if (!empty) {
            cut = newcut;
            improved = true;
            break;
          }
        }
        region[i] = rk;
      }
    }
  }

  RegionAssignment a;
  a.K = K;
  for (int i = 0; i < n; ++i) a.region_of[c.buses[i].id] = region[i];
  return a;
}

PartitionStats partition_stats(const Partition& p) {
  PartitionStats s;
  int n = 0;
  for (const auto& r : p.region_buses) {
    s.region_sizes.push_back(int(r.size()));
    n += int(r.size());
  }
  s.coupling_edge_count = int(p.coupling_edges.size());
  int max_sz = 0, total_edges = s.coupling_edge_count;
  for (const auto& r : p.internal_edges) total_edges += int(r.size());
  for (int sz : s.region_sizes) max_sz = std::max(max_sz, sz);
  s.max_region_fraction = n > 0 ? double(max_sz) / double(n) : 0.0;
  s.coupling_fraction =
      total_edges > 0 ? double(s.coupling_edge_count) / double(total_edges) : 0.0;
  return s;
}

std::string serialize_assignment(const RegionAssignment& a) {
  json j;
  j["K"] = a.K;
  json m = json::object();
  for (const auto& [bus, k] : a.region_of) m[std::to_string(bus)] = k;
  j["region_of"] = m;
  return j.dump(2) + "\n";
}

RegionAssignment parse_assignment(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid assignment JSON: ") + e.what());
  }
  RegionAssignment a;
  try {
    a.K = j.at("K").get<int>();
    for (auto it = j.at("region_of").begin(); it != j.at("region_of").end(); ++it)
      a.region_of[std::stoi(it.key())] = it.value().get<int>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("assignment schema error: ") + e.what());
  }
  return a;
}

std::uint64_t assignment_hash(const RegionAssignment& a) {
  return fnv1a64(serialize_assignment(a));
}

}  // namespace opf
