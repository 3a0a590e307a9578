#include "opf/netmodel.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <sstream>

#include <json.hpp>

#include "opf/util.hpp"

namespace opf {

using nlohmann::json;

namespace {

constexpr double kUnlimitedSmax = 1e4;  // stand-in for "no thermal limit"

struct Table {
  std::vector<std::vector<double>> rows;
  std::vector<int> line_numbers;
};

// Extracts the rows of `mpc.<name> = [ ... ];` from a MATPOWER .m file.
Table read_table(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  std::size_t pos = 0;
  while (true) {
    pos = text.find(key, pos);
    if (pos == std::string::npos)
      throw ParseError("missing table mpc." + name);
    std::size_t after = pos + key.size();
    while (after < text.size() && std::isspace((unsigned char)text[after])) ++after;
    if (after < text.size() && text[after] == '=') break;
    pos = after;
  }
  std::size_t open = text.find('[', pos);
  std::size_t close = text.find("];", open);
  if (open == std::string::npos || close == std::string::npos)
    throw ParseError("unterminated table mpc." + name);
  int line = 1 + int(std::count(text.begin(), text.begin() + long(open), '\n'));

  Table t;
  std::string body = text.substr(open + 1, close - open - 1);
  std::stringstream ss(body);
  std::string chunk;
  while (std::getline(ss, chunk, '\n')) {
    std::size_t cmt = chunk.find('%');
    if (cmt != std::string::npos) chunk = chunk.substr(0, cmt);
    // a physical line may hold several ';'-terminated rows
    std::stringstream rowss(chunk);
    std::string row;
    while (std::getline(rowss, row, ';')) {
      std::vector<double> vals;
      std::stringstream vs(row);
      std::string tok;
      while (vs >> tok) {
        try {
          std::size_t used = 0;
          double v = std::stod(tok, &used);
          if (used != tok.size()) throw std::invalid_argument(tok);
          vals.push_back(v);
        } catch (const std::exception&) {
          throw ParseError("mpc." + name + " line " + std::to_string(line) +
                           ": bad numeric token '" + tok + "'");
        }
      }
      if (!vals.empty()) {
        t.rows.push_back(std::move(vals));
        t.line_numbers.push_back(line);
      }
    }
    ++line;
  }
  return t;
}

double scalar_field(const std::string& text, const std::string& name) {
  const std::string key = "mpc." + name;
  std::size_t pos = text.find(key);
  if (pos == std::string::npos) throw ParseError("missing mpc." + name);
  std::size_t eq = text.find('=', pos);
  if (eq == std::string::npos) throw ParseError("missing value for mpc." + name);
  return std::stod(text.substr(eq + 1));
}

void require_cols(const Table& t, std::size_t n, const std::string& name) {
  for (std::size_t i = 0; i < t.rows.size(); ++i) {
    if (t.rows[i].size() < n)
      throw ParseError("mpc." + name + " line " +
                       std::to_string(t.line_numbers[i]) + ": expected >= " +
                       std::to_string(n) + " columns, got " +
                       std::to_string(t.rows[i].size()));
  }
}

NetworkCase parse_matpower(const std::string& text) {
  NetworkCase c;
  c.base_mva = scalar_field(text, "baseMVA");
  if (!(c.base_mva > 0)) throw ValidationError("baseMVA must be positive");
  const double base = c.base_mva;

  Table bus = read_table(text, "bus");
  Table gen = read_table(text, "gen");
  Table branch = read_table(text, "branch");
  Table gencost = read_table(text, "gencost");
  require_cols(bus, 13, "bus");
  require_cols(gen, 10, "gen");
  require_cols(branch, 11, "branch");
  require_cols(gencost, 7, "gencost");

  std::map<int, double> pd, qd;
  for (std::size_t i = 0; i < bus.rows.size(); ++i) {
    const auto& r = bus.rows[i];
    Bus b;
    b.id = int(r[0]);
    b.v_max = r[11];
    b.v_min = r[12];
    int area = int(r[6]);
    if (area > 0) b.region_hint = area;
    c.buses.push_back(b);
    if (r[2] != 0.0 || r[3] != 0.0) {
      pd[b.id] += r[2] / base;
      qd[b.id] += r[3] / base;
    }
    // Gs/Bs bus shunts (r[4], r[5]) are not representable in the series-only
    // line model and are discarded.
  }
  std::sort(c.buses.begin(), c.buses.end(),
            [](const Bus& a, const Bus& b) { return a.id < b.id; });
  for (auto& [id, p] : pd) c.loads.push_back(Load{id, p, qd[id]});

  if (gencost.rows.size() != gen.rows.size() &&
      gencost.rows.size() != 2 * gen.rows.size())
    throw ParseError("gencost must have one row per gen row (or two)");
  for (std::size_t i = 0; i < gen.rows.size(); ++i) {
    const auto& r = gen.rows[i];
    if (int(r[7]) == 0) continue;  // out of service
    Generator gn;
    gn.bus = int(r[0]);
    gn.q_max = r[3] / base;
    gn.q_min = r[4] / base;
    gn.p_max = r[8] / base;
    gn.p_min = r[9] / base;
    const auto& cr = gencost.rows[i];
    int model = int(cr[0]);
    int ncost = int(cr[3]);
    if (model != 2)
      throw ParseError("gencost line " + std::to_string(gencost.line_numbers[i]) +
                       ": only polynomial cost model 2 is supported");
    if (ncost < 1 || ncost > 3 || cr.size() < std::size_t(4 + ncost))
      throw ParseError("gencost line " + std::to_string(gencost.line_numbers[i]) +
                       ": polynomial degree must be <= 2");
    double cmw2 = 0, cmw1 = 0, cmw0 = 0;
    if (ncost == 3) { cmw2 = cr[4]; cmw1 = cr[5]; cmw0 = cr[6]; }
    else if (ncost == 2) { cmw1 = cr[4]; cmw0 = cr[5]; }
    else { cmw0 = cr[4]; }
    gn.cost.c2 = cmw2 * base * base;
    gn.cost.c1 = cmw1 * base;
    gn.cost.c0 = cmw0;
    c.generators.push_back(gn);
  }

  for (std::size_t i = 0; i < branch.rows.size(); ++i) {
    const auto& r = branch.rows[i];
    if (int(r[10]) == 0) continue;  // out of service
    Branch br;
    br.from_bus = int(r[0]);
    br.to_bus = int(r[1]);
    double res = r[2], x = r[3];
    double tap = r[8] != 0.0 ? r[8] : 1.0;
    double zmag2 = res * res + x * x;
    if (zmag2 <= 0.0)
      throw ParseError("branch line " + std::to_string(branch.line_numbers[i]) +
                       ": zero series impedance");
    // Fold the tap into the series admittance: y_eff = y / tap. Charging
    // (r[4]) and phase shift (r[9]) are discarded.
    br.g = res / zmag2 / tap;
    br.b = -x / zmag2 / tap;
    double rate = r[5];
    br.s_max = rate > 0.0 ? rate / base : kUnlimitedSmax;
    c.branches.push_back(br);
  }
  return c;
}

NetworkCase parse_native_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON case: ") + e.what());
  }
  NetworkCase c;
  try {
    c.base_mva = j.at("base_mva").get<double>();
    for (const auto& jb : j.at("buses")) {
      Bus b;
      b.id = jb.at("id").get<int>();
      b.v_min = jb.at("v_min").get<double>();
      b.v_max = jb.at("v_max").get<double>();
      if (jb.contains("region_hint")) b.region_hint = jb.at("region_hint").get<int>();
      c.buses.push_back(b);
    }
    for (const auto& jb : j.at("branches")) {
      Branch br;
      br.from_bus = jb.at("from_bus").get<int>();
      br.to_bus = jb.at("to_bus").get<int>();
      br.g = jb.at("g").get<double>();
      br.b = jb.at("b").get<double>();
      br.s_max = jb.at("s_max").get<double>();
      c.branches.push_back(br);
    }
    for (const auto& jg : j.at("generators")) {
      Generator g;
      g.bus = jg.at("bus").get<int>();
      g.p_min = jg.at("p_min").get<double>();
      g.p_max = jg.at("p_max").get<double>();
      g.q_min = jg.at("q_min").get<double>();
      g.q_max = jg.at("q_max").get<double>();
      const auto& jc = jg.at("cost");
      g.cost = CostCurve{jc.at("c2").get<double>(), jc.at("c1").get<double>(),
                         jc.at("c0").get<double>()};
      c.generators.push_back(g);
    }
    for (const auto& jl : j.at("loads")) {
      Load l;
      l.bus = jl.at("bus").get<int>();
      l.p_nom = jl.at("p_nom").get<double>();
      l.q_nom = jl.at("q_nom").get<double>();
      c.loads.push_back(l);
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("case JSON schema error: ") + e.what());
  }
  return c;
}

void validate(NetworkCase& c) {
  if (c.buses.empty()) throw ValidationError("case has no buses");
  if (c.branches.empty()) throw ValidationError("case has no branches");
  std::map<int, int> index;
  for (std::size_t i = 0; i < c.buses.size(); ++i) {
    const Bus& b = c.buses[i];
    if (index.count(b.id))
      throw ValidationError("duplicate bus id " + std::to_string(b.id));
    if (!(b.v_min > 0.0) || !(b.v_min <= b.v_max))
      throw ValidationError("bus " + std::to_string(b.id) +
                            ": require 0 < v_min <= v_max");
    index[b.id] = int(i);
  }
  for (std::size_t i = 0; i < c.branches.size(); ++i) {
    const Branch& br = c.branches[i];
    if (br.from_bus == br.to_bus)
      throw ValidationError("branch " + std::to_string(i) + ": from == to (" +
                            std::to_string(br.from_bus) + ")");
    if (!index.count(br.from_bus) || !index.count(br.to_bus))
      throw ValidationError("branch " + std::to_string(i) +
                            " references unknown bus " +
                            std::to_string(index.count(br.from_bus)
                                               ? br.to_bus
                                               : br.from_bus));
    if (!(br.s_max > 0.0))
      throw ValidationError("branch " + std::to_string(i) + ": s_max must be > 0");
  }
  for (std::size_t i = 0; i < c.generators.size(); ++i) {
    const Generator& g = c.generators[i];
    if (!index.count(g.bus))
      throw ValidationError("generator " + std::to_string(i) +
                            " references unknown bus " + std::to_string(g.bus));
    if (g.p_min > g.p_max || g.q_min > g.q_max)
      throw ValidationError("generator " + std::to_string(i) +
                            ": bounds must satisfy min <= max");
    if (g.cost.c2 < 0.0)
      throw ValidationError("generator " + std::to_string(i) +
                            ": quadratic cost coefficient must be >= 0");
  }
  std::map<int, int> seen_load;
  for (std::size_t i = 0; i < c.loads.size(); ++i) {
    const Load& l = c.loads[i];
    if (!index.count(l.bus))
      throw ValidationError("load " + std::to_string(i) +
                            " references unknown bus " + std::to_string(l.bus));
    if (seen_load.count(l.bus))
      throw ValidationError("multiple load records at bus " +
                            std::to_string(l.bus));
    if (!std::isfinite(l.p_nom) || !std::isfinite(l.q_nom))
      throw ValidationError("load " + std::to_string(i) + ": non-finite demand");
    seen_load[l.bus] = 1;
  }
  std::sort(c.loads.begin(), c.loads.end(),
            [](const Load& a, const Load& b) { return a.bus < b.bus; });

  // connectivity over (buses, branches)
  std::vector<std::vector<int>> adj(c.buses.size());
  for (const Branch& br : c.branches) {
    int a = index[br.from_bus], b = index[br.to_bus];
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  std::vector<char> vis(c.buses.size(), 0);
  std::queue<int> q;
  q.push(0);
  vis[0] = 1;
  int reached = 1;
  while (!q.empty()) {
    int u = q.front();
    q.pop();
    for (int v : adj[u])
      if (!vis[v]) {
        vis[v] = 1;
        ++reached;
        q.push(v);
      }
  }
  if (reached != int(c.buses.size())) {
    for (std::size_t i = 0; i < vis.size(); ++i)
      if (!vis[i])
        throw ValidationError("graph is disconnected: bus " +
                              std::to_string(c.buses[i].id) +
                              " unreachable from bus " +
                              std::to_string(c.buses[0].id));
  }
}

json to_json(const NetworkCase& c) {
  json j;
  j["base_mva"] = c.base_mva;
  j["buses"] = json::array();
  for (const Bus& b : c.buses) {
    json jb{{"id", b.id}, {"v_min", b.v_min}, {"v_max", b.v_max}};
    if (b.region_hint) jb["region_hint"] = *b.region_hint;
    j["buses"].push_back(jb);
  }
  j["branches"] = json::array();
  for (const Branch& br : c.branches)
    j["branches"].push_back(json{{"from_bus", br.from_bus},
                                 {"to_bus", br.to_bus},
                                 {"g", br.g},
                                 {"b", br.b},
                                 {"s_max", br.s_max}});
  j["generators"] = json::array();
  for (const Generator& g : c.generators)
    j["generators"].push_back(json{{"bus", g.bus},
                                   {"p_min", g.p_min},
                                   {"p_max", g.p_max},
                                   {"q_min", g.q_min},
                                   {"q_max", g.q_max},
                                   {"cost",
                                    json{{"c2", g.cost.c2},
                                         {"c1", g.cost.c1},
                                         {"c0", g.cost.c0}}}});
  j["loads"] = json::array();
  for (const Load& l : c.loads)
    j["loads"].push_back(
        json{{"bus", l.bus}, {"p_nom", l.p_nom}, {"q_nom", l.q_nom}});
  return j;
}

}  // namespace

void NetworkCase::rebuild_indexes() {
  bus_index_.clear();
  for (std::size_t i = 0; i < buses.size(); ++i) bus_index_[buses[i].id] = int(i);
  gens_at_bus_.assign(buses.size(), {});
  for (std::size_t g = 0; g < generators.size(); ++g)
    gens_at_bus_[bus_index_.at(generators[g].bus)].push_back(int(g));
}

NetworkCase parse_case(const std::string& text) {
  std::size_t i = text.find_first_not_of(" \t\r\n");
  if (i == std::string::npos) throw ParseError("empty case file");
  NetworkCase c =
      text[i] == '{' ? parse_native_json(text) : parse_matpower(text);
  validate(c);
  c.rebuild_indexes();
  return c;
}

CaseStats case_stats(const NetworkCase& c) {
  return CaseStats{c.n_bus(), c.n_branch(), c.n_load(), c.n_gen()};
}

std::string serialize_case(const NetworkCase& c) {
  return to_json(c).dump(2) + "\n";
}

std::uint64_t case_hash(const NetworkCase& c) {
  return fnv1a64(serialize_case(c));
}

}  // namespace opf
