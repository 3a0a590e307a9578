#include "opf/acopf.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace opf {

using nlohmann::json;

LoadProfile nominal_loads(const NetworkCase& c) {
  LoadProfile lp;
  lp.p_d.assign(c.n_bus(), 0.0);
  lp.q_d.assign(c.n_bus(), 0.0);
  for (const Load& l : c.loads) {
    int i = c.bus_index(l.bus);
    lp.p_d[i] = l.p_nom;
    lp.q_d[i] = l.q_nom;
  }
  return lp;
}

Flow branch_flow(double v_i, double v_j, double dtheta, double g, double b) {
  double s = std::sin(dtheta), co = std::cos(dtheta);
  double vv = v_i * v_j;
  Flow f;
  f.p = g * v_i * v_i - vv * (b * s + g * co);
  f.q = -b * v_i * v_i - vv * (g * s - b * co);
  return f;
}

FlowGrad branch_flow_grad(double v_i, double v_j, double dtheta, double g, double b) {
  double s = std::sin(dtheta), co = std::cos(dtheta);
  double A = b * s + g * co;   // dA/dth = b cos - g sin
  double B = g * s - b * co;   // dB/dth = g cos + b sin
  double Ath = b * co - g * s;
  double Bth = g * co + b * s;
  FlowGrad gr;
  gr.dp_dvi = 2.0 * g * v_i - v_j * A;
  gr.dp_dvj = -v_i * A;
  gr.dp_dth = -v_i * v_j * Ath;
  gr.dq_dvi = -2.0 * b * v_i - v_j * B;
  gr.dq_dvj = -v_i * B;
  gr.dq_dth = -v_i * v_j * Bth;
  return gr;
}

FlowHess branch_flow_hess(double v_i, double v_j, double dtheta, double g, double b) {
  double s = std::sin(dtheta), co = std::cos(dtheta);
  double A = b * s + g * co;
  double B = g * s - b * co;
  double Ath = b * co - g * s;  // A'' = -A, B'' = -B
  double Bth = g * co + b * s;
  FlowHess h;
  // order: (v_i, v_j, th)
  h.p[0][0] = 2.0 * g;
  h.p[0][1] = h.p[1][0] = -A;
  h.p[0][2] = h.p[2][0] = -v_j * Ath;
  h.p[1][1] = 0.0;
  h.p[1][2] = h.p[2][1] = -v_i * Ath;
  h.p[2][2] = v_i * v_j * A;
  h.q[0][0] = -2.0 * b;
  h.q[0][1] = h.q[1][0] = -B;
  h.q[0][2] = h.q[2][0] = -v_j * Bth;
  h.q[1][1] = 0.0;
  h.q[1][2] = h.q[2][1] = -v_i * Bth;
  h.q[2][2] = v_i * v_j * B;
  return h;
}

double violation_of(ConstraintSense sense, double f_value) {
  if (sense == ConstraintSense::Inequality) return std::max(0.0, -f_value);
  return std::fabs(f_value);
}

double thermal_violation(double p_f, double q_f, double s_max) {
  return std::max(0.0, std::hypot(p_f, q_f) - s_max);
}

void derive_flows(const NetworkCase& c, OpfSolution& sol) {
  const int ne = c.n_branch();
  sol.p_f.assign(2 * ne, 0.0);
  sol.q_f.assign(2 * ne, 0.0);
  for (int e = 0; e < ne; ++e) {
    const Branch& br = c.branches[e];
    int i = c.bus_index(br.from_bus), j = c.bus_index(br.to_bus);
    double dth = sol.theta[i] - sol.theta[j];
    Flow fwd = branch_flow(sol.v[i], sol.v[j], dth, br.g, br.b);
    Flow rev = branch_flow(sol.v[j], sol.v[i], -dth, br.g, br.b);
    sol.p_f[arc_of(e, false)] = fwd.p;
    sol.q_f[arc_of(e, false)] = fwd.q;
    sol.p_f[arc_of(e, true)] = rev.p;
    sol.q_f[arc_of(e, true)] = rev.q;
  }
}

BalanceResidual balance_residual(const NetworkCase& c, const LoadProfile& loads,
                                 const OpfSolution& sol) {
  if (!sol.has_flows())
    throw std::invalid_argument("balance_residual: solution has no flows");
  BalanceResidual r;
  r.dp.assign(c.n_bus(), 0.0);
  r.dq.assign(c.n_bus(), 0.0);
  for (int i = 0; i < c.n_bus(); ++i) {
    r.dp[i] = -loads.p_d[i];
    r.dq[i] = -loads.q_d[i];
  }
  for (int g = 0; g < c.n_gen(); ++g) {
    int i = c.bus_index(c.generators[g].bus);
    r.dp[i] += sol.p_g[g];
    r.dq[i] += sol.q_g[g];
  }
  for (int e = 0; e < c.n_branch(); ++e) {
    const Branch& br = c.branches[e];
    int i = c.bus_index(br.from_bus), j = c.bus_index(br.to_bus);
    r.dp[i] -= sol.p_f[arc_of(e, false)];
    r.dq[i] -= sol.q_f[arc_of(e, false)];
    r.dp[j] -= sol.p_f[arc_of(e, true)];
    r.dq[j] -= sol.q_f[arc_of(e, true)];
  }
  return r;
}

double objective(const NetworkCase& c, const std::vector<double>& p_g) {
  if (p_g.size() != std::size_t(c.n_gen()))
    throw std::invalid_argument("objective: dispatch size mismatch");
  double total = 0.0;
  for (int g = 0; g < c.n_gen(); ++g) {
    const CostCurve& cc = c.generators[g].cost;
    total += cc.c2 * p_g[g] * p_g[g] + cc.c1 * p_g[g] + cc.c0;
  }
  return total;
}

double ViolationVector::max() const {
  double m = 0.0;
  for (const auto& e : entries) m = std::max(m, e.value);
  return m;
}

double ViolationVector::max_of(ConstraintKind kind) const {
  double m = 0.0;
  for (const auto& e : entries)
    if (e.id.kind == kind) m = std::max(m, e.value);
  return m;
}

double ViolationVector::mean_of(ConstraintKind kind) const {
  double s = 0.0;
  int n = 0;
  for (const auto& e : entries)
    if (e.id.kind == kind) {
      s += e.value;
      ++n;
    }
  return n > 0 ? s / n : 0.0;
}

ViolationVector all_violations(const NetworkCase& c, const LoadProfile& loads,
                               const OpfSolution& sol) {
  ViolationVector vv;
  OpfSolution work = sol;
  derive_flows(c, work);

  for (int i = 0; i < c.n_bus(); ++i) {
    double nu = std::max(0.0, sol.v[i] - c.buses[i].v_max) +
                std::max(0.0, c.buses[i].v_min - sol.v[i]);
    vv.entries.push_back({{ConstraintKind::VBound, i}, nu});
  }
  for (int g = 0; g < c.n_gen(); ++g) {
    const Generator& gen = c.generators[g];
    double nup = std::max(0.0, sol.p_g[g] - gen.p_max) +
                 std::max(0.0, gen.p_min - sol.p_g[g]);
    double nuq = std::max(0.0, sol.q_g[g] - gen.q_max) +
                 std::max(0.0, gen.q_min - sol.q_g[g]);
    vv.entries.push_back({{ConstraintKind::PBound, g}, nup});
    vv.entries.push_back({{ConstraintKind::QBound, g}, nuq});
  }
  for (int e = 0; e < c.n_branch(); ++e) {
    double smax = c.branches[e].s_max;
    for (int rev = 0; rev < 2; ++rev) {
      int a = arc_of(e, rev != 0);
      vv.entries.push_back({{ConstraintKind::Thermal, a},
                            thermal_violation(work.p_f[a], work.q_f[a], smax)});
    }
  }
  BalanceResidual r = balance_residual(c, loads, work);
  for (int i = 0; i < c.n_bus(); ++i) {
    vv.entries.push_back({{ConstraintKind::PBalance, i},
                          violation_of(ConstraintSense::Equality, r.dp[i])});
    vv.entries.push_back({{ConstraintKind::QBalance, i},
                          violation_of(ConstraintSense::Equality, r.dq[i])});
  }
  return vv;
}

const char* kind_name(ConstraintKind k) {
  switch (k) {
    case ConstraintKind::VBound: return "v_bound";
    case ConstraintKind::PBound: return "p_bound";
    case ConstraintKind::QBound: return "q_bound";
    case ConstraintKind::Thermal: return "thermal";
    case ConstraintKind::PBalance: return "p_balance";
    case ConstraintKind::QBalance: return "q_balance";
  }
  return "?";
}

std::string serialize_solution(const NetworkCase& c, const OpfSolution& sol) {
  json j;
  j["bus_id"] = json::array();
  j["v"] = json::array();
  j["theta"] = json::array();
  for (int i = 0; i < c.n_bus(); ++i) {
    j["bus_id"].push_back(c.buses[i].id);
    j["v"].push_back(sol.v[i]);
    j["theta"].push_back(sol.theta[i]);
  }
  j["gen_bus"] = json::array();
  j["p_g"] = json::array();
  j["q_g"] = json::array();
  for (int g = 0; g < c.n_gen(); ++g) {
    j["gen_bus"].push_back(c.generators[g].bus);
    j["p_g"].push_back(sol.p_g[g]);
    j["q_g"].push_back(sol.q_g[g]);
  }
  return j.dump(2) + "\n";
}

OpfSolution parse_solution(const NetworkCase& c, const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid solution JSON: ") + e.what());
  }
  OpfSolution sol;
  try {
    auto v = j.at("v").get<std::vector<double>>();
    auto th = j.at("theta").get<std::vector<double>>();
    auto pg = j.at("p_g").get<std::vector<double>>();
    auto qg = j.at("q_g").get<std::vector<double>>();
    if (int(v.size()) != c.n_bus() || int(th.size()) != c.n_bus() ||
        int(pg.size()) != c.n_gen() || int(qg.size()) != c.n_gen())
      throw ParseError("solution dimensions do not match the case");
    sol.v = std::move(v);
    sol.theta = std::move(th);
    sol.p_g = std::move(pg);
    sol.q_g = std::move(qg);
  } catch (const json::exception& e) {
    throw ParseError(std::string("solution schema error: ") + e.what());
  }
  derive_flows(c, sol);
  return sol;
}

}  // namespace opf
