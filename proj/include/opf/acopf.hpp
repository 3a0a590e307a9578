#pragma once

#include <string>
#include <vector>

#include "opf/netmodel.hpp"

namespace opf {

// Directed arcs: branch e yields arc 2e (from->to) and arc 2e+1 (to->from).
inline int arc_of(int branch, bool reverse) { return 2 * branch + (reverse ? 1 : 0); }
inline int branch_of_arc(int arc) { return arc / 2; }
inline bool arc_reversed(int arc) { return arc % 2 != 0; }

struct LoadProfile {
  std::vector<double> p_d;  // per bus index
  std::vector<double> q_d;
};

// Build the per-bus profile holding each load at its nominal value.
LoadProfile nominal_loads(const NetworkCase& c);

struct OpfSolution {
  std::vector<double> v;      // per bus
  std::vector<double> theta;  // per bus, radians
  std::vector<double> p_g;    // per generator
  std::vector<double> q_g;
  std::vector<double> p_f;    // per arc, derived
  std::vector<double> q_f;
  bool has_flows() const { return !p_f.empty(); }
};

// Ohm's-law arc flow for endpoint voltages (v_i, v_j), angle difference
// dtheta = theta_i - theta_j, and series admittance (g, b):
//   p_f =  g v_i^2 - v_i v_j (b sin + g cos)
//   q_f = -b v_i^2 - v_i v_j (g sin - b cos)
struct Flow {
  double p = 0.0, q = 0.0;
};
Flow branch_flow(double v_i, double v_j, double dtheta, double g, double b);

// Partials of (p_f, q_f) with respect to (v_i, v_j, dtheta).
struct FlowGrad {
  double dp_dvi = 0, dp_dvj = 0, dp_dth = 0;
  double dq_dvi = 0, dq_dvj = 0, dq_dth = 0;
};
FlowGrad branch_flow_grad(double v_i, double v_j, double dtheta, double g, double b);

// Second partials, symmetric 3x3 blocks in (v_i, v_j, dtheta) order.
struct FlowHess {
  double p[3][3] = {};
  double q[3][3] = {};
};
FlowHess branch_flow_hess(double v_i, double v_j, double dtheta, double g, double b);

enum class ConstraintSense { Inequality, Equality };  // f(x) >= 0 | f(x) = 0

// max{0, -f} for inequalities, |f| for equalities.
double violation_of(ConstraintSense sense, double f_value);

// max{0, sqrt(p^2+q^2) - s_max}, in apparent-power units.
double thermal_violation(double p_f, double q_f, double s_max);

// Fills sol.p_f/q_f from (v, theta) so the Ohm's-law constraints hold by
// construction.
void derive_flows(const NetworkCase& c, OpfSolution& sol);

// Per-bus active/reactive balance residuals:
//   dp_i = sum_g p_g - p_d_i - sum_{arcs out of i} p_f
struct BalanceResidual {
  std::vector<double> dp;
  std::vector<double> dq;
};
BalanceResidual balance_residual(const NetworkCase& c, const LoadProfile& loads,
                                 const OpfSolution& sol);

double objective(const NetworkCase& c, const std::vector<double>& p_g);

enum class ConstraintKind { VBound, PBound, QBound, Thermal, PBalance, QBalance };

struct ConstraintId {
  ConstraintKind kind;
  int index;  // bus index, generator index or arc index
  bool operator==(const ConstraintId&) const = default;
};

struct ViolationEntry {
  ConstraintId id;
  double value = 0.0;
};

struct ViolationVector {
  std::vector<ViolationEntry> entries;
  double max() const;
  double max_of(ConstraintKind kind) const;
  double mean_of(ConstraintKind kind) const;
};

// One entry per constraint instance of the full OPF: v bounds per bus,
// p/q bounds per generator, thermal per arc, p/q balance per bus. Flows are
// recomputed from (v, theta) internally.
ViolationVector all_violations(const NetworkCase& c, const LoadProfile& loads,
                               const OpfSolution& sol);

const char* kind_name(ConstraintKind k);

// Solution file format: JSON arrays keyed by bus/generator id.
std::string serialize_solution(const NetworkCase& c, const OpfSolution& sol);
OpfSolution parse_solution(const NetworkCase& c, const std::string& text);

}  // namespace opf
