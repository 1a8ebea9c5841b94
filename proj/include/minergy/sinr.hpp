#pragma once

// Radio-layer formulation: SINR, channel capacities, the no-interference
// property, the reduction to the flow problem, and sequential schedule
// synthesis.
//
// A transmission from x_i to x_j under interferer pairs U has
//     s = P0 / (N0 + P0 * sum_{(k,m) in U} gain(k,m)^{-1} * gain(k,j))
// and capacity C = log(1 + s). Any interferer strictly lowers C, so optimal
// schedules serialize transmissions; with interference gone every link runs
// at the constant capacity C0 = log(1 + P0/N0) and the energy objective
// collapses to the flow problem with edge cost gain^{-1}.

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"

namespace minergy {

/// Positive signal gain between two positions, represented through its
/// reciprocal attenuation cost so the flow reduction is exact.
class GainModel {
 public:
  /// gamma(d) = d^{-a}.
  static GainModel power_law(double a) { return GainModel(CostModel::monomial(a)); }

  /// gamma(d) = 1 / (d^a + lambda * d^b).
  static GainModel inverse_two_term(double a, double b, double lambda) {
    return GainModel(CostModel::two_term(a, b, lambda));
  }

  /// gamma(d) = 1 / cost(d) for an arbitrary nonnegative-combination cost.
  static GainModel inverse_cost(CostModel attenuation) {
    return GainModel(std::move(attenuation));
  }

  /// The reciprocal cost model 1/gamma; this is the edge cost of the
  /// reduced flow problem.
  const CostModel& attenuation() const { return attenuation_; }

  /// gamma(x, y); positive for distinct positions.
  double operator()(double x, double y) const {
    if (x == y) throw DegenerateGain("gain undefined for coincident positions x=" +
                                     detail::num(x));
    const double c = edge_cost(attenuation_, x, y);
    if (!(c > 0.0) || !std::isfinite(c))
      throw DegenerateGain("attenuation " + detail::num(c) + " at distance " +
                           detail::num(std::abs(x - y)) + " gives no positive gain");
    return 1.0 / c;
  }

  std::string describe() const { return "1/(" + attenuation_.describe() + ")"; }

 private:
  explicit GainModel(CostModel attenuation) : attenuation_(std::move(attenuation)) {}
  CostModel attenuation_;
};

struct RadioParams {
  RadioParams(double p0_in, double n0_in, GainModel gain_in, double log_base_in = 2.0)
      : p0(p0_in), n0(n0_in), gain(std::move(gain_in)), log_base(log_base_in) {
    if (!(p0 > 0.0) || !std::isfinite(p0))
      throw Error("RadioParams: P0 must be positive, got " + detail::num(p0));
    if (!(n0 > 0.0) || !std::isfinite(n0))
      throw Error("RadioParams: N0 must be positive, got " + detail::num(n0));
    if (!(log_base > 1.0) || !std::isfinite(log_base))
      throw Error("RadioParams: log base must exceed 1, got " + detail::num(log_base));
  }

  double p0;
  double n0;
  GainModel gain;
  double log_base;
};

/// One interfering transmission, as the (sender, receiver) position pair.
using InterfererPair = std::pair<double, double>;

/// SINR of the link xi -> xj under the given concurrent transmissions.
inline double sinr_value(const RadioParams& params, double xi, double xj,
                         const std::vector<InterfererPair>& interferers = {}) {
  if (xi == xj) throw DegenerateGain("sinr_value: sender and receiver coincide");
  double interference = 0.0;
  for (const auto& [xk, xm] : interferers) {
    if (xk == xi && xm == xj)
      throw std::invalid_argument("sinr_value: the link cannot interfere with itself");
    // sender k transmits at power P0 / gain(k, m); the receiver j hears it
    // through gain(k, j).
    interference += (1.0 / params.gain(xk, xm)) * params.gain(xk, xj);
  }
  return params.p0 / (params.n0 + params.p0 * interference);
}

/// Channel capacity log_base(1 + SINR) of the link under interference.
inline double capacity(const RadioParams& params, double xi, double xj,
                       const std::vector<InterfererPair>& interferers = {}) {
  return std::log1p(sinr_value(params, xi, xj, interferers)) / std::log(params.log_base);
}

/// The interference-free capacity C0 = log_base(1 + P0/N0), shared by every
/// link regardless of distance.
inline double interference_free_capacity(const RadioParams& params) {
  return std::log1p(params.p0 / params.n0) / std::log(params.log_base);
}

/// True when the interferers strictly lower the link capacity below C0 —
/// always the case for a nonempty set with positive gains.
inline bool interference_penalty_check(const RadioParams& params, double xi, double xj,
                                       const std::vector<InterfererPair>& interferers) {
  return capacity(params, xi, xj, interferers) < capacity(params, xi, xj, {});
}

/// The flow problem equivalent to the radio problem: same positions, data
/// volumes scaled by P0/C0, edge cost gamma^{-1}. Solving it and dividing
/// times out again maps back exactly.
struct ReducedFlowProblem {
  NetworkInstance instance;  // data volumes scaled by p0/c0
  CostModel cost;            // the attenuation model gamma^{-1}
  double p0 = 0.0;
  double c0 = 0.0;
};

inline ReducedFlowProblem reduce_to_flow(const NetworkInstance& inst,
                                         const RadioParams& params) {
  const double c0 = interference_free_capacity(params);
  std::vector<double> scaled = inst.data();
  for (double& q : scaled) q *= params.p0 / c0;
  return ReducedFlowProblem{NetworkInstance(inst.positions(), scaled),
                            params.gain.attenuation(), params.p0, c0};
}

struct Slot {
  int sender = 0;
  int receiver = 0;
  double start = 0.0;
  double end = 0.0;
  double rate = 0.0;    // data units per time unit (= C0)
  double amount = 0.0;  // data units moved in this slot
  double energy = 0.0;  // P0 * gamma^{-1} * duration
};

struct Schedule {
  std::vector<Slot> slots;          // ordered by start time, back to back
  std::vector<double> node_energy;  // indexed by node, entry 0 stays zero
  double total_energy = 0.0;
  double c0 = 0.0;
};

/// Serialize a feasible flow (in data units) into non-overlapping slots.
/// Every positive q[i][j] becomes one slot of duration q/C0 at rate C0; an
/// edge starts only after all inflows of its sender have completed, and
/// ready edges are emitted farthest sender first (receiver position breaks
/// ties). Cyclic flows cannot be ordered and raise InfeasibleFlow.
inline Schedule make_schedule(const NetworkInstance& inst, const RadioParams& params,
                              const FlowMatrix& flow) {
  const FeasibilityReport report = check_feasible(inst, flow);
  if (!report.feasible)
    throw InfeasibleFlow("make_schedule: flow violates conservation at node " +
                         std::to_string(report.worst_node) + " (residual " +
                         detail::num(report.max_abs_residual) + ")");

  const int n = inst.size();
  const double c0 = interference_free_capacity(params);
  std::vector<FlowMatrix::Edge> pending = flow.edges();
  std::vector<int> inflows(static_cast<std::size_t>(n) + 1, 0);
  for (const auto& e : pending) ++inflows[static_cast<std::size_t>(e.to)];

  Schedule sched;
  sched.c0 = c0;
  sched.node_energy.assign(static_cast<std::size_t>(n) + 1, 0.0);

  double clock = 0.0;
  while (!pending.empty()) {
    int pick = -1;
    for (int i = 0; i < static_cast<int>(pending.size()); ++i) {
      const auto& e = pending[static_cast<std::size_t>(i)];
      if (inflows[static_cast<std::size_t>(e.from)] != 0) continue;
      if (pick < 0) {
        pick = i;
        continue;
      }
      const auto& best = pending[static_cast<std::size_t>(pick)];
      const double xe = inst.x(e.from), xb = inst.x(best.from);
      if (xe > xb || (xe == xb && inst.x(e.to) < inst.x(best.to))) pick = i;
    }
    if (pick < 0)
      throw InfeasibleFlow("make_schedule: cyclic flow; " +
                           std::to_string(pending.size()) + " edges cannot be ordered");

    const FlowMatrix::Edge e = pending[static_cast<std::size_t>(pick)];
    pending.erase(pending.begin() + pick);
    --inflows[static_cast<std::size_t>(e.to)];

    Slot slot;
    slot.sender = e.from;
    slot.receiver = e.to;
    slot.rate = c0;
    slot.amount = e.amount;
    slot.start = clock;
    slot.end = clock + e.amount / c0;
    slot.energy = params.p0 * edge_cost(params.gain.attenuation(), inst.x(e.from), inst.x(e.to)) *
                  (e.amount / c0);
    clock = slot.end;
    sched.node_energy[static_cast<std::size_t>(e.from)] += slot.energy;
    sched.total_energy += slot.energy;
    sched.slots.push_back(slot);
  }
  return sched;
}

}  // namespace minergy
