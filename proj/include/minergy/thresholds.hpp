#pragma once

// Exponent thresholds a_k and coefficient thresholds lambda_*.
//
// For node k the sign of
//     relay_slack(k, a) = |x_N - x_k|^a + x_N^a - x_k^a
// decides whether routing k's data via the far node N beats sending it
// straight to the collector under a monomial cost d^a: negative slack
// favors the relay. The root a_k of relay_slack(k, .) is the exponent at
// which node k flips. Roots exist exactly for the n' near-half nodes and
// decrease with k, cutting the exponent axis into cells
//     [1, inf), [a_1, 1], [a_2, a_1], ..., (-inf, a_{n'}]
// indexed -1, 0, 1, ..., n'; each cell has one optimal routing pattern.
//
// For two-term costs d^a + lambda*d^b the switch points in lambda are the
// crossovers where two graphs' energies coincide.

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "core.hpp"
#include "graphs.hpp"

namespace minergy {

/// |x_N - x_k|^a + x_N^a - x_k^a for a sensor k in [1, N-1].
inline double relay_slack(const NetworkInstance& inst, int k, double a) {
  if (k < 1 || k >= inst.size())
    throw IndexOutOfRange("relay_slack: node " + std::to_string(k));
  const double xn = inst.x(inst.size());
  const double xk = inst.x(k);
  return std::pow(xn - xk, a) + std::pow(xn, a) - std::pow(xk, a);
}

/// Root of relay_slack(k, .) for a near-half node k in [1, n'].
/// Brackets by doubling downward from a = 1, scans the bracket for
/// unexpected extra sign changes (step 0.01), then bisects until the
/// residual is <= tol or the interval collapses.
inline double find_a_root(const NetworkInstance& inst, int k, double tol = 1e-12) {
  const int np = n_prime(inst);
  if (k < 1 || k > np)
    throw IndexOutOfRange("find_a_root: k=" + std::to_string(k) + " outside [1, n'=" +
                          std::to_string(np) + "]");
  const auto f = [&](double a) { return relay_slack(inst, k, a); };

  // f(1) = 2 (x_N - x_k) > 0; move down until the sign flips.
  double hi = 1.0;
  double offset = 1.0;
  double lo = hi - offset;
  for (int steps = 0;; ++steps) {
    const double flo = f(lo);
    if (!std::isfinite(flo))
      throw NoBracket("find_a_root: slack not finite at a=" + detail::num(lo));
    if (flo < 0.0) break;
    if (steps >= 2000)
      throw NoBracket("find_a_root: no sign change for node " + std::to_string(k));
    hi = lo;
    offset *= 2.0;
    lo = 1.0 - offset;
  }

  // Diagnostic scan: one root expected in [lo, 1].
  {
    int changes = 0;
    double prev = f(lo);
    for (double a = lo + 0.01; a < 1.0 + 0.005; a += 0.01) {
      const double cur = f(std::min(a, 1.0));
      if (prev != 0.0 && cur != 0.0 && (prev < 0.0) != (cur < 0.0)) ++changes;
      if (cur != 0.0) prev = cur;
    }
    if (changes > 1)
      throw MultipleRoots("find_a_root: " + std::to_string(changes) +
                          " sign changes in the bracket for node " + std::to_string(k));
  }

  double mid = 0.5 * (lo + hi);
  for (int it = 0; it < 500; ++it) {
    mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if (std::abs(fm) <= tol) return mid;
    if ((fm < 0.0) == (f(lo) < 0.0))
      lo = mid;
    else
      hi = mid;
    if (hi - lo <= std::numeric_limits<double>::epsilon() *
                       std::max({1.0, std::abs(lo), std::abs(hi)}))
      break;
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// ThresholdTable: the a_k roots of an instance, plus (optionally) the
// lambda crossovers between neighboring family graphs.
// ---------------------------------------------------------------------------

struct LambdaEntry {
  enum class Status { ok, degenerate, parallel };

  std::string kind;     // "lambda_0", "lambda_0'", or "lambda_k"
  int k = 0;            // index for "lambda_k" rows; 0 otherwise
  std::string first;    // label of the graph optimal below the crossover
  std::string second;   // label of the graph optimal above it
  double value = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  Status status = Status::ok;
};

struct CellRef {
  int cell = 0;     // -1 for a >= 1, else 0..n'
  bool tie = false; // a fell exactly on a boundary; `cell` is the lower index
};

class ThresholdTable {
 public:
  ThresholdTable(const NetworkInstance& inst, double root_tol = 1e-12)
      : n_(inst.size()), fingerprint_(inst.fingerprint()) {
    const int np = minergy::n_prime(inst);
    roots_.reserve(static_cast<std::size_t>(np));
    residuals_.reserve(static_cast<std::size_t>(np));
    for (int k = 1; k <= np; ++k) {
      const double a = find_a_root(inst, k, root_tol);
      roots_.push_back(a);
      residuals_.push_back(std::abs(relay_slack(inst, k, a)));
    }
    for (std::size_t i = 1; i < roots_.size(); ++i)
      if (!(roots_[i] < roots_[i - 1]))
        throw MultipleRoots("ThresholdTable: roots not strictly decreasing");
  }

  int instance_size() const { return n_; }
  int n_prime() const { return static_cast<int>(roots_.size()); }
  std::uint64_t fingerprint() const { return fingerprint_; }

  /// a_k for k in [1, n']; a_root(0) == 1 by convention.
  double a_root(int k) const {
    if (k == 0) return 1.0;
    if (k < 1 || k > n_prime())
      throw IndexOutOfRange("ThresholdTable::a_root: k=" + std::to_string(k));
    return roots_[static_cast<std::size_t>(k - 1)];
  }

  /// |relay_slack(k, a_k)| at the computed root.
  double residual(int k) const {
    if (k < 1 || k > n_prime())
      throw IndexOutOfRange("ThresholdTable::residual: k=" + std::to_string(k));
    return residuals_[static_cast<std::size_t>(k - 1)];
  }

  const std::vector<double>& a_roots() const { return roots_; }
  const std::vector<LambdaEntry>& lambda_entries() const { return lambdas_; }

  void add_lambda(LambdaEntry e) { lambdas_.push_back(std::move(e)); }

  const LambdaEntry* find_lambda(const std::string& kind, int k = 0) const {
    for (const auto& e : lambdas_)
      if (e.kind == kind && e.k == k) return &e;
    return nullptr;
  }

 private:
  int n_;
  std::uint64_t fingerprint_;
  std::vector<double> roots_;
  std::vector<double> residuals_;
  std::vector<LambdaEntry> lambdas_;
};

inline ThresholdTable build_threshold_table(const NetworkInstance& inst,
                                            double root_tol = 1e-12) {
  return ThresholdTable(inst, root_tol);
}

/// Cell of exponent a: -1 when a >= 1, otherwise the k with
/// a in [a_{k+1}, a_k]. Exact boundary hits report the lower cell index
/// with the tie flag set.
inline CellRef classify_exponent(const ThresholdTable& table, double a) {
  if (!std::isfinite(a))
    throw std::invalid_argument("classify_exponent: a must be finite");
  if (a == 1.0) return {-1, true};
  if (a > 1.0) return {-1, false};
  for (int k = 0; k < table.n_prime(); ++k) {
    const double root = table.a_root(k + 1);
    if (a == root) return {k, true};
    if (a > root) return {k, false};
  }
  return {table.n_prime(), false};
}

/// The routing pattern optimal throughout a given cell.
inline TransmissionGraph graph_for_cell(int cell) {
  if (cell <= -1) return TransmissionGraph::next_hop();
  if (cell == 0) return TransmissionGraph::direct();
  return TransmissionGraph::split(cell);
}

// ---------------------------------------------------------------------------
// Lambda crossovers.
// ---------------------------------------------------------------------------

/// The lambda at which the two graphs' two-term energies coincide:
/// with A_i the energy of g_i under d^a and B_i under d^b,
/// lambda* = (A2 - A1) / (B1 - B2). ParallelCosts when B1 == B2.
inline double lambda_crossover(const NetworkInstance& inst, double a, double b,
                               const TransmissionGraph& g1, const TransmissionGraph& g2) {
  const FlowMatrix q1 = realize(inst, g1);
  const FlowMatrix q2 = realize(inst, g2);
  const CostModel ma = CostModel::monomial(a);
  const CostModel mb = CostModel::monomial(b);
  const double a1 = total_energy(inst, ma, q1);
  const double a2 = total_energy(inst, ma, q2);
  const double b1 = total_energy(inst, mb, q1);
  const double b2 = total_energy(inst, mb, q2);
  if (b1 == b2)
    throw ParallelCosts("lambda_crossover: " + g1.label() + " and " + g2.label() +
                        " have identical cost under d^b");
  return (a2 - a1) / (b1 - b2);
}

// Closed forms for unit-spaced chains (x_i = i, equal data volumes).
// They must agree with lambda_crossover on such instances.

/// Chain vs chain-with-end-jump: (2^a - 2) / (2 - 2^b).
inline double lambda0_closed_form(double a, double b) {
  const double den = 2.0 - std::pow(2.0, b);
  if (den == 0.0) throw ParallelCosts("lambda0_closed_form: b makes the costs parallel");
  return (std::pow(2.0, a) - 2.0) / den;
}

/// Direct vs direct-with-relayed-far-node, relay at node np+1:
/// (N^a - (N-np-1)^a - (np+1)^a) / ((N-np-1)^b + (np+1)^b - N^b).
inline double lambda0_prime_closed_form(int n, int np, double a, double b) {
  const double far = std::abs(static_cast<double>(n - np - 1));
  const double relay = static_cast<double>(np + 1);
  const double num = std::pow(n, a) - std::pow(far, a) - std::pow(relay, a);
  const double den = std::pow(far, b) + std::pow(relay, b) - std::pow(n, b);
  if (den == 0.0) throw ParallelCosts("lambda0_prime_closed_form: parallel costs");
  return num / den;
}

/// Split(k-1) vs Split(k) (node k flips from direct to relay-via-N):
/// ((N-k)^a + N^a - k^a) / (k^b - (N-k)^b - N^b).
inline double lambdak_closed_form(int n, int k, double a, double b) {
  const double num =
      std::pow(n - k, a) + std::pow(n, a) - std::pow(k, a);
  const double den =
      std::pow(k, b) - std::pow(n - k, b) - std::pow(n, b);
  if (den == 0.0) throw ParallelCosts("lambdak_closed_form: parallel costs");
  return num / den;
}

namespace detail {

/// Relative energy mismatch of the two graphs at the crossover, computed
/// from the four monomial energies (valid even for negative lambda).
inline double crossover_residual(const NetworkInstance& inst, double a, double b,
                                 const TransmissionGraph& g1, const TransmissionGraph& g2,
                                 double lambda) {
  const FlowMatrix q1 = realize(inst, g1);
  const FlowMatrix q2 = realize(inst, g2);
  const CostModel ma = CostModel::monomial(a);
  const CostModel mb = CostModel::monomial(b);
  const double e1 = total_energy(inst, ma, q1) + lambda * total_energy(inst, mb, q1);
  const double e2 = total_energy(inst, ma, q2) + lambda * total_energy(inst, mb, q2);
  return std::abs(e1 - e2) / std::max({1.0, std::abs(e1), std::abs(e2)});
}

inline LambdaEntry make_lambda_entry(const NetworkInstance& inst, double a, double b,
                                     const std::string& kind, int k,
                                     const TransmissionGraph& g1, const TransmissionGraph& g2) {
  LambdaEntry e;
  e.kind = kind;
  e.k = k;
  e.first = g1.label();
  e.second = g2.label();
  try {
    e.value = lambda_crossover(inst, a, b, g1, g2);
    if (!std::isfinite(e.value) || e.value <= 0.0)
      e.status = LambdaEntry::Status::degenerate;
    else
      e.status = LambdaEntry::Status::ok;
    if (std::isfinite(e.value))
      e.residual = crossover_residual(inst, a, b, g1, g2, e.value);
  } catch (const ParallelCosts&) {
    e.status = LambdaEntry::Status::parallel;
  }
  return e;
}

}  // namespace detail

/// Threshold table with the lambda crossovers for exponent pair (a, b):
/// lambda_0 (T0 vs T0+), lambda_0' (T1 vs T1+), and lambda_k
/// (cell k-1 graph vs cell k graph) for k in [1, n']. Nonpositive or
/// non-finite crossovers are flagged degenerate, undefined ones parallel.
inline ThresholdTable lambda_table(const NetworkInstance& inst, double a, double b,
                                   double root_tol = 1e-12) {
  ThresholdTable table(inst, root_tol);
  if (inst.size() >= 2) {
    table.add_lambda(detail::make_lambda_entry(inst, a, b, "lambda_0", 0,
                                               TransmissionGraph::next_hop(),
                                               TransmissionGraph::next_hop_perturbed()));
    if (n_prime(inst) + 1 < inst.size())
      table.add_lambda(detail::make_lambda_entry(inst, a, b, "lambda_0'", 0,
                                                 TransmissionGraph::direct(),
                                                 TransmissionGraph::direct_perturbed()));
  }
  for (int k = 1; k <= table.n_prime(); ++k)
    table.add_lambda(detail::make_lambda_entry(inst, a, b, "lambda_k", k,
                                               graph_for_cell(k - 1), graph_for_cell(k)));
  return table;
}

}  // namespace minergy
