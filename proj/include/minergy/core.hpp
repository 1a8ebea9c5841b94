#pragma once

// Core value types for the minimum-energy routing problem on a line:
// a collector at the origin, N sensors at increasing positive positions,
// per-edge transmission costs that are positive combinations of powers
// of the hop distance, and nonnegative flow matrices subject to
// per-node conservation.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace minergy {

// ---------------------------------------------------------------------------
// Error taxonomy. Every precondition violation maps to one of these.
// ---------------------------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Zero hop distance combined with a nonpositive exponent.
struct DegenerateDistance : Error { using Error::Error; };
/// A cost-term coefficient below zero.
struct NegativeLambda : Error { using Error::Error; };
/// Container sizes that do not match the instance.
struct DimensionMismatch : Error { using Error::Error; };
/// A node or graph index outside its valid range.
struct IndexOutOfRange : Error { using Error::Error; };
/// Downward bracket expansion failed to find a sign change.
struct NoBracket : Error { using Error::Error; };
/// The bracketed interval contains more than one sign change.
struct MultipleRoots : Error { using Error::Error; };
/// Two graphs with identical cost under the second exponent; no crossover.
struct ParallelCosts : Error { using Error::Error; };
/// Instance size beyond the exhaustive-search cap.
struct TooLarge : Error { using Error::Error; };
/// A flow matrix that violates conservation (or cannot be scheduled).
struct InfeasibleFlow : Error { using Error::Error; };
/// A gain evaluation at coincident points or with a vanishing gain model.
struct DegenerateGain : Error { using Error::Error; };
/// Malformed instance text.
struct ParseError : Error { using Error::Error; };

namespace detail {

inline std::string fmt(const char* pattern, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

inline std::string num(double v) { return fmt("%.12g", v); }

// FNV-1a over raw bytes; used for instance fingerprints.
inline void hash_bytes(std::uint64_t& h, const void* data, std::size_t n) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// CostModel: per-unit transmission cost as a function of hop distance d,
//   monomial    d^a
//   two-term    d^a + lambda * d^b          (lambda >= 0)
//   multi-term  sum_n lambda_n * d^(alpha_n)  (lambda_n >= 0)
// Stored uniformly as a coefficient/exponent term list; a monomial is the
// single term 1 * d^a, so monomial(a) and two_term(a, b, 0) evaluate
// identically (zero-coefficient terms never contribute).
// ---------------------------------------------------------------------------

struct CostTerm {
  double coefficient;
  double exponent;
  friend bool operator==(const CostTerm&, const CostTerm&) = default;
};

class CostModel {
 public:
  enum class Kind { monomial, two_term, multi_term };

  static CostModel monomial(double a) {
    require_finite(a, "exponent a");
    return CostModel(Kind::monomial, {{1.0, a}});
  }

  static CostModel two_term(double a, double b, double lambda) {
    require_finite(a, "exponent a");
    require_finite(b, "exponent b");
    require_finite(lambda, "lambda");
    if (lambda < 0.0)
      throw NegativeLambda("two_term: lambda must be >= 0, got " + detail::num(lambda));
    return CostModel(Kind::two_term, {{1.0, a}, {lambda, b}});
  }

  static CostModel multi_term(std::vector<CostTerm> terms) {
    for (const auto& t : terms) {
      require_finite(t.coefficient, "term coefficient");
      require_finite(t.exponent, "term exponent");
      if (t.coefficient < 0.0)
        throw NegativeLambda("multi_term: coefficients must be >= 0, got " +
                             detail::num(t.coefficient));
    }
    return CostModel(Kind::multi_term, std::move(terms));
  }

  Kind kind() const { return kind_; }
  const std::vector<CostTerm>& terms() const { return terms_; }

  /// First exponent (monomial / two-term).
  double a() const { return terms_.at(0).exponent; }
  /// Second exponent (two-term only).
  double b() const { return terms_.at(1).exponent; }
  /// Second-term coefficient (two-term only).
  double lambda() const { return terms_.at(1).coefficient; }

  /// Exponents of the terms with nonzero coefficient.
  std::vector<double> effective_exponents() const {
    std::vector<double> out;
    for (const auto& t : terms_)
      if (t.coefficient > 0.0) out.push_back(t.exponent);
    return out;
  }

  std::string describe() const {
    switch (kind_) {
      case Kind::monomial:
        return "monomial a=" + detail::num(a());
      case Kind::two_term:
        return "two-term a=" + detail::num(a()) + " b=" + detail::num(b()) +
               " lambda=" + detail::num(lambda());
      case Kind::multi_term: {
        std::string s = "multi-term";
        for (const auto& t : terms_)
          s += " " + detail::num(t.coefficient) + "*d^" + detail::num(t.exponent);
        return s;
      }
    }
    return {};
  }

  friend bool operator==(const CostModel&, const CostModel&) = default;

 private:
  CostModel(Kind kind, std::vector<CostTerm> terms)
      : kind_(kind), terms_(std::move(terms)) {}

  static void require_finite(double v, const char* what) {
    if (!std::isfinite(v))
      throw std::invalid_argument(std::string("CostModel: ") + what + " must be finite");
  }

  Kind kind_;
  std::vector<CostTerm> terms_;
};

/// Per-unit cost of sending one unit of data between positions xi and xj.
/// Zero-coefficient terms are skipped, so they never trigger degeneracy.
inline double edge_cost(const CostModel& model, double xi, double xj) {
  const double d = std::abs(xi - xj);
  double cost = 0.0;
  for (const auto& t : model.terms()) {
    if (t.coefficient == 0.0) continue;
    if (d == 0.0 && t.exponent <= 0.0)
      throw DegenerateDistance("edge_cost: zero distance with exponent " +
                               detail::num(t.exponent));
    cost += t.coefficient * std::pow(d, t.exponent);
  }
  return cost;
}

// ---------------------------------------------------------------------------
// NetworkInstance: immutable sensor line. x(0) == 0 is the collector;
// sensors i in [1, N] sit at strictly increasing positive positions and
// each holds data q(i) > 0.
// ---------------------------------------------------------------------------

class NetworkInstance {
 public:
  NetworkInstance(std::vector<double> positions, std::vector<double> data)
      : positions_(std::move(positions)), data_(std::move(data)) {
    if (positions_.empty())
      throw std::invalid_argument("NetworkInstance: at least one sensor required");
    if (positions_.size() != data_.size())
      throw DimensionMismatch("NetworkInstance: positions and data sizes differ");
    double prev = 0.0;
    for (std::size_t i = 0; i < positions_.size(); ++i) {
      const double x = positions_[i];
      if (!std::isfinite(x) || x <= prev)
        throw std::invalid_argument(
            "NetworkInstance: positions must be finite, positive, strictly increasing");
      if (!std::isfinite(data_[i]) || data_[i] <= 0.0)
        throw std::invalid_argument("NetworkInstance: data volumes must be positive");
      prev = x;
    }
    regular_ = true;
    for (std::size_t i = 0; i < positions_.size(); ++i)
      if (positions_[i] != static_cast<double>(i + 1)) { regular_ = false; break; }
    fingerprint_ = 1469598103934665603ull;
    detail::hash_bytes(fingerprint_, positions_.data(), positions_.size() * sizeof(double));
    detail::hash_bytes(fingerprint_, data_.data(), data_.size() * sizeof(double));
  }

  /// Unit-spaced chain: x_i = i, all data volumes equal to q.
  static NetworkInstance regular(int n, double q = 1.0) {
    if (n < 1) throw std::invalid_argument("NetworkInstance::regular: n must be >= 1");
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) xs[static_cast<std::size_t>(i)] = i + 1;
    return NetworkInstance(std::move(xs), std::vector<double>(static_cast<std::size_t>(n), q));
  }

  /// Number of sensors N.
  int size() const { return static_cast<int>(positions_.size()); }

  /// Position of node i; x(0) == 0 is the collector.
  double x(int i) const {
    if (i < 0 || i > size())
      throw IndexOutOfRange("NetworkInstance::x: node " + std::to_string(i));
    return i == 0 ? 0.0 : positions_[static_cast<std::size_t>(i - 1)];
  }

  /// Data volume held by sensor i in [1, N].
  double q(int i) const {
    if (i < 1 || i > size())
      throw IndexOutOfRange("NetworkInstance::q: node " + std::to_string(i));
    return data_[static_cast<std::size_t>(i - 1)];
  }

  const std::vector<double>& positions() const { return positions_; }
  const std::vector<double>& data() const { return data_; }

  /// True iff x_i == i exactly for every sensor.
  bool regular_spacing() const { return regular_; }

  std::uint64_t fingerprint() const { return fingerprint_; }

  friend bool operator==(const NetworkInstance& lhs, const NetworkInstance& rhs) {
    return lhs.positions_ == rhs.positions_ && lhs.data_ == rhs.data_;
  }

 private:
  std::vector<double> positions_;
  std::vector<double> data_;
  bool regular_;
  std::uint64_t fingerprint_;
};

// ---------------------------------------------------------------------------
// FlowMatrix: (N+1) x (N+1) nonnegative flow amounts q[i][j] from node i to
// node j. Row 0 is the collector, which never transmits; the diagonal is
// identically zero.
// ---------------------------------------------------------------------------

class FlowMatrix {
 public:
  explicit FlowMatrix(int n) : n_(n) {
    if (n < 1) throw std::invalid_argument("FlowMatrix: n must be >= 1");
    cells_.assign(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);
  }

  int size() const { return n_; }

  double at(int i, int j) const {
    check_index(i, j);
    return cells_[idx(i, j)];
  }

  void set(int i, int j, double v) {
    check_index(i, j);
    if (i == 0) throw IndexOutOfRange("FlowMatrix::set: the collector cannot transmit");
    if (i == j) throw IndexOutOfRange("FlowMatrix::set: no self edges");
    if (!std::isfinite(v) || v < 0.0)
      throw std::invalid_argument("FlowMatrix::set: amounts must be finite and >= 0");
    cells_[idx(i, j)] = v;
  }

  void add(int i, int j, double v) { set(i, j, at(i, j) + v); }

  /// Total transmitted by node i.
  double out_sum(int i) const {
    check_node(i);
    double s = 0.0;
    for (int j = 0; j <= n_; ++j)
      if (j != i) s += cells_[idx(i, j)];
    return s;
  }

  /// Total received by node i.
  double in_sum(int i) const {
    check_node(i);
    double s = 0.0;
    for (int j = 1; j <= n_; ++j)
      if (j != i) s += cells_[idx(j, i)];
    return s;
  }

  struct Edge {
    int from;
    int to;
    double amount;
    friend bool operator==(const Edge&, const Edge&) = default;
  };

  /// Positive entries in sender-major (then receiver) order.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (int i = 1; i <= n_; ++i)
      for (int j = 0; j <= n_; ++j)
        if (j != i && cells_[idx(i, j)] > 0.0) out.push_back({i, j, cells_[idx(i, j)]});
    return out;
  }

  friend bool operator==(const FlowMatrix&, const FlowMatrix&) = default;

 private:
  std::size_t idx(int i, int j) const {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n_ + 1) +
           static_cast<std::size_t>(j);
  }
  void check_node(int i) const {
    if (i < 0 || i > n_)
      throw IndexOutOfRange("FlowMatrix: node " + std::to_string(i));
  }
  void check_index(int i, int j) const {
    check_node(i);
    check_node(j);
  }

  int n_;
  std::vector<double> cells_;
};

// ---------------------------------------------------------------------------
// Conservation check: what node i sends equals its own data plus what it
// receives, for every sensor i.
// ---------------------------------------------------------------------------

struct FeasibilityReport {
  bool feasible = false;
  double max_abs_residual = 0.0;
  int worst_node = 0;
  std::vector<double> residuals;  // residuals[i-1] for node i: out - (q_i + in)
};

inline FeasibilityReport check_feasible(const NetworkInstance& inst, const FlowMatrix& flow,
                                        double tol = 1e-9) {
  if (flow.size() != inst.size())
    throw DimensionMismatch("check_feasible: flow size " + std::to_string(flow.size()) +
                            " != instance size " + std::to_string(inst.size()));
  FeasibilityReport report;
  report.residuals.reserve(static_cast<std::size_t>(inst.size()));
  report.feasible = true;
  for (int i = 1; i <= inst.size(); ++i) {
    const double r = flow.out_sum(i) - inst.q(i) - flow.in_sum(i);
    report.residuals.push_back(r);
    if (std::abs(r) > std::abs(report.max_abs_residual)) {
      report.max_abs_residual = r;
      report.worst_node = i;
    }
    if (std::abs(r) > tol) report.feasible = false;
  }
  report.max_abs_residual = std::abs(report.max_abs_residual);
  return report;
}

/// Total transmission energy sum_{i,j} q[i][j] * cost(x_i, x_j).
/// Edges carrying zero flow are skipped, so a degenerate edge is an error
/// only when it actually carries data.
inline double total_energy(const NetworkInstance& inst, const CostModel& model,
                           const FlowMatrix& flow) {
  if (flow.size() != inst.size())
    throw DimensionMismatch("total_energy: flow size does not match instance");
  double e = 0.0;
  for (int i = 1; i <= inst.size(); ++i)
    for (int j = 0; j <= inst.size(); ++j) {
      if (j == i) continue;
      const double q = flow.at(i, j);
      if (q > 0.0) e += q * edge_cost(model, inst.x(i), inst.x(j));
    }
  return e;
}

// ---------------------------------------------------------------------------
// Additivity: whether inserting a relay on an ordered triple raises or
// lowers the cost. Slack = cost(xi,xj) + cost(xj,xk) - cost(xi,xk);
// negative slack means the two-hop path is cheaper (superadditive side).
// ---------------------------------------------------------------------------

enum class Additivity { superadditive, subadditive, mixed };

struct AdditivityCheck {
  Additivity kind;
  double slack;
};

/// Checks one ordered triple xi >= xj >= xk >= 0. Zero slack is reported on
/// the subadditive side (both directions hold with equality).
inline AdditivityCheck superadditivity_check(const CostModel& model, double xi, double xj,
                                             double xk) {
  if (!(xi >= xj && xj >= xk && xk >= 0.0))
    throw std::invalid_argument("superadditivity_check: triple must satisfy xi >= xj >= xk >= 0");
  const double slack =
      edge_cost(model, xi, xj) + edge_cost(model, xj, xk) - edge_cost(model, xi, xk);
  return {slack < 0.0 ? Additivity::superadditive : Additivity::subadditive, slack};
}

/// Model-level classification by exponents: all effective exponents >= 1
/// (relaying never hurts), all <= 1 (direct never hurts), or mixed.
inline Additivity cost_additivity(const CostModel& model) {
  bool all_ge1 = true, all_le1 = true;
  for (double a : model.effective_exponents()) {
    if (a < 1.0) all_ge1 = false;
    if (a > 1.0) all_le1 = false;
  }
  if (all_ge1) return Additivity::superadditive;
  if (all_le1) return Additivity::subadditive;
  return Additivity::mixed;
}

}  // namespace minergy
