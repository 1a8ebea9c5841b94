#include <minergy/core.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace minergy;

namespace {

TEST(CostModel, MonomialFactory) {
  const CostModel m = CostModel::monomial(2.5);
  EXPECT_EQ(m.kind(), CostModel::Kind::monomial);
  EXPECT_DOUBLE_EQ(m.a(), 2.5);
  ASSERT_EQ(m.terms().size(), 1u);
  EXPECT_DOUBLE_EQ(m.terms()[0].coefficient, 1.0);
  EXPECT_FALSE(m.describe().empty());
}

TEST(CostModel, TwoTermFactoryAndValidation) {
  const CostModel m = CostModel::two_term(2.0, -1.0, 0.5);
  EXPECT_EQ(m.kind(), CostModel::Kind::two_term);
  EXPECT_DOUBLE_EQ(m.a(), 2.0);
  EXPECT_DOUBLE_EQ(m.b(), -1.0);
  EXPECT_DOUBLE_EQ(m.lambda(), 0.5);
  EXPECT_THROW(CostModel::two_term(2.0, -1.0, -0.1), NegativeLambda);
}

TEST(CostModel, EffectiveExponentsDropZeroCoefficients) {
  const CostModel m = CostModel::two_term(2.0, -3.0, 0.0);
  const auto exps = m.effective_exponents();
  ASSERT_EQ(exps.size(), 1u);
  EXPECT_DOUBLE_EQ(exps[0], 2.0);

  const CostModel multi =
      CostModel::multi_term({{1.0, 2.0}, {0.0, -5.0}, {3.0, 0.5}});
  const auto exps2 = multi.effective_exponents();
  ASSERT_EQ(exps2.size(), 2u);
  EXPECT_DOUBLE_EQ(exps2[0], 2.0);
  EXPECT_DOUBLE_EQ(exps2[1], 0.5);
}

TEST(CostModel, Equality) {
  EXPECT_EQ(CostModel::monomial(2.0), CostModel::monomial(2.0));
  EXPECT_FALSE(CostModel::monomial(2.0) == CostModel::monomial(2.5));
}

TEST(EdgeCost, MatchesPowArithmetic) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> dist(0.2, 9.0);
  std::uniform_real_distribution<double> expd(-3.0, 3.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double x = dist(rng);
    double y = dist(rng);
    if (x == y) y += 0.5;
    const double d = std::fabs(x - y);
    const double a = expd(rng);
    const double b = expd(rng);
    const double lam = std::fabs(expd(rng));
    EXPECT_DOUBLE_EQ(edge_cost(CostModel::monomial(a), x, y), std::pow(d, a));
    const double expect = std::pow(d, a) + lam * std::pow(d, b);
    EXPECT_NEAR(edge_cost(CostModel::two_term(a, b, lam), x, y), expect,
                1e-12 * std::max(1.0, std::fabs(expect)));
  }
}

TEST(EdgeCost, SymmetricInEndpoints) {
  const CostModel m = CostModel::two_term(1.7, -0.3, 2.0);
  EXPECT_DOUBLE_EQ(edge_cost(m, 1.0, 4.0), edge_cost(m, 4.0, 1.0));
}

TEST(EdgeCost, ZeroCoefficientTermSkippedExactly) {
  // With the zero-weight term skipped, the two-term model evaluates bitwise
  // identically to the bare monomial, even where the dropped exponent would
  // be singular at d("0").
  const CostModel two = CostModel::two_term(2.0, -5.0, 0.0);
  const CostModel mono = CostModel::monomial(2.0);
  for (double d : {0.3, 1.0, 2.7, 16.0})
    EXPECT_EQ(edge_cost(two, 0.0, d), edge_cost(mono, 0.0, d));
}

TEST(EdgeCost, DegenerateDistanceThrows) {
  EXPECT_THROW(edge_cost(CostModel::monomial(-2.0), 3.0, 3.0), DegenerateDistance);
  EXPECT_THROW(edge_cost(CostModel::monomial(0.0), 3.0, 3.0), DegenerateDistance);
  // Positive exponents extend continuously through zero distance.
  EXPECT_DOUBLE_EQ(edge_cost(CostModel::monomial(2.0), 3.0, 3.0), 0.0);
}

TEST(NetworkInstance, RegularFactory) {
  const NetworkInstance inst = NetworkInstance::regular(4, 2.0);
  EXPECT_EQ(inst.size(), 4);
  EXPECT_TRUE(inst.regular_spacing());
  EXPECT_DOUBLE_EQ(inst.x(0), 0.0);
  for (int i = 1; i <= 4; ++i) {
    EXPECT_DOUBLE_EQ(inst.x(i), static_cast<double>(i));
    EXPECT_DOUBLE_EQ(inst.q(i), 2.0);
  }
}

TEST(NetworkInstance, ValidationErrors) {
  EXPECT_THROW(NetworkInstance({}, {}), std::invalid_argument);
  EXPECT_THROW(NetworkInstance({1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(NetworkInstance({2.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(NetworkInstance({-1.0, 1.0}, {1.0, 1.0}), std::invalid_argument);
  EXPECT_THROW(NetworkInstance({1.0, 2.0}, {1.0, 0.0}), std::invalid_argument);
  EXPECT_THROW(NetworkInstance({1.0}, {1.0, 2.0}), DimensionMismatch);
}

TEST(NetworkInstance, FingerprintAndEquality) {
  const NetworkInstance a = NetworkInstance::regular(3);
  const NetworkInstance b = NetworkInstance::regular(3);
  const NetworkInstance c = NetworkInstance::regular(3, 2.0);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.fingerprint(), b.fingerprint());
  EXPECT_FALSE(a == c);
  EXPECT_NE(a.fingerprint(), c.fingerprint());
}

TEST(FlowMatrix, SetAtAddAndValidation) {
  FlowMatrix f(3);
  EXPECT_EQ(f.size(), 3);
  f.set(1, 0, 2.0);
  f.add(1, 0, 0.5);
  EXPECT_DOUBLE_EQ(f.at(1, 0), 2.5);
  f.set(3, 2, 1.0);
  EXPECT_DOUBLE_EQ(f.out_sum(3), 1.0);
  EXPECT_DOUBLE_EQ(f.in_sum(2), 1.0);
  EXPECT_THROW(f.set(0, 1, 1.0), IndexOutOfRange);       // collector never sends
  EXPECT_THROW(f.set(2, 2, 1.0), IndexOutOfRange);       // self loop
  EXPECT_THROW(f.set(1, 2, -1.0), std::invalid_argument);  // negative amount
  EXPECT_THROW(f.at(4, 0), IndexOutOfRange);
}

TEST(FlowMatrix, EdgesSenderMajorOrder) {
  FlowMatrix f(3);
  f.set(2, 0, 1.0);
  f.set(1, 2, 0.5);
  f.set(2, 3, 0.25);
  const auto edges = f.edges();
  ASSERT_EQ(edges.size(), 3u);
  EXPECT_EQ(edges[0].from, 1);
  EXPECT_EQ(edges[0].to, 2);
  EXPECT_EQ(edges[1].from, 2);
  EXPECT_EQ(edges[1].to, 0);
  EXPECT_EQ(edges[2].from, 2);
  EXPECT_EQ(edges[2].to, 3);
}

TEST(Feasibility, ConservationHoldsAndFails) {
  const NetworkInstance inst = NetworkInstance::regular(3);
  FlowMatrix f(3);  // chain 3 -> 2 -> 1 -> 0
  f.set(3, 2, 1.0);
  f.set(2, 1, 2.0);
  f.set(1, 0, 3.0);
  EXPECT_TRUE(check_feasible(inst, f).feasible);

  f.set(1, 0, 2.5);  // node 1 now sheds less than it receives
  const FeasibilityReport bad = check_feasible(inst, f);
  EXPECT_FALSE(bad.feasible);
  EXPECT_EQ(bad.worst_node, 1);
  EXPECT_NEAR(bad.max_abs_residual, 0.5, 1e-15);
}

TEST(TotalEnergy, ChainQuadraticCost) {
  const NetworkInstance inst = NetworkInstance::regular(3);
  FlowMatrix f(3);
  f.set(3, 2, 1.0);
  f.set(2, 1, 2.0);
  f.set(1, 0, 3.0);
  EXPECT_DOUBLE_EQ(total_energy(inst, CostModel::monomial(2.0), f), 6.0);
  // Linear cost: any forward routing costs sum(q_i * x_i) = 6.
  EXPECT_DOUBLE_EQ(total_energy(inst, CostModel::monomial(1.0), f), 6.0);
}

TEST(TotalEnergy, ZeroFlowsSkipSingularCosts) {
  const NetworkInstance inst = NetworkInstance::regular(2);
  FlowMatrix f(2);
  f.set(1, 0, 1.0);
  f.set(2, 0, 1.0);
  // No flow on (2,1); a negative exponent must not be evaluated there.
  const double e = total_energy(inst, CostModel::monomial(-2.0), f);
  EXPECT_DOUBLE_EQ(e, 1.0 + 0.25);
}

TEST(TotalEnergy, LinearInFlowScale) {
  const NetworkInstance inst = NetworkInstance::regular(4);
  const CostModel m = CostModel::two_term(1.5, -0.5, 0.7);
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> amt(0.1, 2.0);
  FlowMatrix f(4), g(4);
  for (int i = 1; i <= 4; ++i) {
    const double v = amt(rng);
    f.set(i, 0, v);
    g.set(i, 0, 3.0 * v);
  }
  EXPECT_NEAR(3.0 * total_energy(inst, m, f), total_energy(inst, m, g), 1e-12);
}

TEST(Additivity, MonomialTriples) {
  // Exponent above one: relaying through an interior point never costs more.
  const auto sup = superadditivity_check(CostModel::monomial(2.0), 5.0, 2.0, 1.0);
  EXPECT_EQ(sup.kind, Additivity::superadditive);
  EXPECT_LT(sup.slack, 0.0);
  // Exponent below one: the direct hop is never worse.
  const auto sub = superadditivity_check(CostModel::monomial(0.5), 5.0, 2.0, 1.0);
  EXPECT_EQ(sub.kind, Additivity::subadditive);
  EXPECT_GT(sub.slack, 0.0);
  // Linear cost: both hold with equality, reported on the subadditive side.
  const auto eq = superadditivity_check(CostModel::monomial(1.0), 5.0, 2.0, 1.0);
  EXPECT_EQ(eq.kind, Additivity::subadditive);
  EXPECT_DOUBLE_EQ(eq.slack, 0.0);
  EXPECT_THROW(superadditivity_check(CostModel::monomial(2.0), 1.0, 2.0, 0.0),
               std::invalid_argument);
}

TEST(Additivity, RandomTriplesMatchSign) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> pos(0.0, 10.0);
  for (int trial = 0; trial < 300; ++trial) {
    double v[3] = {pos(rng), pos(rng), pos(rng)};
    std::sort(v, v + 3);
    if (v[0] == v[1] || v[1] == v[2]) continue;
    const auto hi = superadditivity_check(CostModel::monomial(1.8), v[2], v[1], v[0]);
    EXPECT_LE(hi.slack, 0.0);
    const auto lo = superadditivity_check(CostModel::monomial(0.3), v[2], v[1], v[0]);
    EXPECT_GE(lo.slack, 0.0);
  }
}

TEST(Additivity, ModelClassification) {
  EXPECT_EQ(cost_additivity(CostModel::monomial(2.0)), Additivity::superadditive);
  EXPECT_EQ(cost_additivity(CostModel::monomial(0.5)), Additivity::subadditive);
  EXPECT_EQ(cost_additivity(CostModel::two_term(2.0, -1.0, 1.0)), Additivity::mixed);
  // A zero-weight low term does not make the model mixed.
  EXPECT_EQ(cost_additivity(CostModel::two_term(2.0, -1.0, 0.0)), Additivity::superadditive);
}

}  // namespace
