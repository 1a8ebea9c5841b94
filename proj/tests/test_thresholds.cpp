#include <minergy/thresholds.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <vector>

using namespace minergy;

namespace {

// Roots of (N-k)^a + N^a - k^a on the unit-spaced chain, frozen from an
// independent high-precision computation.
constexpr double kRootN3K1 = -0.7878849110258698;
constexpr double kRootN4K1 = -0.5604988652238638;
constexpr double kRootN5K1 = -0.4636493026541472;
constexpr double kRootN5K2 = -1.1087026083758937;
constexpr double kRootN7K1 = -0.3711169198776243;
constexpr double kRootN7K2 = -0.6445342083174804;
constexpr double kRootN7K3 = -1.343026730177747;

TEST(RelaySlack, MatchesPowArithmetic) {
  const NetworkInstance inst = NetworkInstance::regular(5);
  for (int k = 1; k <= 4; ++k) {
    for (double a : {-2.0, -0.5, 0.0, 1.0, 2.5}) {
      const double expect = std::pow(5.0 - k, a) + std::pow(5.0, a) - std::pow(k, a);
      EXPECT_NEAR(relay_slack(inst, k, a), expect, 1e-12 * std::max(1.0, std::fabs(expect)))
          << "k=" << k << " a=" << a;
    }
  }
  EXPECT_THROW(relay_slack(inst, 0, 1.0), IndexOutOfRange);
  EXPECT_THROW(relay_slack(inst, 5, 1.0), IndexOutOfRange);
}

TEST(RootFinding, FrozenRegularRoots) {
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(3), 1), kRootN3K1, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(4), 1), kRootN4K1, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(5), 1), kRootN5K1, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(5), 2), kRootN5K2, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(7), 1), kRootN7K1, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(7), 2), kRootN7K2, 1e-9);
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(7), 3), kRootN7K3, 1e-9);
}

TEST(RootFinding, ResidualsTiny) {
  for (int n = 3; n <= 8; ++n) {
    const NetworkInstance inst = NetworkInstance::regular(n);
    for (int k = 1; k <= n_prime(inst); ++k) {
      const double root = find_a_root(inst, k);
      EXPECT_LT(std::fabs(relay_slack(inst, k, root)), 1e-10) << "n=" << n << " k=" << k;
      EXPECT_LT(root, 0.0);
    }
  }
}

TEST(RootFinding, ScaleInvariantInPositions) {
  // Scaling every position by c scales the slack by c^a, so roots agree.
  // Regular 6 doubled in index terms: (N,k)=(6,2) matches (3,1) scaled by 2.
  EXPECT_NEAR(find_a_root(NetworkInstance::regular(6), 2),
              find_a_root(NetworkInstance::regular(3), 1), 1e-10);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> gap(0.2, 1.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> xs, qs;
    double x = 0.0;
    for (int i = 0; i < 5; ++i) {
      x += gap(rng);
      xs.push_back(x);
      qs.push_back(1.0);
    }
    const NetworkInstance base(xs, qs);
    std::vector<double> scaled = xs;
    for (double& v : scaled) v *= 3.7;
    const NetworkInstance big(scaled, qs);
    for (int k = 1; k <= n_prime(base); ++k)
      EXPECT_NEAR(find_a_root(base, k), find_a_root(big, k), 1e-9);
  }
}

TEST(RootFinding, IndexValidation) {
  const NetworkInstance inst = NetworkInstance::regular(4);  // n' = 1
  EXPECT_THROW(find_a_root(inst, 0), IndexOutOfRange);
  EXPECT_THROW(find_a_root(inst, 2), IndexOutOfRange);
  const NetworkInstance two = NetworkInstance::regular(2);  // n' = 0
  EXPECT_THROW(find_a_root(two, 1), IndexOutOfRange);
}

TEST(ThresholdTable, RootsStrictlyDecreasing) {
  for (int n : {5, 6, 7, 8}) {
    const ThresholdTable table(NetworkInstance::regular(n));
    EXPECT_EQ(table.n_prime(), n_prime(NetworkInstance::regular(n)));
    EXPECT_DOUBLE_EQ(table.a_root(0), 1.0);
    for (int k = 1; k < table.n_prime(); ++k)
      EXPECT_LT(table.a_root(k + 1), table.a_root(k));
  }
}

TEST(ClassifyExponent, CellWalk) {
  const ThresholdTable table(NetworkInstance::regular(7));  // roots near -0.371, -0.645, -1.343
  EXPECT_EQ(classify_exponent(table, 2.0).cell, -1);
  EXPECT_FALSE(classify_exponent(table, 2.0).tie);
  EXPECT_EQ(classify_exponent(table, 1.0).cell, -1);
  EXPECT_TRUE(classify_exponent(table, 1.0).tie);
  EXPECT_EQ(classify_exponent(table, 0.0).cell, 0);
  EXPECT_EQ(classify_exponent(table, -0.5).cell, 1);
  EXPECT_EQ(classify_exponent(table, -1.0).cell, 2);
  EXPECT_EQ(classify_exponent(table, -2.0).cell, 3);
  // Exactly on a root: lower-indexed cell plus the tie flag.
  const double r1 = table.a_root(1);
  EXPECT_EQ(classify_exponent(table, r1).cell, 0);
  EXPECT_TRUE(classify_exponent(table, r1).tie);
  EXPECT_THROW(classify_exponent(table, std::nan("")), std::invalid_argument);
}

TEST(ClassifyExponent, GraphForCell) {
  EXPECT_EQ(graph_for_cell(-1), TransmissionGraph::next_hop());
  EXPECT_EQ(graph_for_cell(0), TransmissionGraph::direct());
  EXPECT_EQ(graph_for_cell(2), TransmissionGraph::split(2));
}

TEST(LambdaCrossover, SpotValueExactlyTwo) {
  // Chain-vs-perturbed-chain crossover at a=2, b=0 on any regular chain >= 4.
  const double v = lambda0_closed_form(2.0, 0.0);
  EXPECT_DOUBLE_EQ(v, 2.0);
  const NetworkInstance inst = NetworkInstance::regular(4);
  const double generic = lambda_crossover(inst, 2.0, 0.0, TransmissionGraph::next_hop(),
                                          TransmissionGraph::next_hop_perturbed());
  EXPECT_NEAR(generic, 2.0, 1e-12);
}

TEST(LambdaCrossover, ClosedFormsMatchGenericOnRegularChains) {
  for (int n : {4, 5, 6, 7, 8}) {
    const NetworkInstance inst = NetworkInstance::regular(n);
    const int np = n_prime(inst);
    for (auto [a, b] : std::vector<std::pair<double, double>>{
             {2.0, 0.0}, {1.5, 0.5}, {3.0, -1.0}, {0.5, -2.0}, {0.0, -2.0}}) {
      const double lam0 = lambda_crossover(inst, a, b, TransmissionGraph::next_hop(),
                                           TransmissionGraph::next_hop_perturbed());
      EXPECT_NEAR(lam0, lambda0_closed_form(a, b), 1e-9 * std::max(1.0, std::fabs(lam0)))
          << "n=" << n << " a=" << a << " b=" << b;
      const double lam0p = lambda_crossover(inst, a, b, TransmissionGraph::direct(),
                                            TransmissionGraph::direct_perturbed());
      EXPECT_NEAR(lam0p, lambda0_prime_closed_form(n, np, a, b),
                  1e-9 * std::max(1.0, std::fabs(lam0p)))
          << "n=" << n << " a=" << a << " b=" << b;
      for (int k = 1; k <= np; ++k) {
        const TransmissionGraph lower = k == 1 ? TransmissionGraph::direct()
                                               : TransmissionGraph::split(k - 1);
        const double lamk = lambda_crossover(inst, a, b, lower, TransmissionGraph::split(k));
        EXPECT_NEAR(lamk, lambdak_closed_form(n, k, a, b),
                    1e-9 * std::max(1.0, std::fabs(lamk)))
            << "n=" << n << " k=" << k << " a=" << a << " b=" << b;
      }
    }
  }
}

TEST(LambdaCrossover, FrozenRationalValue) {
  // Direct-vs-split crossover for the four-sensor chain at a=0, b=-2.
  EXPECT_NEAR(lambdak_closed_form(4, 1, 0.0, -2.0), 144.0 / 119.0, 1e-12);
}

TEST(LambdaCrossover, ParallelCostsDetected) {
  const NetworkInstance inst = NetworkInstance::regular(4);
  EXPECT_THROW(lambda_crossover(inst, 2.0, 0.0, TransmissionGraph::next_hop(),
                                TransmissionGraph::next_hop()),
               ParallelCosts);
}

TEST(LambdaTable, EntriesAndStatuses) {
  const NetworkInstance inst = NetworkInstance::regular(4);
  const ThresholdTable table = lambda_table(inst, 0.0, -2.0);
  const LambdaEntry* lam0 = table.find_lambda("lambda_0");
  ASSERT_NE(lam0, nullptr);
  EXPECT_EQ(lam0->status, LambdaEntry::Status::degenerate);  // negative crossover
  const LambdaEntry* lam0p = table.find_lambda("lambda_0'");
  ASSERT_NE(lam0p, nullptr);
  EXPECT_EQ(lam0p->status, LambdaEntry::Status::degenerate);
  const LambdaEntry* lam1 = table.find_lambda("lambda_k", 1);
  ASSERT_NE(lam1, nullptr);
  EXPECT_EQ(lam1->status, LambdaEntry::Status::ok);
  EXPECT_NEAR(lam1->value, 144.0 / 119.0, 1e-9);
  EXPECT_LT(std::fabs(lam1->residual), 1e-9);
}

TEST(LambdaTable, TwoSensorChainSharesOneCrossover) {
  // With two sensors the chain/perturbed and direct/perturbed pairs coincide,
  // so both endpoint thresholds agree exactly.
  const NetworkInstance inst = NetworkInstance::regular(2);
  const ThresholdTable table = lambda_table(inst, 2.0, 0.0);
  const LambdaEntry* lam0 = table.find_lambda("lambda_0");
  const LambdaEntry* lam0p = table.find_lambda("lambda_0'");
  ASSERT_NE(lam0, nullptr);
  ASSERT_NE(lam0p, nullptr);
  EXPECT_DOUBLE_EQ(lam0->value, lam0p->value);
}

TEST(LambdaTable, ResidualBalancesEnergiesAtCrossover) {
  // At each ok crossover the two graphs' two-term energies coincide; the
  // table's residual is that difference evaluated in raw A + lambda * B form.
  for (int n : {4, 6, 8}) {
    const NetworkInstance inst = NetworkInstance::regular(n);
    const ThresholdTable table = lambda_table(inst, 2.0, -1.0);
    for (const auto& e : table.lambda_entries()) {
      if (e.status == LambdaEntry::Status::parallel) continue;
      ASSERT_TRUE(std::isfinite(e.value));
      EXPECT_LT(std::fabs(e.residual), 1e-9) << e.kind << " k=" << e.k << " n=" << n;
    }
  }
}

}  // namespace
