#pragma once

// Exhaustive ground truth: enumerate every acyclic next-hop assignment
// (each sensor picks one receiver; every chain must reach the collector)
// and minimize total energy. The number of such assignments is
// (N+1)^(N-1), so this is gated behind a small-instance cap.

#include <algorithm>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "core.hpp"
#include "graphs.hpp"
#include "solution.hpp"

namespace minergy {

struct RoutingTree {
  /// hops[i] is the receiver of node i for i in [1, N]; hops[0] == 0.
  std::vector<int> hops;

  std::string label() const {
    std::string s = "tree(";
    for (std::size_t i = 1; i < hops.size(); ++i) {
      if (i > 1) s += ",";
      s += std::to_string(hops[i]);
    }
    return s + ")";
  }

  friend bool operator==(const RoutingTree&, const RoutingTree&) = default;
};

/// (n+1)^(n-1): number of acyclic next-hop assignments on n sensors.
inline std::uint64_t routing_tree_count(int n) {
  if (n < 1) throw std::invalid_argument("routing_tree_count: n must be >= 1");
  std::uint64_t r = 1;
  for (int i = 0; i < n - 1; ++i) r *= static_cast<std::uint64_t>(n + 1);
  return r;
}

/// Visits every acyclic assignment in lexicographic order of
/// (hops[1], ..., hops[N]). The visitor receives a reused hop vector.
template <typename Visitor>
void for_each_routing_tree(int n, Visitor&& visit) {
  if (n < 1) throw std::invalid_argument("for_each_routing_tree: n must be >= 1");
  const std::size_t sz = static_cast<std::size_t>(n) + 1;
  std::vector<int> digit(sz, 0);  // digit[i] in [0, n-1] maps to a receiver != i
  std::vector<int> hops(sz, 0);
  std::vector<signed char> state(sz, 0);  // 0 unseen, 1 on path, 2 reaches collector
  std::vector<int> path;
  path.reserve(sz);

  const auto receiver = [](int i, int d) { return d < i ? d : d + 1; };

  while (true) {
    for (int i = 1; i <= n; ++i)
      hops[static_cast<std::size_t>(i)] = receiver(i, digit[static_cast<std::size_t>(i)]);

    std::fill(state.begin(), state.end(), static_cast<signed char>(0));
    state[0] = 2;
    bool acyclic = true;
    for (int i = 1; i <= n && acyclic; ++i) {
      int j = i;
      path.clear();
      while (state[static_cast<std::size_t>(j)] == 0) {
        state[static_cast<std::size_t>(j)] = 1;
        path.push_back(j);
        j = hops[static_cast<std::size_t>(j)];
      }
      if (state[static_cast<std::size_t>(j)] == 1) acyclic = false;
      for (int p : path) state[static_cast<std::size_t>(p)] = 2;
    }
    if (acyclic) visit(const_cast<const std::vector<int>&>(hops));

    int pos = n;  // node N cycles fastest
    while (pos >= 1 && digit[static_cast<std::size_t>(pos)] == n - 1) {
      digit[static_cast<std::size_t>(pos)] = 0;
      --pos;
    }
    if (pos < 1) break;
    ++digit[static_cast<std::size_t>(pos)];
  }
}

/// Materializes all routing trees. TooLarge beyond the cap.
inline std::vector<RoutingTree> enumerate_trees(int n, int cap = 8) {
  if (n > cap)
    throw TooLarge("enumerate_trees: n=" + std::to_string(n) + " exceeds cap " +
                   std::to_string(cap));
  std::vector<RoutingTree> out;
  out.reserve(static_cast<std::size_t>(routing_tree_count(n)));
  for_each_routing_tree(n, [&](const std::vector<int>& hops) { out.push_back({hops}); });
  return out;
}

struct OracleOptions {
  int cap = 8;                   // refuse instances larger than this
  bool collect_energies = false; // record the energy of every tree (sorted ascending)
  double tie_rel = 1e-12;        // relative window for reporting co-optimal trees
};

struct OracleResult {
  double min_energy = 0.0;
  std::vector<RoutingTree> argmin;   // co-optimal trees in enumeration order
  std::uint64_t tree_count = 0;      // number of trees examined
  std::vector<double> energies;      // all tree energies, sorted (on request)
  Solution solution;                 // primary argmin as a Solution (certified == false)
};

/// Exhaustive minimization of total energy over all routing trees.
inline OracleResult oracle_min(const NetworkInstance& inst, const CostModel& model,
                               const OracleOptions& opts = {}) {
  const int n = inst.size();
  if (n > opts.cap)
    throw TooLarge("oracle_min: n=" + std::to_string(n) + " exceeds cap " +
                   std::to_string(opts.cap));

  // Cost of every admissible edge, fixed across trees.
  std::vector<double> cost(static_cast<std::size_t>((n + 1) * (n + 1)), 0.0);
  const auto cix = [n](int i, int j) {
    return static_cast<std::size_t>(i) * static_cast<std::size_t>(n + 1) +
           static_cast<std::size_t>(j);
  };
  for (int i = 1; i <= n; ++i)
    for (int j = 0; j <= n; ++j)
      if (j != i) cost[cix(i, j)] = edge_cost(model, inst.x(i), inst.x(j));

  OracleResult result;
  result.tree_count = 0;
  std::vector<double> pathcost(static_cast<std::size_t>(n) + 1, 0.0);
  std::vector<signed char> known(static_cast<std::size_t>(n) + 1, 0);
  std::vector<int> stack;
  stack.reserve(static_cast<std::size_t>(n));
  std::vector<std::pair<RoutingTree, double>> near_min;  // pruned against the final minimum below

  bool first = true;
  for_each_routing_tree(n, [&](const std::vector<int>& hops) {
    ++result.tree_count;
    // pathcost[i]: cost of moving one unit from node i to the collector.
    std::fill(known.begin(), known.end(), static_cast<signed char>(0));
    known[0] = 1;
    pathcost[0] = 0.0;
    double energy = 0.0;
    for (int i = 1; i <= n; ++i) {
      int j = i;
      stack.clear();
      while (!known[static_cast<std::size_t>(j)]) {
        stack.push_back(j);
        j = hops[static_cast<std::size_t>(j)];
      }
      double pc = pathcost[static_cast<std::size_t>(j)];
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
        pc += cost[cix(*it, hops[static_cast<std::size_t>(*it)])];
        pathcost[static_cast<std::size_t>(*it)] = pc;
        known[static_cast<std::size_t>(*it)] = 1;
      }
      energy += inst.q(i) * pathcost[static_cast<std::size_t>(i)];
    }
    if (opts.collect_energies) result.energies.push_back(energy);

    const double tol = opts.tie_rel * std::max(1.0, std::abs(result.min_energy));
    if (first || energy < result.min_energy - tol) {
      result.min_energy = energy;
      near_min.clear();
      near_min.emplace_back(RoutingTree{hops}, energy);
      first = false;
    } else if (energy <= result.min_energy + tol) {
      near_min.emplace_back(RoutingTree{hops}, energy);
      if (energy < result.min_energy) result.min_energy = energy;
    }
  });

  const double tie_tol = opts.tie_rel * std::max(1.0, std::abs(result.min_energy));
  for (auto& [tree, energy] : near_min)
    if (energy <= result.min_energy + tie_tol) result.argmin.push_back(std::move(tree));

  if (opts.collect_energies) std::sort(result.energies.begin(), result.energies.end());

  // Primary solution from the first argmin tree.
  const RoutingTree& best = result.argmin.front();
  const auto matched = match_family(inst, best.hops);
  Solution sol;
  sol.graph = matched ? *matched : TransmissionGraph::custom(best.hops);
  sol.flow = realize(inst, sol.graph);
  sol.energy = total_energy(inst, model, sol.flow);
  sol.regime = "exhaustive search over " + std::to_string(result.tree_count) +
               " routing trees (" + std::to_string(result.argmin.size()) + " co-optimal)";
  sol.certified = false;
  result.solution = std::move(sol);
  return result;
}

}  // namespace minergy
