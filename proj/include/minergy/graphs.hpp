#pragma once

// The canonical family of routing graphs on the sensor line and their
// realization as flow matrices. Every family member assigns each sensor a
// single next hop, so realized flows are trees rooted at the collector.

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "core.hpp"

namespace minergy {

/// Number of sensors strictly inside the near half of the line:
/// |{k : x_k < x_N / 2}|. These are the only candidates for relaying their
/// data via the farthest node. For unit spacing this is (N-2)/2 for even N
/// and (N-1)/2 for odd N.
inline int n_prime(const NetworkInstance& inst) {
  const double half = inst.x(inst.size()) / 2.0;
  int count = 0;
  for (int k = 1; k <= inst.size(); ++k)
    if (inst.x(k) < half) ++count;
  return count;
}

// ---------------------------------------------------------------------------
// TransmissionGraph: a named routing pattern.
//   next_hop            T0    every node sends to its nearer neighbor
//   direct              T1    every node sends straight to the collector
//   split(k)            Tk+1  nodes 1..k relay via node N, the rest direct
//   next_hop_perturbed  T0+   chain with node N jumping to node N-2
//   direct_perturbed    T1+   direct with node N relayed via node n'+1
//   custom              an explicit next-hop assignment (exhaustive search)
// ---------------------------------------------------------------------------

class TransmissionGraph {
 public:
  enum class Kind { next_hop, direct, split, next_hop_perturbed, direct_perturbed, custom };

  static TransmissionGraph next_hop() { return TransmissionGraph(Kind::next_hop, 0, {}); }
  static TransmissionGraph direct() { return TransmissionGraph(Kind::direct, 0, {}); }

  static TransmissionGraph split(int k) {
    if (k < 1) throw IndexOutOfRange("TransmissionGraph::split: k must be >= 1");
    return TransmissionGraph(Kind::split, k, {});
  }

  static TransmissionGraph next_hop_perturbed() {
    return TransmissionGraph(Kind::next_hop_perturbed, 0, {});
  }
  static TransmissionGraph direct_perturbed() {
    return TransmissionGraph(Kind::direct_perturbed, 0, {});
  }

  /// hops[i] is the receiver of node i, for i in [1, N]; hops[0] must be 0.
  static TransmissionGraph custom(std::vector<int> hops) {
    if (hops.empty() || hops[0] != 0)
      throw std::invalid_argument("TransmissionGraph::custom: hops[0] must be 0");
    return TransmissionGraph(Kind::custom, 0, std::move(hops));
  }

  Kind kind() const { return kind_; }

  /// Number of relayed nodes (split graphs only).
  int split_k() const { return k_; }

  const std::vector<int>& hops() const { return hops_; }

  std::string label() const {
    switch (kind_) {
      case Kind::next_hop: return "T0";
      case Kind::direct: return "T1";
      case Kind::split:
        return "T" + std::to_string(k_ + 1) + "(" + std::to_string(k_) + ")";
      case Kind::next_hop_perturbed: return "T0+";
      case Kind::direct_perturbed: return "T1+";
      case Kind::custom: {
        std::string s = "tree(";
        for (std::size_t i = 1; i < hops_.size(); ++i) {
          if (i > 1) s += ",";
          s += std::to_string(hops_[i]);
        }
        return s + ")";
      }
    }
    return {};
  }

  friend bool operator==(const TransmissionGraph&, const TransmissionGraph&) = default;

 private:
  TransmissionGraph(Kind kind, int k, std::vector<int> hops)
      : kind_(kind), k_(k), hops_(std::move(hops)) {}

  Kind kind_;
  int k_;
  std::vector<int> hops_;
};

/// Next-hop map of a family graph on a concrete instance: result[i] is the
/// receiver of node i, result[0] == 0.
inline std::vector<int> family_hops(const NetworkInstance& inst, const TransmissionGraph& g) {
  const int n = inst.size();
  std::vector<int> hops(static_cast<std::size_t>(n) + 1, 0);
  switch (g.kind()) {
    case TransmissionGraph::Kind::next_hop:
      for (int i = 1; i <= n; ++i) hops[static_cast<std::size_t>(i)] = i - 1;
      break;
    case TransmissionGraph::Kind::direct:
      for (int i = 1; i <= n; ++i) hops[static_cast<std::size_t>(i)] = 0;
      break;
    case TransmissionGraph::Kind::split: {
      const int k = g.split_k();
      if (k < 1 || k > n_prime(inst))
        throw IndexOutOfRange("realize: split k=" + std::to_string(k) +
                              " outside [1, n'=" + std::to_string(n_prime(inst)) + "]");
      for (int i = 1; i <= k; ++i) hops[static_cast<std::size_t>(i)] = n;
      for (int i = k + 1; i <= n; ++i) hops[static_cast<std::size_t>(i)] = 0;
      break;
    }
    case TransmissionGraph::Kind::next_hop_perturbed: {
      if (n < 2)
        throw IndexOutOfRange("realize: perturbed chain needs at least 2 sensors");
      for (int i = 1; i < n; ++i) hops[static_cast<std::size_t>(i)] = i - 1;
      hops[static_cast<std::size_t>(n)] = n - 2;
      break;
    }
    case TransmissionGraph::Kind::direct_perturbed: {
      const int relay = n_prime(inst) + 1;
      if (n < 2 || relay >= n)
        throw IndexOutOfRange("realize: perturbed direct needs a relay below node N");
      for (int i = 1; i < n; ++i) hops[static_cast<std::size_t>(i)] = 0;
      hops[static_cast<std::size_t>(n)] = relay;
      break;
    }
    case TransmissionGraph::Kind::custom: {
      const auto& h = g.hops();
      if (static_cast<int>(h.size()) != n + 1)
        throw DimensionMismatch("realize: custom hop map size does not match instance");
      for (int i = 1; i <= n; ++i) {
        const int to = h[static_cast<std::size_t>(i)];
        if (to < 0 || to > n || to == i)
          throw IndexOutOfRange("realize: custom hop of node " + std::to_string(i));
      }
      hops = h;
      break;
    }
  }
  return hops;
}

/// Realizes a graph as the unique feasible flow that routes every node's
/// data along its hop chain. Throws InfeasibleFlow if the hop map is cyclic.
inline FlowMatrix realize(const NetworkInstance& inst, const TransmissionGraph& g) {
  const int n = inst.size();
  const std::vector<int> hops = family_hops(inst, g);

  // Depth of each node's chain to the collector; also rejects cycles.
  std::vector<int> depth(static_cast<std::size_t>(n) + 1, -1);
  depth[0] = 0;
  for (int i = 1; i <= n; ++i) {
    int j = i, steps = 0;
    while (depth[static_cast<std::size_t>(j)] < 0) {
      if (++steps > n) throw InfeasibleFlow("realize: hop map contains a cycle");
      j = hops[static_cast<std::size_t>(j)];
    }
    int back = depth[static_cast<std::size_t>(j)] + steps;
    j = i;
    while (depth[static_cast<std::size_t>(j)] < 0) {
      depth[static_cast<std::size_t>(j)] = back--;
      j = hops[static_cast<std::size_t>(j)];
    }
  }

  // Accumulate throughput leaf-to-root: process deeper nodes first.
  std::vector<int> order;
  order.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) order.push_back(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (depth[static_cast<std::size_t>(a)] != depth[static_cast<std::size_t>(b)])
      return depth[static_cast<std::size_t>(a)] > depth[static_cast<std::size_t>(b)];
    return a < b;
  });

  std::vector<double> load(static_cast<std::size_t>(n) + 1, 0.0);
  for (int i = 1; i <= n; ++i) load[static_cast<std::size_t>(i)] = inst.q(i);
  FlowMatrix flow(n);
  for (int i : order) {
    const int to = hops[static_cast<std::size_t>(i)];
    flow.set(i, to, load[static_cast<std::size_t>(i)]);
    if (to != 0) load[static_cast<std::size_t>(to)] += load[static_cast<std::size_t>(i)];
  }
  return flow;
}

/// The canonical candidates in fixed order: T0, T1, then split(1..n').
inline std::vector<TransmissionGraph> enumerate_canonical(const NetworkInstance& inst) {
  std::vector<TransmissionGraph> out{TransmissionGraph::next_hop(), TransmissionGraph::direct()};
  const int np = n_prime(inst);
  for (int k = 1; k <= np; ++k) out.push_back(TransmissionGraph::split(k));
  return out;
}

/// Canonical candidates plus the two perturbed graphs where they exist.
inline std::vector<TransmissionGraph> enumerate_family(const NetworkInstance& inst) {
  auto out = enumerate_canonical(inst);
  if (inst.size() >= 2) {
    out.push_back(TransmissionGraph::next_hop_perturbed());
    if (n_prime(inst) + 1 < inst.size()) out.push_back(TransmissionGraph::direct_perturbed());
  }
  return out;
}

/// Matches a next-hop map against the named family; std::nullopt for
/// assignments outside it.
inline std::optional<TransmissionGraph> match_family(const NetworkInstance& inst,
                                                     const std::vector<int>& hops) {
  for (const auto& g : enumerate_family(inst)) {
    if (family_hops(inst, g) == hops) return g;
  }
  return std::nullopt;
}

}  // namespace minergy
