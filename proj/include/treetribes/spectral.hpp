#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <vector>

#include "treetribes/rational.hpp"
#include "treetribes/tribes.hpp"

namespace treetribes {

/// J_i = (2^i - (-1)^i) / 3; also satisfies J_i = J_{i-1} + 2 J_{i-2}.
inline BigInt jacobsthal(unsigned i) {
  BigInt two_i = BigInt(1) << i;
  BigInt sign = (i % 2 == 0) ? 1 : -1;
  return (two_i - sign) / 3;
}

/*! \brief Closed-form coefficient of the one-variable-per-level tribe on an
 * odd number of variables.
 *
 * S is a nonempty subset bitmask over variables 0..n-1 in root order; with j
 * the 1-based largest index in S, the coefficient is
 * (-1)^{|S|+j} J_{n-j+1} / 2^{n-1}, sign included.
 */
inline Rat fourier_t1_closed(int n, uint64_t s_mask) {
  if (n < 1 || n % 2 == 0)
    throw std::domain_error("fourier_t1_closed: stated for odd n only");
  if (s_mask == 0 || (s_mask >> n) != 0)
    throw std::invalid_argument("fourier_t1_closed: S must be a nonempty subset of the n variables");
  int j = 64 - __builtin_clzll(s_mask);  // 1-based largest index
  int size = __builtin_popcountll(s_mask);
  Rat value = Rat(jacobsthal(static_cast<unsigned>(n - j + 1))) * pow2(-(n - 1));
  return ((size + j) % 2 == 0) ? value : -value;
}

struct PathParams {
  int k = 0;  // distance of the deepest variable of S to the leaf out of its 0-chain
  int d = 0;  // its distance from the root
  int l = 0;  // its level
};

namespace detail {

/// Edges from the node to the leaf reached by following 0-edges only. This is
/// the leaf distance the closed form is parameterized by; at the last levels
/// it exceeds the graph distance (a 1-edge leaf may sit closer).
inline int zero_chain_distance(const DecisionTree& t, NodeId u) {
  int steps = 0;
  while (!t.nodes[u].is_leaf()) {
    u = t.nodes[u].child0;
    ++steps;
  }
  return steps;
}

/// Variables on the root path of each variable's node (exclusive), as masks.
/// Only valid for read-once trees with var_count <= 64.
inline std::vector<uint64_t> ancestor_masks(const DecisionTree& t) {
  std::vector<uint64_t> anc(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  auto dfs = [&](auto&& self, NodeId u, uint64_t mask) -> void {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) return;
    anc[nd.var] = mask;
    uint64_t next = mask | (uint64_t(1) << nd.var);
    self(self, nd.child0, next);
    self(self, nd.child1, next);
  };
  dfs(dfs, t.root, 0);
  return anc;
}

}  // namespace detail

/// Parameters of the deepest variable of S when S lies on a single root-leaf
/// path of the tribe; nullopt otherwise.
inline std::optional<PathParams> on_path_params(const TribeTree& tribe, uint64_t s_mask) {
  const DecisionTree& t = tribe.tree;
  if (s_mask == 0) throw std::invalid_argument("on_path_params: S must be nonempty");
  if (t.var_count > 64) throw resource_limit_error("on_path_params: more than 64 variables");
  if ((s_mask >> t.var_count) != 0)
    throw std::invalid_argument("on_path_params: S contains an unknown variable");

  int deepest = -1;
  for (int v = 0; v < t.var_count; ++v)
    if ((s_mask >> v) & 1)
      if (deepest < 0 || tribe.root_dist[v] > tribe.root_dist[deepest]) deepest = v;

  std::vector<uint64_t> anc = detail::ancestor_masks(t);
  uint64_t chain = anc[static_cast<size_t>(deepest)] | (uint64_t(1) << deepest);
  if ((s_mask & ~chain) != 0) return std::nullopt;

  int k = 0;
  for (size_t u = 0; u < t.nodes.size(); ++u)
    if (!t.nodes[u].is_leaf() && t.nodes[u].var == deepest)
      k = detail::zero_chain_distance(t, static_cast<NodeId>(u));
  return PathParams{k, tribe.root_dist[deepest], tribe.level[deepest]};
}

struct ClosedCoeff {
  bool zero = false;
  Rat magnitude{0};  // sign undetermined for general t
};

/*! \brief Closed-form coefficient magnitude for a general tribe.
 *
 * Zero when S does not lie on a single root-leaf path; otherwise
 * 2^{1-k-d} (1 - beta^{r-l+1}) / (2 - alpha) with alpha = 2^-t and
 * beta = 2^-t - 1, taken from the deepest variable of S.
 */
inline ClosedCoeff fourier_general_closed(const TribeTree& tribe, uint64_t s_mask) {
  auto params = on_path_params(tribe, s_mask);
  if (!params) return {true, Rat(0)};
  const Rat alpha = pow2(-tribe.spec.t);
  const Rat beta = alpha - 1;
  const Rat factor = (Rat(1) - rat_pow(beta, static_cast<unsigned long>(
                                                 tribe.spec.r - params->l + 1))) /
                     (Rat(2) - alpha);
  Rat mag = pow2(1 - params->k - params->d) * factor;
  return {false, abs(mag)};
}

/// |(1 - (2^-t - 1)^{r+1}) / (2 - 2^-t) - 1/2| exactly.
inline Rat bias_closed(int t, int r) {
  if (t < 1 || r < 1) throw std::invalid_argument("bias_closed: need t >= 1, r >= 1");
  const Rat alpha = pow2(-t);
  const Rat beta = alpha - 1;
  return abs((Rat(1) - rat_pow(beta, static_cast<unsigned long>(r) + 1)) / (Rat(2) - alpha) -
             rat(1, 2));
}

}  // namespace treetribes
