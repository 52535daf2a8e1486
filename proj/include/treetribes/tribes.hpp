#pragma once

#include <deque>
#include <optional>
#include <string>
#include <vector>

#include "treetribes/dtree.hpp"
#include "treetribes/rational.hpp"

namespace treetribes {

/// Identifies a t-clipped xor tree tribe on r levels.
struct TribeSpec {
  int t = 1;
  int r = 0;
};

/// Number of variables: sum of t^i for i in 1..r.
inline BigInt num_vars(int t, int r) {
  if (t < 1 || r < 0) throw std::invalid_argument("num_vars: need t >= 1, r >= 0");
  BigInt total = 0, power = 1;
  for (int i = 1; i <= r; ++i) {
    power *= t;
    total += power;
  }
  return total;
}

inline std::vector<BigInt> level_sizes(int t, int r) {
  std::vector<BigInt> sizes;
  BigInt power = 1;
  for (int l = 1; l <= r; ++l) {
    power *= t;
    sizes.push_back(power);
  }
  return sizes;
}

struct TribeTree {
  DecisionTree tree;
  TribeSpec spec;
  std::vector<int> level;      // per variable id, 1..r
  std::vector<int> root_dist;  // per variable id, edges from the root
};

namespace detail {

inline constexpr size_t kMaxTribeVars = size_t(1) << 26;

struct BlockRequest {
  NodeId parent;  // attach to its 1-edge; kNoNode for the root block
  int level;
  int parity;      // number of 1-edges on the path into the block, mod 2
  int root_depth;  // edge distance of the block's first variable from the root
};

/// Builds the complete clipped shape on r levels. Leaves are labeled by path
/// parity when parity_leaves is set, all 0 otherwise.
inline DecisionTree build_shape(int t, int r, bool parity_leaves,
                                std::vector<int>* level_out,
                                std::vector<int>* dist_out) {
  if (t < 1 || r < 0) throw std::invalid_argument("tribe shape: need t >= 1, r >= 0");
  BigInt n_big = num_vars(t, r);
  if (n_big > BigInt(kMaxTribeVars))
    throw resource_limit_error("tribe on " + n_big.str() + " variables is too large to build");
  const size_t n = n_big.convert_to<size_t>();
  if (level_out) level_out->assign(n, 0);
  if (dist_out) dist_out->assign(n, 0);

  DecisionTree tree;
  tree.read_once = true;
  if (r == 0) {
    tree.root = tree.add_leaf(0);
    return tree;
  }
  tree.nodes.reserve(2 * n + 2);

  int next_var = 0;
  std::deque<BlockRequest> queue;
  queue.push_back({kNoNode, 1, 0, 0});
  while (!queue.empty()) {
    BlockRequest req = queue.front();
    queue.pop_front();
    NodeId prev = kNoNode;
    for (int i = 0; i < t; ++i) {
      const int var = next_var++;
      NodeId node = tree.add_internal(var, 0, 0);
      if (level_out) (*level_out)[var] = req.level;
      if (dist_out) (*dist_out)[var] = req.root_depth + i;
      if (i == 0) {
        if (req.parent == kNoNode)
          tree.root = node;
        else
          tree.nodes[req.parent].child1 = node;
      } else {
        tree.nodes[prev].child0 = node;
      }
      if (req.level == r) {
        tree.nodes[node].child1 = tree.add_leaf(parity_leaves ? (req.parity ^ 1) : 0);
      } else {
        queue.push_back({node, req.level + 1, req.parity ^ 1, req.root_depth + i + 1});
      }
      prev = node;
    }
    tree.nodes[prev].child0 = tree.add_leaf(parity_leaves ? req.parity : 0);
  }
  return tree;
}

}  // namespace detail

/// Complete clipped decision tree on r levels (leaves labeled 0).
inline DecisionTree build_complete_clipped(int t, int r) {
  return detail::build_shape(t, r, /*parity_leaves=*/false, nullptr, nullptr);
}

/// Complete clipped tree with parity leaf labels and the level map populated.
inline TribeTree build_xor_tribe(int t, int r) {
  TribeTree tribe;
  tribe.spec = {t, r};
  tribe.tree = detail::build_shape(t, r, /*parity_leaves=*/true, &tribe.level, &tribe.root_dist);
  return tribe;
}

/// First violated tribe invariant, or nullopt when all hold.
inline std::optional<std::string> verify_tribe(const TribeTree& tribe) {
  const DecisionTree& t = tribe.tree;
  if (auto v = validate(t)) return v;
  const int clip = tribe.spec.t;

  // all variables distinct
  std::vector<int> occurrences(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  for (const DtNode& nd : t.nodes)
    if (!nd.is_leaf() && ++occurrences[nd.var] > 1)
      return "variable x" + std::to_string(nd.var) + " appears more than once";

  // distances to a 0-leaf and to a 1-leaf below every node
  const int inf = 1 << 28;
  std::vector<int> d0(t.nodes.size(), inf), d1(t.nodes.size(), inf);
  std::vector<std::pair<NodeId, bool>> stack{{t.root, false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) {
      (nd.leaf ? d1 : d0)[u] = 0;
      continue;
    }
    if (expanded) {
      d0[u] = 1 + std::min(d0[nd.child0], d0[nd.child1]);
      d1[u] = 1 + std::min(d1[nd.child0], d1[nd.child1]);
    } else {
      stack.push_back({u, true});
      stack.push_back({nd.child0, false});
      stack.push_back({nd.child1, false});
    }
  }
  for (size_t u = 0; u < t.nodes.size(); ++u) {
    if (t.nodes[u].is_leaf()) continue;
    if (d0[u] >= inf)
      return "node " + std::to_string(u) + " has no path to a 0-leaf (redundant vertex)";
    if (d1[u] >= inf)
      return "node " + std::to_string(u) + " has no path to a 1-leaf (redundant vertex)";
    if (d0[u] > clip + 1 || d1[u] > clip + 1)
      return "node " + std::to_string(u) + " is farther than t+1 from a 0-leaf or a 1-leaf";
  }

  // leaf labels carry the path parity; variable levels (1 + number of 1-edges
  // on the path) and root distances match the structure
  std::string violation;
  auto dfs = [&](auto&& self, NodeId u, int ones, int depth) -> bool {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) {
      if (nd.leaf != (ones & 1)) {
        violation = "leaf value " + std::to_string(nd.leaf) + " differs from path parity " +
                    std::to_string(ones & 1);
        return false;
      }
      return true;
    }
    if (nd.var >= static_cast<int>(tribe.level.size())) {
      violation = "level map does not cover x" + std::to_string(nd.var);
      return false;
    }
    if (tribe.level[nd.var] != ones + 1) {
      violation = "x" + std::to_string(nd.var) + " recorded at level " +
                  std::to_string(tribe.level[nd.var]) + ", structure says " +
                  std::to_string(ones + 1);
      return false;
    }
    if (tribe.root_dist[nd.var] != depth) {
      violation = "x" + std::to_string(nd.var) + " recorded at root distance " +
                  std::to_string(tribe.root_dist[nd.var]) + ", structure says " +
                  std::to_string(depth);
      return false;
    }
    return self(self, nd.child0, ones, depth + 1) &&
           self(self, nd.child1, ones + 1, depth + 1);
  };
  if (!dfs(dfs, t.root, 0, 0)) return violation;

  // level population: t^l variables at level l
  if (tribe.spec.r > 0) {
    std::vector<BigInt> expected = level_sizes(tribe.spec.t, tribe.spec.r);
    std::vector<size_t> found(expected.size() + 1, 0);
    for (int lv : tribe.level) {
      if (lv < 1 || lv > tribe.spec.r) return "variable level outside 1..r";
      found[static_cast<size_t>(lv)]++;
    }
    for (size_t l = 1; l <= expected.size(); ++l)
      if (BigInt(found[l]) != expected[l - 1])
        return "level " + std::to_string(l) + " has " + std::to_string(found[l]) +
               " variables, expected " + expected[l - 1].str();
  }
  return std::nullopt;
}

}  // namespace treetribes
