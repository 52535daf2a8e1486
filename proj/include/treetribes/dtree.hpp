#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "treetribes/boolfn.hpp"
#include "treetribes/restriction.hpp"

namespace treetribes {

using NodeId = uint32_t;
inline constexpr NodeId kNoNode = ~NodeId(0);

struct DtNode {
  int32_t var = -1;      // internal nodes only
  NodeId child0 = 0;     // 0-edge
  NodeId child1 = 0;     // 1-edge
  int8_t leaf = -1;      // leaf value, -1 for internal nodes
  bool is_leaf() const { return var < 0; }
};

/*! \brief Labeled rooted binary decision tree over a node pool.
 *
 * Variables are 0-based ids; var_count tracks one past the largest id seen.
 * Builders that guarantee all-distinct variables set read_once, which
 * enables leaf-reachability shortcuts that are unsound for general trees.
 */
struct DecisionTree {
  std::vector<DtNode> nodes;
  NodeId root = 0;
  int var_count = 0;
  bool read_once = false;

  NodeId add_leaf(int value) {
    nodes.push_back(DtNode{-1, 0, 0, static_cast<int8_t>(value ? 1 : 0)});
    return static_cast<NodeId>(nodes.size() - 1);
  }
  NodeId add_internal(int var, NodeId c0, NodeId c1) {
    nodes.push_back(DtNode{var, c0, c1, -1});
    var_count = std::max(var_count, var + 1);
    return static_cast<NodeId>(nodes.size() - 1);
  }
  static DecisionTree single_leaf(int value) {
    DecisionTree t;
    t.root = t.add_leaf(value);
    t.read_once = true;
    return t;
  }
  const DtNode& node(NodeId id) const { return nodes[id]; }
  bool is_single_leaf() const { return nodes[root].is_leaf(); }
};

/// First violation of the decision-tree contract, or nullopt when valid.
inline std::optional<std::string> validate(const DecisionTree& t) {
  const size_t n = t.nodes.size();
  if (n == 0) return "empty node pool";
  if (t.root >= n) return "root id does not resolve";
  for (size_t i = 0; i < n; ++i) {
    const DtNode& nd = t.nodes[i];
    if (nd.is_leaf()) {
      if (nd.leaf != 0 && nd.leaf != 1) return "leaf value outside {0,1}";
    } else {
      if (nd.leaf != -1) return "internal node carries a leaf value";
      if (nd.child0 >= n || nd.child1 >= n)
        return "child id does not resolve at node " + std::to_string(i);
    }
  }
  // single parent over the reachable part
  std::vector<int> indegree(n, 0);
  std::vector<uint8_t> seen(n, 0);
  std::vector<NodeId> stack{t.root};
  seen[t.root] = 1;
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) continue;
    for (NodeId c : {nd.child0, nd.child1}) {
      if (++indegree[c] > 1)
        return "node " + std::to_string(c) + " has more than one parent";
      if (!seen[c]) {
        seen[c] = 1;
        stack.push_back(c);
      }
    }
  }
  if (indegree[t.root] != 0) return "root has a parent";

  // no variable repeats along any root-to-leaf path
  std::vector<uint8_t> on_path(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  std::string violation;
  auto dfs = [&](auto&& self, NodeId u, std::string& path) -> bool {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) return true;
    if (nd.var < 0 || nd.var >= t.var_count) {
      violation = "variable id out of range at node " + std::to_string(u);
      return false;
    }
    if (on_path[nd.var]) {
      violation = "variable x" + std::to_string(nd.var) + " repeats on path " + path;
      return false;
    }
    on_path[nd.var] = 1;
    path += " x" + std::to_string(nd.var);
    bool ok = self(self, nd.child0, path) && self(self, nd.child1, path);
    path.resize(path.size() - (2 + std::to_string(nd.var).size()));
    on_path[nd.var] = 0;
    return ok;
  };
  std::string path = "(root)";
  if (!dfs(dfs, t.root, path)) return violation;
  return std::nullopt;
}

struct ClipReport {
  int t_clip = 0;   // minimal t such that the tree is t-clipped
  int t0_clip = 0;  // distance of the root to its closest leaf
  bool is_t_clipped(int t) const { return t_clip <= t; }
};

inline ClipReport clip_report(const DecisionTree& t) {
  // min distance to a leaf per node, children before parents
  std::vector<int> dist(t.nodes.size(), -1);
  std::vector<std::pair<NodeId, bool>> stack{{t.root, false}};
  while (!stack.empty()) {
    auto [u, expanded] = stack.back();
    stack.pop_back();
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) {
      dist[u] = 0;
      continue;
    }
    if (expanded) {
      dist[u] = 1 + std::min(dist[nd.child0], dist[nd.child1]);
    } else {
      stack.push_back({u, true});
      stack.push_back({nd.child0, false});
      stack.push_back({nd.child1, false});
    }
  }
  ClipReport r;
  r.t0_clip = dist[t.root];
  for (size_t i = 0; i < t.nodes.size(); ++i)
    if (!t.nodes[i].is_leaf()) r.t_clip = std::max(r.t_clip, dist[i]);
  return r;
}

inline int eval_tree(const DecisionTree& t, uint64_t x) {
  NodeId u = t.root;
  while (!t.nodes[u].is_leaf()) {
    const DtNode& nd = t.nodes[u];
    u = ((x >> nd.var) & 1) ? nd.child1 : nd.child0;
  }
  return t.nodes[u].leaf;
}

/// Table over var_count variables (ids not appearing in the tree are padding),
/// or over n >= var_count when given.
inline TruthTable to_truth_table(const DecisionTree& t, int n = -1) {
  const int vars = n < 0 ? t.var_count : n;
  if (vars < t.var_count)
    throw std::invalid_argument("to_truth_table: n smaller than the tree's variable span");
  return TruthTable::from_function(vars, [&](uint64_t x) { return eval_tree(t, x); });
}

/*! \brief Replaces every node fixed by rho with the chosen child; starred
 * nodes remain. The result computes the restricted function.
 */
inline DecisionTree apply_restriction(const DecisionTree& t, const Restriction& rho) {
  if (rho.size() < static_cast<size_t>(t.var_count))
    throw std::invalid_argument("restriction does not cover all tree variables");
  DecisionTree out;
  out.read_once = t.read_once;
  auto build = [&](auto&& self, NodeId u) -> NodeId {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) return out.add_leaf(nd.leaf);
    switch (rho.cells[nd.var]) {
      case Cell::Zero: return self(self, nd.child0);
      case Cell::One: return self(self, nd.child1);
      case Cell::Star: {
        NodeId c0 = self(self, nd.child0);
        NodeId c1 = self(self, nd.child1);
        return out.add_internal(nd.var, c0, c1);
      }
    }
    return kNoNode;  // unreachable
  };
  out.root = build(build, t.root);
  return out;
}

/// True iff some reachable leaf is 0 and some reachable leaf is 1. Equivalent
/// to non-constancy only for read-once trees.
inline bool has_split_path(const DecisionTree& t) {
  bool seen0 = false, seen1 = false;
  std::vector<NodeId> stack{t.root};
  while (!stack.empty()) {
    NodeId u = stack.back();
    stack.pop_back();
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) {
      (nd.leaf ? seen1 : seen0) = true;
      if (seen0 && seen1) return true;
      continue;
    }
    stack.push_back(nd.child0);
    stack.push_back(nd.child1);
  }
  return false;
}

namespace detail {

/// Distinct variables appearing in the tree, ascending.
inline std::vector<int> tree_variables(const DecisionTree& t) {
  std::vector<uint8_t> present(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  for (const DtNode& nd : t.nodes)
    if (!nd.is_leaf()) present[nd.var] = 1;
  std::vector<int> vars;
  for (int v = 0; v < t.var_count; ++v)
    if (present[v]) vars.push_back(v);
  return vars;
}

/// Table over exactly the variables present in `t`, in ascending id order.
inline TruthTable table_over_live_vars(const DecisionTree& t, int live_cap) {
  std::vector<int> vars = tree_variables(t);
  const int s = static_cast<int>(vars.size());
  if (s > live_cap)
    throw resource_limit_error("restricted tree has " + std::to_string(s) +
                               " live variables, cap " + std::to_string(live_cap));
  std::vector<int> pos(static_cast<size_t>(std::max(t.var_count, 1)), -1);
  for (int j = 0; j < s; ++j) pos[vars[j]] = j;
  return TruthTable::from_function(s, [&](uint64_t y) {
    NodeId u = t.root;
    while (!t.nodes[u].is_leaf()) {
      const DtNode& nd = t.nodes[u];
      u = ((y >> pos[nd.var]) & 1) ? nd.child1 : nd.child0;
    }
    return t.nodes[u].leaf;
  });
}

}  // namespace detail

/*! \brief Exact minimal depth of the restricted function.
 *
 * Simplifies the tree under rho, builds the table over the surviving starred
 * variables only, and runs the depth search. Throws resource_limit_error when
 * more than live_cap starred variables survive, so callers can count it.
 */
inline int restricted_dt_depth(const DecisionTree& t, const Restriction& rho,
                               int live_cap = kDepthSearchCap) {
  DecisionTree s = apply_restriction(t, rho);
  if (s.is_single_leaf()) return 0;
  return dt_depth(detail::table_over_live_vars(s, live_cap), live_cap);
}

// ---- text serialization: (x<i> <zero-subtree> <one-subtree>), L0/L1 leaves

inline std::string to_text(const DecisionTree& t) {
  std::string out;
  auto emit = [&](auto&& self, NodeId u) -> void {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) {
      out += nd.leaf ? "L1" : "L0";
      return;
    }
    out += "(x" + std::to_string(nd.var) + " ";
    self(self, nd.child0);
    out += " ";
    self(self, nd.child1);
    out += ")";
  };
  emit(emit, t.root);
  return out;
}

inline DecisionTree parse_tree(std::string_view text) {
  size_t i = 0;
  auto fail = [&]() -> void { throw std::invalid_argument("bad tree text at offset " + std::to_string(i)); };
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  DecisionTree t;
  auto parse = [&](auto&& self) -> NodeId {
    skip_ws();
    if (i >= text.size()) fail();
    if (text[i] == 'L') {
      ++i;
      if (i >= text.size() || (text[i] != '0' && text[i] != '1')) fail();
      return t.add_leaf(text[i++] == '1');
    }
    if (text[i] != '(') fail();
    ++i;
    skip_ws();
    if (i >= text.size() || text[i] != 'x') fail();
    ++i;
    size_t start = i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (start == i || i - start > 7) fail();
    int var = std::stoi(std::string(text.substr(start, i - start)));
    NodeId c0 = self(self);
    NodeId c1 = self(self);
    skip_ws();
    if (i >= text.size() || text[i] != ')') fail();
    ++i;
    return t.add_internal(var, c0, c1);
  };
  t.root = parse(parse);
  skip_ws();
  if (i != text.size()) fail();
  if (auto v = validate(t)) throw std::invalid_argument("parsed tree invalid: " + *v);
  // mark read-once when no variable occurs twice anywhere
  std::vector<int> count(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  bool once = true;
  for (const DtNode& nd : t.nodes)
    if (!nd.is_leaf() && ++count[nd.var] > 1) once = false;
  t.read_once = once;
  return t;
}

}  // namespace treetribes
