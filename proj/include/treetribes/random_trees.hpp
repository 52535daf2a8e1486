#pragma once

#include <algorithm>
#include <vector>

#include "treetribes/dtree.hpp"
#include "treetribes/rng.hpp"

namespace treetribes {

/*! \brief Seeded random valid decision tree.
 *
 * Variables never repeat along a path but may repeat across branches. The
 * leaf probability rises with depth so trees stay small; shape and labels are
 * a pure function of the rng state.
 */
inline DecisionTree random_tree(SampleRng& rng, int max_vars, int max_depth) {
  DecisionTree t;
  auto gen = [&](auto&& self, int depth, std::vector<int>& path) -> NodeId {
    const bool must_leaf = depth >= max_depth ||
                           static_cast<int>(path.size()) >= max_vars;
    if (must_leaf || rng.next() % 100 < static_cast<uint64_t>(20 + 25 * depth))
      return t.add_leaf(static_cast<int>(rng.next() & 1));
    int var;
    do {
      var = static_cast<int>(rng.next() % max_vars);
    } while (std::find(path.begin(), path.end(), var) != path.end());
    path.push_back(var);
    NodeId c0 = self(self, depth + 1, path);
    NodeId c1 = self(self, depth + 1, path);
    path.pop_back();
    return t.add_internal(var, c0, c1);
  };
  std::vector<int> path;
  t.root = gen(gen, 0, path);
  std::vector<int> count(static_cast<size_t>(std::max(t.var_count, 1)), 0);
  t.read_once = true;
  for (const DtNode& nd : t.nodes)
    if (!nd.is_leaf() && ++count[nd.var] > 1) t.read_once = false;
  return t;
}

/// Random non-leaf trees whose minimal clip parameter is at most t_max.
inline std::vector<DecisionTree> random_clipped_trees(uint64_t seed, int count, int t_max,
                                                      int max_vars, int max_depth = 6) {
  std::vector<DecisionTree> out;
  uint64_t attempt = 0;
  while (static_cast<int>(out.size()) < count) {
    SampleRng rng(seed, attempt++);
    DecisionTree t = random_tree(rng, max_vars, max_depth);
    if (t.is_single_leaf()) continue;
    ClipReport rep = clip_report(t);
    if (rep.t_clip < 1 || rep.t_clip > t_max) continue;
    out.push_back(std::move(t));
  }
  return out;
}

}  // namespace treetribes
