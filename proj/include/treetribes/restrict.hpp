#pragma once

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "treetribes/dtree.hpp"
#include "treetribes/poly.hpp"
#include "treetribes/restriction.hpp"
#include "treetribes/rng.hpp"

namespace treetribes {

inline constexpr int kEnumerationCap = 12;
inline constexpr uint64_t kDefaultSeed = 0xC0FFEE;

inline Restriction sample(const RestrictionLaw& law, size_t n, SampleRng& rng) {
  Restriction rho;
  rho.cells.resize(n);
  for (size_t i = 0; i < n; ++i) {
    if (law.star_from(rng.next()))
      rho.cells[i] = Cell::Star;
    else
      rho.cells[i] = (rng.next() & 1) ? Cell::One : Cell::Zero;
  }
  return rho;
}

// ---------------------------------------------------------------------------
// exact enumeration over all 3^n restrictions

namespace detail {

/// Constancy class of a read-once tree under the cells: 0, 1, or 2 for split.
inline int readonce_class(const DecisionTree& t, const std::vector<Cell>& cells) {
  auto rec = [&](auto&& self, NodeId u) -> int {
    const DtNode& nd = t.nodes[u];
    if (nd.is_leaf()) return nd.leaf;
    switch (cells[nd.var]) {
      case Cell::Zero: return self(self, nd.child0);
      case Cell::One: return self(self, nd.child1);
      default: break;
    }
    int a = self(self, nd.child0);
    if (a == 2) return 2;
    int b = self(self, nd.child1);
    if (b == 2) return 2;
    return a == b ? a : 2;
  };
  return rec(rec, t.root);
}

/// Assembles sum over s of count[s] p^s q^{n-s} with q expanded as (1-p)/2.
inline RationalPoly class_polynomial(const std::vector<uint64_t>& counts, int n) {
  RationalPoly q = RationalPoly::half_one_minus_p();
  RationalPoly p = RationalPoly::variable();
  std::vector<RationalPoly> qpow(static_cast<size_t>(n) + 1);
  qpow[0] = RationalPoly::constant(Rat(1));
  for (int i = 1; i <= n; ++i) qpow[i] = qpow[i - 1] * q;
  RationalPoly acc;
  RationalPoly ppow = RationalPoly::constant(Rat(1));
  for (int s = 0; s <= n; ++s) {
    if (counts[s] != 0)
      acc += ppow * qpow[n - s] * Rat(BigInt(counts[s]));
    ppow = ppow * p;
  }
  return acc;
}

template <class PerRestriction>
void for_each_restriction(int n, PerRestriction&& fn) {
  std::vector<Cell> cells(static_cast<size_t>(n), Cell::Zero);
  int stars = 0;
  for (;;) {
    fn(cells, stars);
    int i = 0;
    for (; i < n; ++i) {
      if (cells[i] == Cell::Zero) {
        cells[i] = Cell::One;
        break;
      }
      if (cells[i] == Cell::One) {
        cells[i] = Cell::Star;
        ++stars;
        break;
      }
      cells[i] = Cell::Zero;
      --stars;
    }
    if (i == n) return;
  }
}

}  // namespace detail

/*! \brief Exact class polynomials by brute force over all 3^n restrictions.
 *
 * Each restriction with s stars contributes p^s q^{n-s} to the class the
 * callback assigns it; the classes partition the outcome space, so the
 * returned polynomials sum to 1 identically.
 */
inline std::map<std::string, RationalPoly> enumerate_exact(
    const DecisionTree& tree,
    const std::function<std::string(const DecisionTree& restricted, const Restriction&)>& classify,
    int cap = kEnumerationCap) {
  const int n = tree.var_count;
  if (n > cap)
    throw resource_limit_error("enumerate_exact: " + std::to_string(n) +
                               " variables exceed cap " + std::to_string(cap));
  std::map<std::string, std::vector<uint64_t>> counts;
  detail::for_each_restriction(n, [&](const std::vector<Cell>& cells, int stars) {
    Restriction rho{cells};
    std::string label = classify(apply_restriction(tree, rho), rho);
    auto [it, inserted] = counts.try_emplace(label);
    if (inserted) it->second.assign(static_cast<size_t>(n) + 1, 0);
    it->second[stars]++;
  });
  std::map<std::string, RationalPoly> result;
  for (auto& [label, c] : counts) result[label] = detail::class_polynomial(c, n);
  return result;
}

struct P01Polys {
  RationalPoly p0, p1, pstar;
};

/// The constant-0 / constant-1 / split class polynomials of a read-once tree,
/// by exact enumeration (no intermediate tree allocation).
inline P01Polys enumerate_p0p1(const DecisionTree& tree, int cap = kEnumerationCap) {
  if (!tree.read_once)
    throw std::invalid_argument("enumerate_p0p1 requires a read-once tree");
  const int n = tree.var_count;
  if (n > cap)
    throw resource_limit_error("enumerate_p0p1: " + std::to_string(n) +
                               " variables exceed cap " + std::to_string(cap));
  std::vector<std::vector<uint64_t>> counts(3, std::vector<uint64_t>(static_cast<size_t>(n) + 1, 0));
  detail::for_each_restriction(n, [&](const std::vector<Cell>& cells, int stars) {
    counts[detail::readonce_class(tree, cells)][stars]++;
  });
  P01Polys out;
  out.p0 = detail::class_polynomial(counts[0], n);
  out.p1 = detail::class_polynomial(counts[1], n);
  out.pstar = detail::class_polynomial(counts[2], n);
  return out;
}

// ---------------------------------------------------------------------------
// Monte Carlo estimation

enum class OvercapPolicy { Report, AsSuccess, AsFailure };

struct EstimateReport {
  uint64_t samples = 0;
  uint64_t successes = 0;
  uint64_t skipped_overcap = 0;
  Rat phat{0};
  double standard_error = 0.0;
  uint64_t seed = 0;
};

namespace detail {

template <class Classify>
EstimateReport mc_run(const DecisionTree& tree, const RestrictionLaw& law, uint64_t samples,
                      uint64_t seed, OvercapPolicy policy, int workers, Classify&& classify) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  const size_t n = static_cast<size_t>(tree.var_count);

  auto run_range = [&](uint64_t lo, uint64_t hi, uint64_t& succ, uint64_t& skip) {
    for (uint64_t i = lo; i < hi; ++i) {
      SampleRng rng(seed, i);
      Restriction rho = sample(law, n, rng);
      DecisionTree simplified = apply_restriction(tree, rho);
      try {
        succ += classify(simplified) ? 1 : 0;
      } catch (const resource_limit_error&) {
        ++skip;
      }
    }
  };

  uint64_t successes = 0, skipped = 0;
  const int w = std::max(workers, 1);
  if (w == 1) {
    run_range(0, samples, successes, skipped);
  } else {
    std::vector<uint64_t> succ(w, 0), skip(w, 0);
    std::vector<std::thread> threads;
    threads.reserve(w);
    for (int k = 0; k < w; ++k) {
      uint64_t lo = samples * k / w, hi = samples * (k + 1) / w;
      threads.emplace_back([&, k, lo, hi] { run_range(lo, hi, succ[k], skip[k]); });
    }
    for (auto& th : threads) th.join();
    for (int k = 0; k < w; ++k) {
      successes += succ[k];
      skipped += skip[k];
    }
  }

  EstimateReport rep;
  rep.samples = samples;
  rep.skipped_overcap = skipped;
  rep.seed = seed;
  uint64_t denom = samples;
  switch (policy) {
    case OvercapPolicy::Report:
      denom = samples - skipped;
      break;
    case OvercapPolicy::AsSuccess:
      successes += skipped;
      break;
    case OvercapPolicy::AsFailure:
      break;
  }
  rep.successes = successes;
  if (denom > 0) {
    rep.phat = Rat(BigInt(successes)) / Rat(BigInt(denom));
    double ph = to_double(rep.phat);
    rep.standard_error = std::sqrt(std::max(ph * (1.0 - ph), 0.0) / static_cast<double>(denom));
  }
  return rep;
}

/// Depth of the already-simplified tree; cheap split-path shortcut for d = 1
/// on read-once trees, table-based search otherwise.
inline bool simplified_depth_at_least(const DecisionTree& simplified, int d, int live_cap) {
  if (d <= 0) return true;
  if (simplified.is_single_leaf()) return false;
  if (d == 1) {
    if (simplified.read_once) return has_split_path(simplified);
    return constness(table_over_live_vars(simplified, live_cap)) == Constness::NonConstant;
  }
  return dt_depth(table_over_live_vars(simplified, live_cap), live_cap) >= d;
}

}  // namespace detail

/*! \brief Estimates Pr[DT_depth(f|rho) >= d] over `samples` draws.
 *
 * Samples whose surviving starred variables exceed live_cap are counted in
 * skipped_overcap and handled per policy: excluded from the denominator
 * (Report, the default), counted as successes, or counted as failures.
 * Identical (seed, samples, law, tree) give identical reports for any
 * worker count.
 */
inline EstimateReport mc_estimate_depth_ge(const DecisionTree& tree, const RestrictionLaw& law,
                                           int d, uint64_t samples, uint64_t seed = kDefaultSeed,
                                           int live_cap = kDepthSearchCap,
                                           OvercapPolicy policy = OvercapPolicy::Report,
                                           int workers = 1) {
  return detail::mc_run(tree, law, samples, seed, policy, workers,
                        [d, live_cap](const DecisionTree& s) {
                          return detail::simplified_depth_at_least(s, d, live_cap);
                        });
}

/// Estimates Pr[f|rho is identically `value`].
inline EstimateReport mc_estimate_constant(const DecisionTree& tree, const RestrictionLaw& law,
                                           int value, uint64_t samples,
                                           uint64_t seed = kDefaultSeed,
                                           int live_cap = kDepthSearchCap,
                                           OvercapPolicy policy = OvercapPolicy::Report,
                                           int workers = 1) {
  return detail::mc_run(tree, law, samples, seed, policy, workers,
                        [value, live_cap](const DecisionTree& s) {
                          if (s.is_single_leaf()) return s.nodes[s.root].leaf == value;
                          if (s.read_once) {
                            if (has_split_path(s)) return false;
                            // all reachable leaves agree; any leaf decides
                            for (const DtNode& nd : s.nodes)
                              if (nd.is_leaf()) return nd.leaf == value;
                            return false;
                          }
                          Constness c = constness(detail::table_over_live_vars(s, live_cap));
                          return c == (value ? Constness::Const1 : Constness::Const0);
                        });
}

// ---------------------------------------------------------------------------
// report serialization

inline std::string csv_header() {
  return "t,r,p_num,p_den,d,samples,successes,phat,stderr,skipped,seed";
}

inline std::string csv_row(int t, int r, const Rat& p, int d, const EstimateReport& rep) {
  char buf[700];
  std::snprintf(buf, sizeof(buf), "%d,%d,%s,%s,%d,%llu,%llu,%.17g,%.17g,%llu,%llu", t, r,
                numerator(p).str().c_str(), denominator(p).str().c_str(), d,
                static_cast<unsigned long long>(rep.samples),
                static_cast<unsigned long long>(rep.successes), to_double(rep.phat),
                rep.standard_error, static_cast<unsigned long long>(rep.skipped_overcap),
                static_cast<unsigned long long>(rep.seed));
  return buf;
}

}  // namespace treetribes
