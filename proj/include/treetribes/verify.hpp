#pragma once

#include <chrono>
#include <string>
#include <vector>

#include "treetribes/bounds.hpp"
#include "treetribes/polyrec.hpp"
#include "treetribes/random_trees.hpp"
#include "treetribes/restrict.hpp"
#include "treetribes/spectral.hpp"
#include "treetribes/tribes.hpp"

namespace treetribes {

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;
  double seconds = 0.0;
};

struct VerifyOptions {
  bool quick = false;  // smaller sample counts for a fast smoke run
  uint64_t seed = kDefaultSeed;
  int workers = 1;
};

namespace verify_detail {

template <class Fn>
CriterionResult timed(int id, const std::string& name, Fn&& fn) {
  CriterionResult res;
  res.id = id;
  res.name = name;
  auto start = std::chrono::steady_clock::now();
  try {
    res.passed = fn(res.detail);
  } catch (const std::exception& e) {
    res.passed = false;
    res.detail = std::string("exception: ") + e.what();
  }
  res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return res;
}

inline std::string rat_str(const Rat& x) { return to_fraction_string(x); }

}  // namespace verify_detail

/// 1. The recurrence polynomials match brute-force enumeration coefficientwise.
inline CriterionResult verify_recurrence_oracle(const VerifyOptions&) {
  return verify_detail::timed(1, "recurrence-vs-enumeration", [&](std::string& detail) {
    struct Point {
      int t, r;
    };
    std::vector<Point> points;
    for (int r = 1; r <= 7; ++r) points.push_back({1, r});
    for (int r = 1; r <= 3; ++r) points.push_back({2, r});
    int checked = 0;
    for (auto [t, r] : points) {
      TribeTree tribe = build_xor_tribe(t, r);
      P01Polys oracle = enumerate_p0p1(tribe.tree, /*cap=*/14);
      auto [p0, p1] = p0_p1(t, r);
      RationalPoly pstar = RationalPoly::constant(Rat(1)) - p0 - p1;
      if (p0 != oracle.p0 || p1 != oracle.p1 || pstar != oracle.pstar) {
        detail = "mismatch at t=" + std::to_string(t) + ", r=" + std::to_string(r);
        return false;
      }
      ++checked;
    }
    detail = std::to_string(checked) + " parameter points, exact equality";
    return true;
  });
}

/// 2. Constant coefficients: both routes agree and sum to 1 for t <= 6, r <= 50.
inline CriterionResult verify_constant_coefficients(const VerifyOptions&) {
  return verify_detail::timed(2, "constant-coefficients", [&](std::string& detail) {
    for (int t = 1; t <= 6; ++t) {
      for (int r = 1; r <= 50; ++r) {
        ConstCoeffs c = const_coeffs(t, r);  // throws on route mismatch
        if (c.p0 + c.p1 != Rat(1)) {
          detail = "sum != 1 at t=" + std::to_string(t) + ", r=" + std::to_string(r);
          return false;
        }
        if (c.p0 < 0 || c.p0 > 1 || c.p1 < 0 || c.p1 > 1) {
          detail = "coefficient outside [0,1] at t=" + std::to_string(t) + ", r=" +
                   std::to_string(r);
          return false;
        }
      }
    }
    detail = "recurrence == closed form and sums to 1 for t <= 6, r <= 50";
    return true;
  });
}

/// 3. [p]-coefficients within [-2*2^t, 0]; summed coefficient <= -2^t/6 at r = 4*2^t.
inline CriterionResult verify_p_coefficient_bounds(const VerifyOptions&) {
  return verify_detail::timed(3, "p-coefficient-bounds", [&](std::string& detail) {
    for (int t = 1; t <= 5; ++t) {
      const Rat lo = Rat(-2) * pow2(t);
      for (int r = 1; r <= 40; ++r) {
        PCoeffs c = p_coeffs(t, r);
        if (c.p0 < lo || c.p0 > 0 || c.p1 < lo || c.p1 > 0) {
          detail = "coefficient outside range at t=" + std::to_string(t) + ", r=" +
                   std::to_string(r);
          return false;
        }
      }
    }
    for (int t = 1; t <= 3; ++t) {
      const int r = 4 << t;  // 4 * 2^t
      Rat g = g_function(t, r);
      if (!(g <= -pow2(t) / 6)) {
        detail = "g(" + std::to_string(r) + ") = " + verify_detail::rat_str(g) +
                 " above -2^t/6 at t=" + std::to_string(t);
        return false;
      }
    }
    detail = "ranges hold for t <= 5, r <= 40; g(4*2^t) <= -2^t/6 for t = 1,2,3";
    return true;
  });
}

/// 4. Certified tail maximizer stays below 30 * 2^{2t} on [0, 2^-t/420].
inline CriterionResult verify_g2_tail(const VerifyOptions&) {
  return verify_detail::timed(4, "g2-tail-bound", [&](std::string& detail) {
    Rat worst(0);
    for (int t = 1; t <= 2; ++t) {
      for (int r = 1; r <= 12; ++r) {
        G2Result res = g2_check(t, r);
        if (!res.pass) {
          detail = "bound " + verify_detail::rat_str(res.bound) + " exceeds limit at t=" +
                   std::to_string(t) + ", r=" + std::to_string(r);
          return false;
        }
        Rat rel = res.bound / res.limit;
        if (rel > worst) worst = rel;
      }
    }
    detail = "certified bound <= 30*2^{2t} everywhere; worst ratio " +
             std::to_string(to_double(worst));
    return true;
  });
}

/// 5. Exact sandwich at depth 1: c0 p 2^t <= P*(r)(p) <= 4 p 2^t.
inline CriterionResult verify_depth1_sandwich(const VerifyOptions&) {
  return verify_detail::timed(5, "depth1-sandwich", [&](std::string& detail) {
    const BoundConstants consts;
    struct Point {
      int t, r;
    };
    for (Point pt : {Point{1, 8}, Point{2, 16}}) {
      const Rat pmax = consts.p_max(pt.t);
      for (const Rat& p : {Rat(pmax / 2), pmax}) {
        ScaledP01 values = p01_values(pt.t, pt.r, p);
        const Rat lower = consts.c0 * p * pow2(pt.t);
        const Rat upper = Rat(4) * p * pow2(pt.t);
        if (values.compare_pstar(lower) < 0) {
          detail = "P* below c0 p 2^t at t=" + std::to_string(pt.t) + ", p=" +
                   verify_detail::rat_str(p);
          return false;
        }
        if (values.compare_pstar(upper) > 0) {
          detail = "P* above 4 p 2^t at t=" + std::to_string(pt.t) + ", p=" +
                   verify_detail::rat_str(p);
          return false;
        }
      }
    }
    detail = "exact at t=1, r=8 and t=2, r=16 for p in {p_max/2, p_max}";
    return true;
  });
}

/// 6. Monte Carlo split-probability estimate agrees with the exact value.
inline CriterionResult verify_mc_consistency(const VerifyOptions& opt) {
  return verify_detail::timed(6, "mc-vs-exact-split", [&](std::string& detail) {
    const Rat p = rat(1, 840);
    const uint64_t samples = opt.quick ? 100000 : 1000000;
    TribeTree tribe = build_xor_tribe(1, 8);
    Rat exact = p_star_value(1, 8, p);
    EstimateReport rep = mc_estimate_depth_ge(tribe.tree, RestrictionLaw(p), 1, samples,
                                              opt.seed, kDepthSearchCap,
                                              OvercapPolicy::Report, opt.workers);
    double gap = std::abs(to_double(rep.phat) - to_double(exact));
    bool ok = gap <= 4 * rep.standard_error && rep.skipped_overcap == 0;
    detail = "phat=" + std::to_string(to_double(rep.phat)) + " exact=" +
             std::to_string(to_double(exact)) + " |diff|=" + std::to_string(gap) +
             " 4se=" + std::to_string(4 * rep.standard_error);
    return ok;
  });
}

/// 7. The depth-d upper bound is never violated empirically on random clipped trees.
inline CriterionResult verify_upper_bound_empirical(const VerifyOptions& opt) {
  return verify_detail::timed(7, "upper-bound-empirical", [&](std::string& detail) {
    const int tree_count = 20;
    const uint64_t samples = opt.quick ? 10000 : 100000;
    std::vector<DecisionTree> trees = random_clipped_trees(opt.seed + 7, tree_count, 3, 12);
    uint64_t run = 0;
    int runs = 0;
    for (const DecisionTree& tree : trees) {
      const int t = clip_report(tree).t_clip;
      for (const Rat& p : {rat(1, 64), rat(1, 32)}) {
        for (int d : {1, 2}) {
          EstimateReport rep =
              mc_estimate_depth_ge(tree, RestrictionLaw(p), d, samples, opt.seed + 100 + run++,
                                   kDepthSearchCap, OvercapPolicy::Report, opt.workers);
          Rat ub = upper_bound_value(p, t, d);
          if (to_double(rep.phat) > to_double(ub) + 4 * rep.standard_error) {
            detail = "violation on tree " + std::to_string(runs / 4) + " (t=" +
                     std::to_string(t) + ") at p=" + verify_detail::rat_str(p) +
                     ", d=" + std::to_string(d);
            return false;
          }
          ++runs;
        }
      }
    }
    detail = std::to_string(runs) + " runs over " + std::to_string(tree_count) +
             " random clipped trees, no violation";
    return true;
  });
}

/// 8. Transfer kernel at kappa = 4 stays <= 1; diagonal resummation is exact.
inline CriterionResult verify_u_kernel(const VerifyOptions& opt) {
  return verify_detail::timed(8, "u-kernel", [&](std::string& detail) {
    for (int t = 1; t <= 20; ++t) {
      for (int k = 0; k < 64; ++k) {
        Rat p = rat(k, 64);
        Rat u = u_kernel(p, t, Rat(4));
        if (u > 1) {
          detail = "U = " + verify_detail::rat_str(u) + " > 1 at t=" + std::to_string(t) +
                   ", p=" + verify_detail::rat_str(p);
          return false;
        }
      }
    }
    for (int i = 0; i < 50; ++i) {
      SampleRng rng(opt.seed + 8, static_cast<uint64_t>(i));
      int t = 1 + static_cast<int>(rng.next() % 6);
      uint64_t den = 2 + rng.next() % 999;
      uint64_t num = rng.next() % den;
      Rat p = Rat(BigInt(num)) / Rat(BigInt(den));
      if (!u_kernel_diagonal_identity(p, t, Rat(4))) {
        detail = "diagonal identity failed at t=" + std::to_string(t) + ", p=" +
                 verify_detail::rat_str(p);
        return false;
      }
    }
    detail = "U <= 1 on the 64-point grid for t <= 20; 50 diagonal identities exact";
    return true;
  });
}

/// 9. Closed-form coefficients match the brute-force transform.
inline CriterionResult verify_fourier_closed_forms(const VerifyOptions&) {
  return verify_detail::timed(9, "fourier-closed-forms", [&](std::string& detail) {
    for (int n : {3, 5, 7, 9, 11}) {
      TribeTree tribe = build_xor_tribe(1, n);
      FourierSpectrum spectrum = fourier_transform(to_truth_table(tribe.tree));
      for (uint64_t mask = 1; mask < (uint64_t(1) << n); ++mask) {
        if (fourier_t1_closed(n, mask) != spectrum.at(mask)) {
          detail = "signed mismatch at n=" + std::to_string(n) + ", S=" + std::to_string(mask);
          return false;
        }
      }
    }
    TribeTree tribe = build_xor_tribe(2, 3);
    FourierSpectrum spectrum = fourier_transform(to_truth_table(tribe.tree));
    uint64_t on_path = 0, off_path = 0;
    for (uint64_t mask = 1; mask < (uint64_t(1) << tribe.tree.var_count); ++mask) {
      ClosedCoeff cc = fourier_general_closed(tribe, mask);
      if (cc.zero) {
        ++off_path;
        if (spectrum.at(mask) != 0) {
          detail = "off-path S=" + std::to_string(mask) + " has nonzero coefficient";
          return false;
        }
      } else {
        ++on_path;
        if (abs(spectrum.at(mask)) != cc.magnitude) {
          detail = "magnitude mismatch at S=" + std::to_string(mask);
          return false;
        }
      }
    }
    detail = "t=1 signed match for n in {3,5,7,9,11}; t=2 r=3 magnitudes on " +
             std::to_string(on_path) + " on-path sets, zeros on " + std::to_string(off_path);
    return true;
  });
}

/// 10. Structural facts: tribe invariants, influence decay, bias, parity correlation.
inline CriterionResult verify_tribe_structure(const VerifyOptions&) {
  return verify_detail::timed(10, "tribe-structure", [&](std::string& detail) {
    for (int t = 1; t <= 4; ++t) {
      for (int r = 0; r <= 4; ++r) {
        TribeTree tribe = build_xor_tribe(t, r);
        if (auto v = verify_tribe(tribe)) {
          detail = "t=" + std::to_string(t) + ", r=" + std::to_string(r) + ": " + *v;
          return false;
        }
      }
    }
    // influence of a variable at distance d from the root is at most 2^-d
    auto influence_ok = [&](const TribeTree& tribe, std::string& why) {
      TruthTable tt = to_truth_table(tribe.tree);
      for (int v = 0; v < tribe.tree.var_count; ++v) {
        if (influence(tt, v) > pow2(-tribe.root_dist[v])) {
          why = "influence of x" + std::to_string(v) + " above 2^-d";
          return false;
        }
      }
      return true;
    };
    for (int r = 1; r <= 10; ++r) {
      TribeTree tribe = build_xor_tribe(1, r);
      if (!influence_ok(tribe, detail)) return false;
    }
    {
      TribeTree tribe = build_xor_tribe(2, 3);
      if (!influence_ok(tribe, detail)) return false;
    }
    // closed-form bias equals truth-table bias wherever the table fits
    for (int t = 1; t <= 16; ++t) {
      for (int r = 1; r <= 16; ++r) {
        if (num_vars(t, r) > 16) break;
        TribeTree tribe = build_xor_tribe(t, r);
        if (bias(to_truth_table(tribe.tree)) != bias_closed(t, r)) {
          detail = "bias mismatch at t=" + std::to_string(t) + ", r=" + std::to_string(r);
          return false;
        }
      }
    }
    // parity correlation for t = 2: exactly 1/2 once a variable off the
    // evaluation path exists (r >= 2); the one-level tribe is OR_2, whose
    // correlation is exactly 1/2 + 1/4
    for (int r = 1; r <= 3; ++r) {
      TribeTree tribe = build_xor_tribe(2, r);
      TruthTable tt = to_truth_table(tribe.tree);
      Rat expected = r >= 2 ? rat(1, 2) : Rat(rat(1, 2) + rat(1, 4));
      if (correlation(tt, parity_table(tt.num_vars())) != expected) {
        detail = "parity correlation differs from its exact value at r=" + std::to_string(r);
        return false;
      }
    }
    detail = "tribe invariants (t <= 4, r <= 4), influence decay, bias closed form, parity correlation";
    return true;
  });
}

/// 11. The lower-bound DP certifies (c0 p 2^t)^2 somewhere below r = 64 and
/// Monte Carlo respects the certified value.
inline CriterionResult verify_lower_bound_dp(const VerifyOptions& opt) {
  return verify_detail::timed(11, "lower-bound-dp", [&](std::string& detail) {
    const Rat p = rat(1, 840);
    // the event carries only ~1e-5 mass; fewer samples cannot resolve it, so
    // quick mode keeps the full count (the run stays fast regardless)
    const uint64_t samples = 1000000;
    LowerBoundTable tab = gamma_lower_table(1, p, 2, 64);
    const Rat target = lower_bound_value(p, 1, 2);
    int r_first = -1, r_mc = -1;
    for (int r = 1; r <= 64; ++r) {
      if (tab.L[2][r] >= target) {
        if (r_first < 0) r_first = r;
        r_mc = r;  // largest certified level count gives the best-fed estimate
      }
    }
    if (r_first < 0) {
      detail = "no r <= 64 certifies the squared lower bound";
      return false;
    }
    TribeTree tribe = build_xor_tribe(1, r_mc);
    EstimateReport rep = mc_estimate_depth_ge(tribe.tree, RestrictionLaw(p), 2, samples,
                                              opt.seed + 11, kDepthSearchCap,
                                              OvercapPolicy::Report, opt.workers);
    double lb = to_double(tab.L[2][r_mc]);
    bool ok = to_double(rep.phat) >= lb - 4 * rep.standard_error;
    detail = "first certified r=" + std::to_string(r_first) + "; at r=" + std::to_string(r_mc) +
             " L=" + std::to_string(lb) + " successes=" + std::to_string(rep.successes) +
             "/1e6 phat=" + std::to_string(to_double(rep.phat)) +
             " 4se=" + std::to_string(4 * rep.standard_error);
    return ok;
  });
}

inline std::vector<CriterionResult> run_acceptance(const VerifyOptions& opt = {}) {
  return {
      verify_recurrence_oracle(opt),    verify_constant_coefficients(opt),
      verify_p_coefficient_bounds(opt), verify_g2_tail(opt),
      verify_depth1_sandwich(opt),      verify_mc_consistency(opt),
      verify_upper_bound_empirical(opt), verify_u_kernel(opt),
      verify_fourier_closed_forms(opt), verify_tribe_structure(opt),
      verify_lower_bound_dp(opt),
  };
}

}  // namespace treetribes
