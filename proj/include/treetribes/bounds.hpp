#pragma once

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "treetribes/polyrec.hpp"
#include "treetribes/restrict.hpp"
#include "treetribes/tribes.hpp"

namespace treetribes {

struct BoundConstants {
  Rat kappa{4};
  Rat c0 = rat(1, 42);
  Rat c1 = rat(1, 6);
  Rat c_p = rat(1, 420);
  // depth-ceiling constant for the asymptotic diagnostic; an engineering
  // choice, not a pinned value
  Rat c_d = rat(1, 8);

  Rat mu(int t) const { return kappa * pow2(t); }
  Rat p_max(int t) const { return c_p * pow2(-t); }
};

/// (4 p 2^t)^d, exact.
inline Rat upper_bound_value(const Rat& p, int t, int d) {
  if (t < 1 || d < 0) throw std::invalid_argument("upper_bound_value: need t >= 1, d >= 0");
  return rat_pow(Rat(4) * p * pow2(t), static_cast<unsigned long>(d));
}

/// (c0 p 2^t)^d, exact.
inline Rat lower_bound_value(const Rat& p, int t, int d,
                             const BoundConstants& consts = {}) {
  if (t < 1 || d < 0) throw std::invalid_argument("lower_bound_value: need t >= 1, d >= 0");
  return rat_pow(consts.c0 * p * pow2(t), static_cast<unsigned long>(d));
}

/// Largest r with num_vars(t, r) <= n.
inline int levels_from_vars(int t, const BigInt& n) {
  int r = 0;
  while (num_vars(t, r + 1) <= n) ++r;
  return r;
}

/// Proven-domain predicate for the lower bound: p within the rate ceiling and
/// enough levels for the induction budget (4 * 2^t per depth unit).
inline bool lower_bound_in_domain(const Rat& p, int t, int d, int r_levels,
                                  const BoundConstants& consts = {}) {
  if (p < 0 || p > consts.p_max(t)) return false;
  if (d == 0) return true;
  return BigInt(r_levels) >= BigInt(4) * (BigInt(1) << t) * d;
}

/// Asymptotic depth-ceiling diagnostic c_d log n / (2^t log t); meaningless at
/// t = 1 where the level form above is the one that applies.
inline std::optional<double> asymptotic_depth_ceiling(const BigInt& n, int t,
                                                      const BoundConstants& consts = {}) {
  if (t < 2 || n <= 1) return std::nullopt;
  double logn = 0;
  BigInt m = n;
  while (m > 1) {
    m >>= 1;
    logn += 1.0;
  }
  return to_double(consts.c_d) * logn / (std::pow(2.0, t) * std::log2(static_cast<double>(t)));
}

// ---------------------------------------------------------------------------
// the one-step transfer kernel of the recursive upper bound

/*! \brief U(p) = (sum_{l<=t} r^l - sum_{l<=t} q^l) (1-q)/(1-2q+q^{t+1}) with
 * r = q + 1/(kappa 2^t), exact. The induction closes exactly when U <= 1.
 */
inline Rat u_kernel(const Rat& p, int t, const Rat& kappa = Rat(4)) {
  if (t < 1) throw std::invalid_argument("u_kernel: need t >= 1");
  if (p < 0 || p >= 1) throw std::domain_error("u_kernel: p must be in [0,1)");
  const Rat q = (Rat(1) - p) / 2;
  const Rat mu = kappa * pow2(t);
  const Rat r = q + Rat(1) / mu;
  Rat sum_r(0), sum_q(0), rp(1), qp(1);
  for (int l = 1; l <= t; ++l) {
    rp *= r;
    qp *= q;
    sum_r += rp;
    sum_q += qp;
  }
  const Rat denom = Rat(1) - 2 * q + rat_pow(q, static_cast<unsigned long>(t) + 1);
  if (denom == 0) throw std::domain_error("u_kernel: degenerate denominator");
  return (sum_r - sum_q) * (Rat(1) - q) / denom;
}

/// The diagonal resummation behind the kernel: the double sum over j, i of
/// mu^-j C(j+i, i) q^i equals sum_{l<=t} (r^l - q^l). Exact equality check.
inline bool u_kernel_diagonal_identity(const Rat& p, int t, const Rat& kappa = Rat(4)) {
  const Rat q = (Rat(1) - p) / 2;
  const Rat mu = kappa * pow2(t);
  const Rat r = q + Rat(1) / mu;
  Rat lhs(0);
  for (int j = 1; j <= t; ++j)
    for (int i = 0; i + j <= t; ++i)
      lhs += rat_pow(Rat(1) / mu, j) * Rat(binomial(j + i, i)) * rat_pow(q, i);
  Rat rhs(0), rp(1), qp(1);
  for (int l = 1; l <= t; ++l) {
    rp *= r;
    qp *= q;
    rhs += rp - qp;
  }
  return lhs == rhs;
}

// ---------------------------------------------------------------------------
// lower-bound machinery

/// [p]P0(r) + [p]P1(r); the induction needs it <= -2^t/6 at r = 4 * 2^t.
inline Rat g_function(int t, int r) {
  PCoeffs c = p_coeffs(t, r);
  return c.p0 + c.p1;
}

struct G2Result {
  Rat bound;      // certified upper estimate of G2(P0(r) + P1(r)) on [0, p_max]
  Rat limit;      // 30 * 2^{2t}
  Rat high_tail;  // certified mass of coefficients above the truncation degree
  bool pass = false;
};

namespace detail {

/// Certified bound on sum_{j > cap} |c_j| p_max^{j-2} for Q = P0(r) + P1(r),
/// from the counting bound |c_j| <= 2 C(n, j) 2^j and a geometric majorant.
inline Rat g2_high_tail_bound(const BigInt& n_vars, size_t cap, const Rat& p_max) {
  if (n_vars <= BigInt(cap)) return Rat(0);
  const unsigned long n = n_vars.convert_to<unsigned long>();
  const unsigned long j0 = cap + 1;
  const Rat ratio = 2 * p_max * Rat(BigInt(n - j0)) / Rat(BigInt(j0 + 1));
  if (ratio >= 1)
    throw std::invalid_argument("g2_high_tail_bound: truncation degree too small to certify");
  Rat nck(binomial(n, j0));
  Rat first = 2 * nck * pow2(static_cast<long>(j0)) * rat_pow(p_max, j0 - 2);
  return first / (Rat(1) - ratio);
}

}  // namespace detail

/*! \brief Certified check that G2(P0(r) + P1(r)) <= 30 * 2^{2t} over
 * [0, c_p 2^-t].
 *
 * Coefficients up to trunc_degree come out exact from the truncated
 * recurrence and go through the grid maximizer; the discarded high-degree
 * mass is bounded analytically, so `bound` always dominates the true value.
 */
inline G2Result g2_check(int t, int r, const BoundConstants& consts = {},
                         int grid = 256, size_t trunc_degree = 64) {
  const Rat p_max = consts.p_max(t);
  auto [q0, q1] = p0_p1_truncated(t, r, trunc_degree);
  RationalPoly low = q0 + q1;
  G2Result res;
  res.high_tail = detail::g2_high_tail_bound(num_vars(t, r), trunc_degree, p_max);
  res.bound = gmax(low, 2, p_max, grid) + res.high_tail;
  res.limit = Rat(30) * pow2(2 * t);
  res.pass = res.bound <= res.limit;
  return res;
}

struct D1Result {
  bool in_domain = false;
  bool pass = false;
  Rat threshold;  // c0 p 2^t
};

/// Exact check that Pr[depth >= 1] = P*(r)(p) >= c0 p 2^t.
inline D1Result d1_check(int t, int r, const Rat& p, const BoundConstants& consts = {}) {
  D1Result res;
  res.in_domain = p >= 0 && p <= consts.p_max(t) && BigInt(r) >= BigInt(4) * (BigInt(1) << t);
  res.threshold = consts.c0 * p * pow2(t);
  ScaledP01 values = p01_values(t, r, p);
  res.pass = values.compare_pstar(res.threshold) >= 0;
  return res;
}

// ---------------------------------------------------------------------------
// certified lower-bound table for depth >= d

/*! \brief DP of certified lower bounds L[d][r] on Pr[depth >= d] at a fixed
 * rate p.
 *
 * Base row: L[1][r] is the exact split probability P*(r)(p). The transfer to
 * depth d plugs mu = 1 - L[d-1][r-1] into the one-step recurrence; it is
 * monotone nondecreasing in every plugged-in lower bound, which keeps each
 * entry a sound lower bound.
 */
struct LowerBoundTable {
  int t = 1;
  Rat p;
  std::vector<std::vector<Rat>> L;  // L[d][r], d in 1..d_max, r in 0..r_max

  int d_max() const { return static_cast<int>(L.size()) - 1; }
  int r_max() const { return L.empty() ? 0 : static_cast<int>(L[1].size()) - 1; }
};

inline LowerBoundTable gamma_lower_table(int t, const Rat& p, int d_max, int r_max) {
  if (t < 1 || d_max < 1 || r_max < 0)
    throw std::invalid_argument("gamma_lower_table: need t >= 1, d_max >= 1, r_max >= 0");
  LowerBoundTable tab;
  tab.t = t;
  tab.p = p;
  tab.L.assign(static_cast<size_t>(d_max) + 1,
               std::vector<Rat>(static_cast<size_t>(r_max) + 1, Rat(0)));
  for (int r = 1; r <= r_max; ++r) tab.L[1][r] = p_star_value(t, r, p);

  const Rat q = (Rat(1) - p) / 2;
  Rat theta(0);
  for (int k = 0; k < t; ++k) theta += rat_pow(q, static_cast<unsigned long>(k) + 1);

  for (int d = 2; d <= d_max; ++d) {
    for (int r = 1; r <= r_max; ++r) {
      const Rat mu = Rat(1) - tab.L[d - 1][r - 1];
      Rat a(0);
      for (int k = 1; k <= t - 1; ++k)
        for (int i = 1; i <= k; ++i)
          a += q * Rat(binomial(k, i)) * rat_pow(q, static_cast<unsigned long>(k - i)) *
               rat_pow(p, static_cast<unsigned long>(i)) *
               (Rat(1) - rat_pow(mu, static_cast<unsigned long>(i) + 1));
      Rat b(0);
      for (int i = 0; i <= t; ++i)
        b += Rat(binomial(t, i)) * rat_pow(q, static_cast<unsigned long>(t - i)) *
             rat_pow(p, static_cast<unsigned long>(i)) *
             (Rat(1) - rat_pow(mu, static_cast<unsigned long>(i)));
      tab.L[d][r] = a + b + theta * tab.L[d][r - 1];
    }
  }
  return tab;
}

// ---------------------------------------------------------------------------
// empirical cross-checks

struct EmpiricalBound {
  EstimateReport est;
  Rat upper;
  bool ub_ok = false;
  std::optional<Rat> lower;
  bool in_domain = false;
  bool lb_ok = true;
};

/*! \brief Monte Carlo estimate of Pr[depth >= d] checked against the bounds:
 * phat <= UB + 4 stderr always, and phat >= LB - 4 stderr when the input is a
 * tribe inside the proven lower-bound domain.
 */
inline EmpiricalBound empirical_bound_check(const DecisionTree& tree, int t_clip, const Rat& p,
                                            int d, uint64_t samples, uint64_t seed,
                                            std::optional<int> tribe_levels = std::nullopt,
                                            const BoundConstants& consts = {},
                                            int live_cap = kDepthSearchCap, int workers = 1) {
  EmpiricalBound out;
  RestrictionLaw law(p);
  out.est = mc_estimate_depth_ge(tree, law, d, samples, seed, live_cap,
                                 OvercapPolicy::Report, workers);
  out.upper = upper_bound_value(p, t_clip, d);
  const double phat = to_double(out.est.phat);
  out.ub_ok = phat <= to_double(out.upper) + 4 * out.est.standard_error;
  if (tribe_levels) {
    out.in_domain = lower_bound_in_domain(p, t_clip, d, *tribe_levels, consts);
    out.lower = lower_bound_value(p, t_clip, d, consts);
    if (out.in_domain)
      out.lb_ok = phat >= to_double(*out.lower) - 4 * out.est.standard_error;
  }
  return out;
}

}  // namespace treetribes
