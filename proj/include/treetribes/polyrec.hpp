#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "treetribes/boolfn.hpp"
#include "treetribes/poly.hpp"
#include "treetribes/rational.hpp"

namespace treetribes {

// ---------------------------------------------------------------------------
// P0(r), P1(r): probabilities that the restricted tribe is identically 0 or 1,
// as exact polynomials in p. The step from r-1 to r expands the geometric sum
// directly, so no rational-function division is ever formed. Degrees grow with
// the variable count (about t^r), so the value and coefficient routes below
// are the tools of choice for large parameters.

/// Degree of P0(r) as a polynomial in p (about the variable count of the tribe).
inline long p0_p1_degree(int t, int r) {
  long deg = 0;
  for (int i = 1; i <= r; ++i) {
    deg = static_cast<long>(t) * (deg + 1);
    if (deg > (1L << 40)) return deg;  // saturate well past any usable size
  }
  return deg;
}

inline std::pair<RationalPoly, RationalPoly> p0_p1(int t, int r) {
  if (t < 1 || r < 1) throw std::invalid_argument("p0_p1: need t >= 1, r >= 1");
  if (p0_p1_degree(t, r) > 4096)
    throw resource_limit_error("p0_p1: polynomial degree explodes for t=" + std::to_string(t) +
                               ", r=" + std::to_string(r) +
                               "; use the pointwise or truncated routes");
  const RationalPoly q = RationalPoly::half_one_minus_p();
  const RationalPoly pvar = RationalPoly::variable();
  const RationalPoly one = RationalPoly::constant(Rat(1));

  RationalPoly p0 = q.pow(static_cast<unsigned long>(t));
  RationalPoly p1 = one - (one - q).pow(static_cast<unsigned long>(t));
  for (int level = 2; level <= r; ++level) {
    const RationalPoly u = p1, v = p0;
    const RationalPoly su = q + pvar * u;
    const RationalPoly sv = q + pvar * v;
    RationalPoly new0, new1;
    RationalPoly su_pow = one, sv_pow = one;
    for (int k = 0; k < t; ++k) {
      new0 += q * u * su_pow;
      new1 += q * v * sv_pow;
      su_pow = su_pow * su;
      sv_pow = sv_pow * sv;
    }
    new0 += su_pow;  // su_pow now holds su^t
    p0 = new0;
    p1 = new1;
  }
  return {p0, p1};
}

inline RationalPoly p_star(int t, int r) {
  auto [p0, p1] = p0_p1(t, r);
  return RationalPoly::constant(Rat(1)) - p0 - p1;
}

// ---------------------------------------------------------------------------
// pointwise evaluation in scale-tracked integer form: every value is held as
// v / B^k with B = 2 * den(p), so the whole recurrence runs on integers and
// only the final conversion normalizes a fraction.

struct ScaledP01 {
  BigInt p0, p1;
  BigInt base;
  long k = 0;

  BigInt scale() const { return int_pow(base, static_cast<unsigned long>(k)); }
  Rat p0_rat() const { return Rat(p0) / Rat(scale()); }
  Rat p1_rat() const { return Rat(p1) / Rat(scale()); }
  Rat pstar_rat() const { return Rat(scale() - p0 - p1) / Rat(scale()); }

  /// Sign of (pstar - rhs) without normalizing the big fraction.
  int compare_pstar(const Rat& rhs) const {
    BigInt sc = scale();
    BigInt lhs = (sc - p0 - p1) * denominator(rhs);
    BigInt r = numerator(rhs) * sc;
    return lhs < r ? -1 : (lhs == r ? 0 : 1);
  }
};

inline ScaledP01 p01_values(int t, int r, const Rat& p) {
  if (t < 1 || r < 1) throw std::invalid_argument("p01_values: need t >= 1, r >= 1");
  if (p < 0 || p > 1) throw std::invalid_argument("p01_values: p must be in [0,1]");
  const BigInt a = numerator(p), d = denominator(p);
  const BigInt base = 2 * d;
  {
    // final scale grows like t^r; refuse sizes that cannot complete
    long double bits = static_cast<long double>(t);
    for (int i = 2; i <= r; ++i) bits = static_cast<long double>(t) * (bits + 1);
    bits *= std::log2l(std::max<long double>(base.convert_to<long double>(), 2));
    if (bits > 8e6L)
      throw resource_limit_error("p01_values: scale explodes for t=" + std::to_string(t) +
                                 ", r=" + std::to_string(r));
  }
  const BigInt qn = d - a;   // q = qn / base
  const BigInt cn = d + a;   // 1 - q = cn / base

  ScaledP01 s;
  s.base = base;
  s.p0 = int_pow(qn, static_cast<unsigned long>(t));
  s.p1 = int_pow(base, static_cast<unsigned long>(t)) -
         int_pow(cn, static_cast<unsigned long>(t));
  s.k = t;
  for (int level = 2; level <= r; ++level) {
    const long ks = s.k + 1;
    const BigInt bk = int_pow(base, static_cast<unsigned long>(s.k));
    const BigInt su = qn * bk + 2 * a * s.p1;  // (q + p*U) at scale ks
    const BigInt sv = qn * bk + 2 * a * s.p0;
    const BigInt c = int_pow(base, static_cast<unsigned long>(ks));

    // sum over j < t of S^j * C^{t-1-j}, all terms at scale (t-1)*ks
    auto geometric = [&](const BigInt& sx) {
      BigInt h = 0;
      BigInt sx_pow = 1;
      std::vector<BigInt> pows(static_cast<size_t>(t));
      for (int j = 0; j < t; ++j) {
        pows[j] = sx_pow;
        if (j + 1 < t) sx_pow *= sx;
      }
      for (int j = 0; j < t; ++j) h = h * c + pows[j];
      return h;
    };
    const BigInt hu = geometric(su);
    const BigInt hv = geometric(sv);
    BigInt new0 = qn * s.p1 * hu + int_pow(su, static_cast<unsigned long>(t));
    BigInt new1 = qn * s.p0 * hv;
    s.p0 = new0;
    s.p1 = new1;
    s.k = static_cast<long>(t) * ks;
  }
  return s;
}

inline Rat p_star_value(int t, int r, const Rat& p) { return p01_values(t, r, p).pstar_rat(); }

// ---------------------------------------------------------------------------
// degree-truncated recurrence: products drop terms above cap, which leaves
// every retained coefficient exact.

namespace detail {

struct TruncPoly {
  std::vector<Rat> c;
  size_t cap = 0;

  static TruncPoly constant(const Rat& v, size_t cap) {
    TruncPoly t;
    t.cap = cap;
    t.c = {v};
    return t;
  }
  Rat coeff(size_t i) const { return i < c.size() ? c[i] : Rat(0); }

  TruncPoly& operator+=(const TruncPoly& o) {
    if (o.c.size() > c.size()) c.resize(o.c.size(), Rat(0));
    for (size_t i = 0; i < o.c.size(); ++i) c[i] += o.c[i];
    return *this;
  }
  friend TruncPoly operator*(const TruncPoly& a, const TruncPoly& b) {
    TruncPoly out;
    out.cap = a.cap;
    if (a.c.empty() || b.c.empty()) return out;
    out.c.assign(std::min(a.c.size() + b.c.size() - 1, a.cap + 1), Rat(0));
    for (size_t i = 0; i < a.c.size() && i <= a.cap; ++i) {
      if (a.c[i] == 0) continue;
      const size_t jmax = std::min(b.c.size(), a.cap + 1 - i);
      for (size_t j = 0; j < jmax; ++j) out.c[i + j] += a.c[i] * b.c[j];
    }
    return out;
  }
};

}  // namespace detail

/// P0(r), P1(r) with coefficients exact up to degree `cap` and everything
/// above dropped.
inline std::pair<RationalPoly, RationalPoly> p0_p1_truncated(int t, int r, size_t cap) {
  if (t < 1 || r < 1) throw std::invalid_argument("p0_p1_truncated: need t >= 1, r >= 1");
  using detail::TruncPoly;
  TruncPoly q = TruncPoly::constant(rat(1, 2), cap);
  if (cap >= 1) q.c.push_back(rat(-1, 2));
  TruncPoly pvar = TruncPoly::constant(Rat(0), cap);
  if (cap >= 1) pvar.c.push_back(Rat(1));
  TruncPoly one = TruncPoly::constant(Rat(1), cap);
  TruncPoly minus_one = TruncPoly::constant(Rat(-1), cap);

  auto power = [](TruncPoly base, int e) {
    TruncPoly result = TruncPoly::constant(Rat(1), base.cap);
    while (e) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  };

  TruncPoly p0 = power(q, t);
  TruncPoly one_minus_q = one;
  one_minus_q += minus_one * q;
  TruncPoly p1 = one;
  p1 += minus_one * power(one_minus_q, t);

  for (int level = 2; level <= r; ++level) {
    TruncPoly u = p1, v = p0;
    TruncPoly su = q, sv = q;
    su += pvar * u;
    sv += pvar * v;
    TruncPoly new0 = TruncPoly::constant(Rat(0), cap);
    TruncPoly new1 = TruncPoly::constant(Rat(0), cap);
    TruncPoly su_pow = one, sv_pow = one;
    for (int k = 0; k < t; ++k) {
      new0 += q * u * su_pow;
      new1 += q * v * sv_pow;
      su_pow = su_pow * su;
      sv_pow = sv_pow * sv;
    }
    new0 += su_pow;
    p0 = new0;
    p1 = new1;
  }
  auto to_poly = [](const detail::TruncPoly& tp) { return RationalPoly(tp.c); };
  return {to_poly(p0), to_poly(p1)};
}

// ---------------------------------------------------------------------------
// constant coefficients, by recurrence and by closed form

struct ConstCoeffs {
  Rat p0, p1;
};

inline ConstCoeffs const_coeffs_recurrence(int t, int r) {
  if (t < 1 || r < 1) throw std::invalid_argument("const_coeffs: need t >= 1, r >= 1");
  const Rat alpha = pow2(-t);
  const Rat beta = Rat(1) - alpha;
  Rat u0 = alpha, u1 = Rat(1) - alpha;
  for (int i = 2; i <= r; ++i) {
    Rat n0 = beta * u1 + alpha;
    Rat n1 = beta * u0;
    u0 = n0;
    u1 = n1;
  }
  return {u0, u1};
}

inline ConstCoeffs const_coeffs_closed(int t, int r) {
  if (t < 1 || r < 1) throw std::invalid_argument("const_coeffs: need t >= 1, r >= 1");
  const Rat beta = Rat(1) - pow2(-t);
  const Rat bpow = rat_pow(beta, static_cast<unsigned long>(r) + 1);
  const Rat denom = Rat(1) + beta;
  if (r % 2 == 1) return {(Rat(1) - bpow) / denom, (beta + bpow) / denom};
  return {(Rat(1) + bpow) / denom, (beta - bpow) / denom};
}

/// Both routes, with their agreement asserted.
inline ConstCoeffs const_coeffs(int t, int r) {
  ConstCoeffs rec = const_coeffs_recurrence(t, r);
  ConstCoeffs closed = const_coeffs_closed(t, r);
  if (rec.p0 != closed.p0 || rec.p1 != closed.p1)
    throw std::logic_error("const_coeffs: recurrence and closed form disagree at t=" +
                           std::to_string(t) + ", r=" + std::to_string(r));
  return rec;
}

// ---------------------------------------------------------------------------
// coefficients of p

struct PCoeffs {
  Rat p0, p1;
};

inline PCoeffs p_coeffs_recurrence(int t, int r) {
  if (t < 1 || r < 1) throw std::invalid_argument("p_coeffs: need t >= 1, r >= 1");
  const Rat alpha = pow2(-t);
  const Rat beta = Rat(1) - alpha;
  const Rat ct = Rat(BigInt(t)) * alpha;  // t / 2^t
  Rat u0 = alpha, u1 = Rat(1) - alpha;    // constant coefficients at current r
  Rat c0 = -ct, c1 = -ct;                 // p-coefficients at current r
  const Rat k1 = alpha * Rat(BigInt(t + 2)) - 2;
  const Rat k2 = 2 * (Rat(1) - alpha * Rat(BigInt(t + 1)));
  for (int i = 2; i <= r; ++i) {
    Rat n1 = beta * c0 + k1 * u0 + k2 * u0 * u0;
    Rat n0 = beta * c1 + k1 * u1 + k2 * u1 * u1 - ct + 2 * ct * u1;
    c0 = n0;
    c1 = n1;
    Rat m0 = beta * u1 + alpha;
    Rat m1 = beta * u0;
    u0 = m0;
    u1 = m1;
  }
  return {c0, c1};
}

/*! \brief [p]-coefficients of P0(r), P1(r).
 *
 * Cross-checked against the full polynomial route wherever that polynomial is
 * genuinely cheap (degree a few hundred); beyond that the recurrence stands
 * alone, with the enumeration oracle covering the coefficient routes on the
 * small grid.
 */
inline PCoeffs p_coeffs(int t, int r) {
  PCoeffs rec = p_coeffs_recurrence(t, r);
  if (p0_p1_degree(t, r) <= 512) {
    auto [q0, q1] = p0_p1(t, r);
    if (rec.p0 != q0.coeff(1) || rec.p1 != q1.coeff(1))
      throw std::logic_error("p_coeffs: recurrence and polynomial route disagree at t=" +
                             std::to_string(t) + ", r=" + std::to_string(r));
  }
  return rec;
}

// ---------------------------------------------------------------------------
// stock identities used as oracles throughout

struct IdentityCheck {
  std::string name;
  bool pass;
};

inline std::vector<IdentityCheck> identity_suite(int n_max = 30, int grid = 16) {
  std::vector<IdentityCheck> out;
  auto record = [&](const std::string& name, bool pass) { out.push_back({name, pass}); };

  // geometric sum: (1-p) * sum p^i == 1 - p^{n+1}, and the p = 1 limit is n+1
  {
    bool ok = true;
    for (int n = 1; n <= n_max && ok; ++n) {
      std::vector<Rat> ones(static_cast<size_t>(n) + 1, Rat(1));
      RationalPoly sum{std::vector<Rat>(ones)};
      RationalPoly lhs = RationalPoly({Rat(1), Rat(-1)}) * sum;
      std::vector<Rat> rhs_c(static_cast<size_t>(n) + 2, Rat(0));
      rhs_c[0] = 1;
      rhs_c[static_cast<size_t>(n) + 1] = -1;
      ok = lhs == RationalPoly(std::move(rhs_c)) && sum.eval(Rat(1)) == Rat(BigInt(n + 1));
    }
    record("geometric_sum", ok);
  }
  // sum k/2^k == 2 - (n+2)/2^n <= 2
  {
    bool ok = true;
    for (int n = 1; n <= n_max && ok; ++n) {
      Rat s(0);
      for (int k = 1; k <= n; ++k) s += Rat(BigInt(k)) * pow2(-k);
      Rat closed = Rat(2) - Rat(BigInt(n + 2)) * pow2(-n);
      ok = s == closed && s <= Rat(2);
    }
    record("sum_k_over_2k", ok);
  }
  // sum C(k,2)/2^k == 2 - (n^2+3n+4)/2^{n+1} <= 2
  {
    bool ok = true;
    for (int n = 2; n <= n_max && ok; ++n) {
      Rat s(0);
      for (int k = 2; k <= n; ++k) s += Rat(binomial(k, 2)) * pow2(-k);
      Rat closed = Rat(2) - Rat(BigInt(n) * n + 3 * n + 4) * pow2(-(n + 1));
      ok = s == closed && s <= Rat(2);
    }
    record("sum_choose2_over_2k", ok);
  }
  // sum C(n,i) q^{n-i} p^i (i+1) == p n (q+p)^{n-1} + (q+p)^n, as polynomials
  // with q = (1-p)/2 and at independent rational (p, q) pairs
  {
    bool ok = true;
    const RationalPoly q = RationalPoly::half_one_minus_p();
    const RationalPoly pv = RationalPoly::variable();
    for (int n = 1; n <= n_max && ok; ++n) {
      RationalPoly lhs;
      for (int i = 0; i <= n; ++i)
        lhs += Rat(binomial(n, i)) * q.pow(n - i) * pv.pow(i) * Rat(BigInt(i + 1));
      RationalPoly qp = q + pv;
      RationalPoly rhs = pv * Rat(BigInt(n)) * qp.pow(n - 1) + qp.pow(n);
      ok = lhs == rhs;
    }
    const std::pair<Rat, Rat> points[] = {
        {rat(1, 3), rat(1, 3)}, {rat(1, 5), rat(2, 7)}, {rat(3, 4), rat(1, 9)}};
    for (auto& [pp, qq] : points) {
      for (int n = 1; n <= 8 && ok; ++n) {
        Rat lhs(0);
        for (int i = 0; i <= n; ++i)
          lhs += Rat(binomial(n, i)) * rat_pow(qq, n - i) * rat_pow(pp, i) * Rat(BigInt(i + 1));
        Rat rhs = pp * Rat(BigInt(n)) * rat_pow(qq + pp, n - 1) + rat_pow(qq + pp, n);
        ok = lhs == rhs;
      }
    }
    record("weighted_binomial_sum", ok);
  }
  // 1 - (1-p)^t <= t p  on a grid of [0,1]
  {
    bool ok = true;
    for (int t = 1; t <= n_max && ok; ++t) {
      for (int g = 0; g <= grid && ok; ++g) {
        Rat p = Rat(BigInt(g)) / Rat(BigInt(grid));
        ok = Rat(1) - rat_pow(Rat(1) - p, t) <= Rat(BigInt(t)) * p;
      }
    }
    record("clipped_geometric_upper", ok);
  }
  // (1-p)^t - 1 + t p <= C(t,2) p^2  on a grid of [0,1]
  {
    bool ok = true;
    for (int t = 1; t <= n_max && ok; ++t) {
      for (int g = 0; g <= grid && ok; ++g) {
        Rat p = Rat(BigInt(g)) / Rat(BigInt(grid));
        ok = rat_pow(Rat(1) - p, t) - 1 + Rat(BigInt(t)) * p <= Rat(binomial(t, 2)) * p * p;
      }
    }
    record("second_order_remainder", ok);
  }
  return out;
}

}  // namespace treetribes
