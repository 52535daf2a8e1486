#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "treetribes/rational.hpp"

namespace treetribes {

/*! \brief Univariate polynomial in the restriction rate p with exact rational
 * coefficients.
 *
 * Coefficient i holds the i-th power extraction of the polynomial; the
 * trailing coefficient is kept nonzero unless the polynomial is zero.
 */
class RationalPoly {
 public:
  RationalPoly() = default;
  explicit RationalPoly(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static RationalPoly constant(const Rat& v) { return RationalPoly({v}); }
  static RationalPoly variable() { return RationalPoly({Rat(0), Rat(1)}); }
  /// (1 - p) / 2, the weight of each fixed value under the restriction law.
  static RationalPoly half_one_minus_p() { return RationalPoly({rat(1, 2), rat(-1, 2)}); }

  const std::vector<Rat>& coefficients() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  long degree() const { return static_cast<long>(c_.size()) - 1; }

  /// i-th coefficient extraction; zero beyond the degree.
  Rat coeff(size_t i) const { return i < c_.size() ? c_[i] : Rat(0); }

  /// Tail shift: sum over j >= i of c_j p^{j-i}.
  RationalPoly tail(size_t i) const {
    if (i >= c_.size()) return {};
    return RationalPoly(std::vector<Rat>(c_.begin() + static_cast<long>(i), c_.end()));
  }

  Rat eval(const Rat& p) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * p + *it;
    return acc;
  }

  RationalPoly& operator+=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
    trim();
    return *this;
  }
  RationalPoly& operator-=(const RationalPoly& o) {
    if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), Rat(0));
    for (size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
    trim();
    return *this;
  }
  friend RationalPoly operator+(RationalPoly a, const RationalPoly& b) { return a += b; }
  friend RationalPoly operator-(RationalPoly a, const RationalPoly& b) { return a -= b; }
  friend RationalPoly operator-(const RationalPoly& a) {
    std::vector<Rat> c = a.c_;
    for (auto& x : c) x = -x;
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator*(const RationalPoly& a, const RationalPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (size_t i = 0; i < a.c_.size(); ++i)
      for (size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator*(const RationalPoly& a, const Rat& s) {
    std::vector<Rat> c = a.c_;
    for (auto& x : c) x *= s;
    return RationalPoly(std::move(c));
  }
  friend RationalPoly operator*(const Rat& s, const RationalPoly& a) { return a * s; }

  RationalPoly pow(unsigned long e) const {
    RationalPoly result = constant(Rat(1));
    RationalPoly base = *this;
    while (e) {
      if (e & 1) result = result * base;
      base = base * base;
      e >>= 1;
    }
    return result;
  }

  bool operator==(const RationalPoly& o) const { return c_ == o.c_; }
  bool operator!=(const RationalPoly& o) const { return !(*this == o); }

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Rat> c_;
};

/*! \brief Certified upper estimate of the absolute maximizer G_i of the tail
 * of Q over [0, p_max].
 *
 * Returns the maximum of |tail(Q, i)| over a uniform grid plus a slack of
 * grid spacing times a coefficient-magnitude bound on the tail derivative,
 * so the result is always >= the true maximum.
 */
inline Rat gmax(const RationalPoly& q, size_t i, const Rat& p_max, int grid_size) {
  if (grid_size < 2) throw std::invalid_argument("gmax: grid_size must be >= 2");
  if (p_max < 0 || p_max > 1) throw std::invalid_argument("gmax: p_max must be in [0,1]");
  RationalPoly t = q.tail(i);
  if (t.is_zero()) return Rat(0);

  Rat deriv_bound(0);
  const auto& c = t.coefficients();
  for (size_t j = 1; j < c.size(); ++j)
    deriv_bound += Rat(BigInt(j)) * abs(c[j]) * rat_pow(p_max, j - 1);

  Rat h = p_max / Rat(BigInt(grid_size - 1));
  Rat best(0);
  for (int k = 0; k < grid_size; ++k) {
    Rat v = abs(t.eval(Rat(BigInt(k)) * h));
    if (v > best) best = v;
  }
  return best + h * deriv_bound;
}

}  // namespace treetribes
