#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "treetribes/rational.hpp"

namespace treetribes {

inline constexpr int kHardVarCap = 24;
inline constexpr int kDepthSearchCap = 14;

/// Raised when an operation would exceed a configured size cap.
struct resource_limit_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class Constness { Const0, Const1, NonConstant };

/*! \brief Full-domain value table of a boolean function on n variables.
 *
 * Entry x holds f at the assignment encoded by x, variable i contributing
 * bit i.
 */
class TruthTable {
 public:
  explicit TruthTable(int n) : n_(checked(n)), v_(uint64_t(1) << n, 0) {}

  template <class Fn>
  static TruthTable from_function(int n, Fn&& f) {
    TruthTable t(n);
    for (uint64_t x = 0; x < t.v_.size(); ++x) t.v_[x] = f(x) ? 1 : 0;
    return t;
  }

  int num_vars() const { return n_; }
  uint64_t size() const { return v_.size(); }
  uint8_t value(uint64_t x) const { return v_[x]; }
  void set_value(uint64_t x, int b) { v_[x] = b ? 1 : 0; }

  bool operator==(const TruthTable& o) const { return n_ == o.n_ && v_ == o.v_; }
  bool operator!=(const TruthTable& o) const { return !(*this == o); }

 private:
  static int checked(int n) {
    if (n < 0 || n > kHardVarCap)
      throw resource_limit_error("variable count " + std::to_string(n) +
                                 " outside [0, " + std::to_string(kHardVarCap) + "]");
    return n;
  }
  int n_;
  std::vector<uint8_t> v_;
};

inline TruthTable constant_table(int n, int value) {
  return TruthTable::from_function(n, [&](uint64_t) { return value; });
}
inline TruthTable or_table(int n) {
  return TruthTable::from_function(n, [](uint64_t x) { return x != 0; });
}
inline TruthTable parity_table(int n) {
  return TruthTable::from_function(
      n, [](uint64_t x) { return __builtin_parityll(x); });
}
inline TruthTable dictator_table(int n, int i) {
  return TruthTable::from_function(n, [&](uint64_t x) { return (x >> i) & 1; });
}

inline int evaluate(const TruthTable& t, const std::vector<uint8_t>& assignment) {
  if (static_cast<int>(assignment.size()) != t.num_vars())
    throw std::invalid_argument("assignment length does not match variable count");
  uint64_t x = 0;
  for (size_t i = 0; i < assignment.size(); ++i)
    if (assignment[i]) x |= uint64_t(1) << i;
  return t.value(x);
}

inline Constness constness(const TruthTable& t) {
  uint8_t first = t.value(0);
  for (uint64_t x = 1; x < t.size(); ++x)
    if (t.value(x) != first) return Constness::NonConstant;
  return first ? Constness::Const1 : Constness::Const0;
}

/// |Pr[f = 0] - 1/2|, exact.
inline Rat bias(const TruthTable& t) {
  uint64_t zeros = 0;
  for (uint64_t x = 0; x < t.size(); ++x) zeros += t.value(x) == 0;
  return abs(Rat(BigInt(zeros)) / Rat(BigInt(t.size())) - rat(1, 2));
}

/// Pr[f = g] over a uniform input, exact.
inline Rat correlation(const TruthTable& f, const TruthTable& g) {
  if (f.num_vars() != g.num_vars())
    throw std::invalid_argument("correlation requires equal variable counts");
  uint64_t agree = 0;
  for (uint64_t x = 0; x < f.size(); ++x) agree += f.value(x) == g.value(x);
  return Rat(BigInt(agree)) / Rat(BigInt(f.size()));
}

/// Probability that flipping variable i flips the value of f, exact.
inline Rat influence(const TruthTable& t, int i) {
  if (i < 0 || i >= t.num_vars()) throw std::invalid_argument("influence: bad variable");
  uint64_t flips = 0;
  const uint64_t bit = uint64_t(1) << i;
  for (uint64_t x = 0; x < t.size(); ++x) flips += t.value(x) != t.value(x ^ bit);
  return Rat(BigInt(flips)) / Rat(BigInt(t.size()));
}

/*! \brief Exact Fourier coefficients, indexed by subset bitmask.
 *
 * Sign convention throughout: boolean 0 maps to +1 and boolean 1 maps to -1,
 * for variables and outputs alike. Under it Parseval holds exactly for any
 * boolean function.
 */
struct FourierSpectrum {
  int n = 0;
  std::vector<Rat> coeffs;  // index = subset bitmask
  const Rat& at(uint64_t mask) const { return coeffs[mask]; }
};

inline FourierSpectrum fourier_transform(const TruthTable& t) {
  const uint64_t size = t.size();
  std::vector<int64_t> w(size);
  for (uint64_t x = 0; x < size; ++x) w[x] = t.value(x) ? -1 : 1;
  for (uint64_t h = 1; h < size; h <<= 1) {
    for (uint64_t i = 0; i < size; i += h << 1) {
      for (uint64_t j = i; j < i + h; ++j) {
        int64_t a = w[j], b = w[j + h];
        w[j] = a + b;
        w[j + h] = a - b;
      }
    }
  }
  FourierSpectrum s;
  s.n = t.num_vars();
  s.coeffs.reserve(size);
  const Rat scale = pow2(-t.num_vars());
  for (uint64_t m = 0; m < size; ++m) s.coeffs.push_back(Rat(BigInt(w[m])) * scale);
  return s;
}

namespace detail {

class DepthSolver {
 public:
  explicit DepthSolver(std::vector<uint8_t> table, int s) : g_(std::move(table)), s_(s) {}

  int solve() { return rec(0, 0); }

 private:
  int rec(uint32_t fixed_mask, uint32_t fixed_vals) {
    const uint32_t key = (fixed_mask << s_) | fixed_vals;
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;

    int free_list[kDepthSearchCap + 1];
    int nfree = 0;
    for (int j = 0; j < s_; ++j)
      if (!((fixed_mask >> j) & 1)) free_list[nfree++] = j;

    int result;
    if (is_constant_on(fixed_vals, free_list, nfree)) {
      result = 0;
    } else {
      int best = nfree;
      for (int idx = 0; idx < nfree; ++idx) {
        const int j = free_list[idx];
        if (!depends_on(j, fixed_vals, free_list, nfree)) continue;
        const uint32_t bit = uint32_t(1) << j;
        int d0 = rec(fixed_mask | bit, fixed_vals);
        if (1 + d0 >= best) continue;  // cannot improve the current minimum
        int d1 = rec(fixed_mask | bit, fixed_vals | bit);
        best = std::min(best, 1 + std::max(d0, d1));
      }
      result = best;
    }
    memo_.emplace(key, static_cast<int8_t>(result));
    return result;
  }

  bool is_constant_on(uint32_t base, const int* free_list, int nfree) const {
    const uint8_t first = g_[base];
    for (uint32_t idx = 1; idx < (uint32_t(1) << nfree); ++idx) {
      if (g_[expand(base, idx, free_list, nfree)] != first) return false;
    }
    return true;
  }

  bool depends_on(int j, uint32_t base, const int* free_list, int nfree) const {
    const uint32_t bit = uint32_t(1) << j;
    int others[kDepthSearchCap + 1];
    int m = 0;
    for (int i = 0; i < nfree; ++i)
      if (free_list[i] != j) others[m++] = free_list[i];
    for (uint32_t idx = 0; idx < (uint32_t(1) << m); ++idx) {
      const uint32_t x = expand(base, idx, others, m);
      if (g_[x] != g_[x | bit]) return true;
    }
    return false;
  }

  static uint32_t expand(uint32_t base, uint32_t idx, const int* positions, int count) {
    uint32_t x = base;
    for (int i = 0; i < count; ++i)
      if ((idx >> i) & 1) x |= uint32_t(1) << positions[i];
    return x;
  }

  std::vector<uint8_t> g_;
  int s_;
  std::unordered_map<uint32_t, int8_t> memo_;
};

}  // namespace detail

/*! \brief Exact minimal decision-tree depth of the function.
 *
 * Variables the function does not depend on are removed up front; the
 * recursion is memoized on the (fixed-variable set, fixed values) subcube.
 */
inline int dt_depth(const TruthTable& t, int cap = kDepthSearchCap) {
  const int n = t.num_vars();
  std::vector<int> live;
  for (int i = 0; i < n; ++i) {
    const uint64_t bit = uint64_t(1) << i;
    for (uint64_t x = 0; x < t.size(); ++x) {
      if (t.value(x) != t.value(x ^ bit)) {
        live.push_back(i);
        break;
      }
    }
  }
  const int s = static_cast<int>(live.size());
  if (s == 0) return 0;
  if (s > cap)
    throw resource_limit_error("dt_depth: " + std::to_string(s) +
                               " live variables exceed cap " + std::to_string(cap));

  std::vector<uint8_t> g(uint64_t(1) << s);
  for (uint32_t y = 0; y < g.size(); ++y) {
    uint64_t x = 0;
    for (int j = 0; j < s; ++j)
      if ((y >> j) & 1) x |= uint64_t(1) << live[j];
    g[y] = t.value(x);
  }
  return detail::DepthSolver(std::move(g), s).solve();
}

}  // namespace treetribes
