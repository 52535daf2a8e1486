#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "treetribes/boolfn.hpp"
#include "treetribes/rational.hpp"

namespace treetribes {

enum class Cell : uint8_t { Zero = 0, One = 1, Star = 2 };

/// One assignment of each variable to 0, 1 or star.
struct Restriction {
  std::vector<Cell> cells;

  size_t size() const { return cells.size(); }
  int star_count() const {
    int s = 0;
    for (Cell c : cells) s += c == Cell::Star;
    return s;
  }
};

inline Restriction all_star(size_t n) { return Restriction{std::vector<Cell>(n, Cell::Star)}; }

inline Restriction parse_restriction(std::string_view s) {
  Restriction rho;
  rho.cells.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '0': rho.cells.push_back(Cell::Zero); break;
      case '1': rho.cells.push_back(Cell::One); break;
      case '*': rho.cells.push_back(Cell::Star); break;
      default: throw std::invalid_argument("restriction cells must be 0, 1 or *");
    }
  }
  return rho;
}

inline std::string to_string(const Restriction& rho) {
  std::string s;
  s.reserve(rho.cells.size());
  for (Cell c : rho.cells)
    s.push_back(c == Cell::Zero ? '0' : c == Cell::One ? '1' : '*');
  return s;
}

/*! \brief The i.i.d. restriction law: star with probability p, each fixed
 * value with probability q = (1-p)/2.
 *
 * Sampling thresholds a 64-bit uniform draw against floor(p * 2^64); the
 * resulting bias is below 2^-64.
 */
class RestrictionLaw {
 public:
  explicit RestrictionLaw(const Rat& p) : p_(p) {
    if (p < 0 || p > 1) throw std::invalid_argument("restriction rate p must be in [0,1]");
    BigInt thr = (numerator(p_) << 64) / denominator(p_);
    always_star_ = thr >= (BigInt(1) << 64);
    star_threshold_ = always_star_ ? ~uint64_t(0) : thr.convert_to<uint64_t>();
  }

  const Rat& p() const { return p_; }
  Rat q() const { return (Rat(1) - p_) / 2; }
  bool star_from(uint64_t draw) const { return always_star_ || draw < star_threshold_; }

 private:
  Rat p_;
  uint64_t star_threshold_;
  bool always_star_;
};

/// Restricts the table directly: the result is over the same n variables and
/// no longer depends on the fixed ones.
inline TruthTable restrict_table(const TruthTable& t, const Restriction& rho) {
  if (rho.size() != static_cast<size_t>(t.num_vars()))
    throw std::invalid_argument("restriction length does not match variable count");
  uint64_t fixed_mask = 0, fixed_vals = 0;
  for (size_t i = 0; i < rho.size(); ++i) {
    if (rho.cells[i] == Cell::Star) continue;
    fixed_mask |= uint64_t(1) << i;
    if (rho.cells[i] == Cell::One) fixed_vals |= uint64_t(1) << i;
  }
  return TruthTable::from_function(t.num_vars(), [&](uint64_t x) {
    return t.value((x & ~fixed_mask) | fixed_vals);
  });
}

}  // namespace treetribes
