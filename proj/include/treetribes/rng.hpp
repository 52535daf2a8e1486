#pragma once

#include <cstdint>

namespace treetribes {

inline uint64_t mix64(uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

/*! \brief Counter-based per-sample random stream.
 *
 * The whole stream is a function of (seed, index) only, so any partitioning
 * of sample indices across workers reproduces the serial run bit for bit.
 */
class SampleRng {
 public:
  SampleRng(uint64_t seed, uint64_t index)
      : s_(mix64(seed ^ 0x9E3779B97F4A7C15ULL) +
           mix64(index * 0xD1B54A32D192ED03ULL + 0x8BB84B93962EACC9ULL)) {}

  uint64_t next() {
    s_ += 0x9E3779B97F4A7C15ULL;
    return mix64(s_);
  }

 private:
  uint64_t s_;
};

}  // namespace treetribes
