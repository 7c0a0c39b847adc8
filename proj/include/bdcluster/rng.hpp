#pragma once

#include <cstdint>
#include <random>
#include <stdexcept>

#include "bdcluster/linalg.hpp"
#include "bdcluster/matrix.hpp"

namespace bdcluster {

// Deterministic random source. All randomness in the library is injected
// through one of these; the raw mt19937_64 stream plus explicit rejection
// sampling keeps the draw sequence identical across platforms (the standard
// distributions are implementation-defined).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next_u64() { return eng_(); }

  // Uniform on [lo, hi], inclusive.
  long long uniform(long long lo, long long hi) {
    if (lo > hi) throw std::invalid_argument("uniform: empty range");
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
    if (span == 0) return static_cast<long long>(next_u64());  // full range
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % span;
    std::uint64_t x;
    do {
      x = next_u64();
    } while (x >= limit);
    return lo + static_cast<long long>(x % span);
  }

 private:
  std::mt19937_64 eng_;
};

inline RatMat random_int_matrix(Rng& rng, std::size_t r, std::size_t c, long long entry_range) {
  RatMat m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = Rat(rng.uniform(-entry_range, entry_range));
  return m;
}

// Integer-entry matrix with nonzero determinant, by bounded resampling.
inline RatMat random_invertible_matrix(Rng& rng, std::size_t n, long long entry_range,
                                       int max_tries = 64) {
  for (int t = 0; t < max_tries; ++t) {
    RatMat m = random_int_matrix(rng, n, n, entry_range);
    if (det(m) != 0) return m;
  }
  throw std::runtime_error("random_invertible_matrix: resampling budget exhausted");
}

}  // namespace bdcluster
