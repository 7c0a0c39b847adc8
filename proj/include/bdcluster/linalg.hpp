#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

#include "bdcluster/matrix.hpp"
#include "bdcluster/rational.hpp"

namespace bdcluster {

// Fraction-free Bareiss elimination. Intermediate entries stay integral
// (they are minors of the input), which keeps growth polynomial instead of
// the exponential blow-up of naive rational elimination.
inline Int det_bareiss(IntMat m) {
  if (!m.is_square()) throw std::invalid_argument("det: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return Int(1);
  int sign = 1;
  Int prev(1);
  for (std::size_t k = 0; k + 1 < n; ++k) {
    std::size_t p = k;
    while (p < n && m(p, k) == 0) ++p;
    if (p == n) return Int(0);
    if (p != k) {
      m.swap_rows(p, k);
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      for (std::size_t j = k + 1; j < n; ++j) {
        Int t = m(i, j) * m(k, k) - m(i, k) * m(k, j);
        m(i, j) = t / prev;  // exact by Sylvester's identity
      }
      m(i, k) = 0;
    }
    prev = m(k, k);
  }
  Int d = m(n - 1, n - 1);
  return sign < 0 ? Int(-d) : d;
}

namespace detail {

// Scale each row to integers; returns the product of the scaling factors.
inline IntMat clear_denominators(const RatMat& m, Int& factor) {
  IntMat z(m.rows(), m.cols());
  factor = 1;
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Int l(1);
    for (std::size_t c = 0; c < m.cols(); ++c) l = lcm(l, rat_den(m(r, c)));
    for (std::size_t c = 0; c < m.cols(); ++c) z(r, c) = rat_num(m(r, c)) * (l / rat_den(m(r, c)));
    factor *= l;
  }
  return z;
}

}  // namespace detail

inline Rat det(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("det: matrix not square");
  Int factor;
  IntMat z = detail::clear_denominators(m, factor);
  return Rat(det_bareiss(std::move(z)), factor);
}

// Exact rank via fraction-free elimination with column skipping.
inline std::size_t rank(const RatMat& m) {
  Int factor;
  IntMat z = detail::clear_denominators(m, factor);
  const std::size_t rows = z.rows(), cols = z.cols();
  std::size_t r = 0;
  Int prev(1);
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && z(p, c) == 0) ++p;
    if (p == rows) continue;
    if (p != r) z.swap_rows(p, r);
    for (std::size_t i = r + 1; i < rows; ++i) {
      for (std::size_t j = c + 1; j < cols; ++j) {
        Int t = z(i, j) * z(r, c) - z(i, c) * z(r, j);
        z(i, j) = t / prev;
      }
      z(i, c) = 0;
    }
    prev = z(r, c);
    ++r;
  }
  return r;
}

// Gauss-Jordan inverse over the rationals. Throws on singular input.
inline RatMat inverse(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("inverse: matrix not square");
  const std::size_t n = m.rows();
  RatMat a = m;
  RatMat inv = RatMat::identity(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t p = k;
    while (p < n && a(p, k) == 0) ++p;
    if (p == n) throw std::domain_error("inverse: singular matrix");
    if (p != k) {
      a.swap_rows(p, k);
      inv.swap_rows(p, k);
    }
    const Rat piv = a(k, k);
    for (std::size_t j = 0; j < n; ++j) {
      a(k, j) /= piv;
      inv(k, j) /= piv;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == k || a(i, k) == 0) continue;
      const Rat f = a(i, k);
      for (std::size_t j = 0; j < n; ++j) {
        a(i, j) -= f * a(k, j);
        inv(i, j) -= f * inv(k, j);
      }
    }
  }
  return inv;
}

// Cofactor adjugate: adj(M)(i,j) = (-1)^{i+j} det(M without row j, column i).
// Uniform over singular and invertible input; M * adj(M) = det(M) * 1 always.
inline RatMat adjugate(const RatMat& m) {
  if (!m.is_square()) throw std::invalid_argument("adjugate: matrix not square");
  const std::size_t n = m.rows();
  if (n == 0) return RatMat(0, 0);
  if (n == 1) return RatMat{{Rat(1)}};
  RatMat adj(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      Rat c = det(m.minor_matrix(j, i));
      adj(i, j) = ((i + j) % 2 == 0) ? c : -c;
    }
  return adj;
}

// det of the trailing block on rows and columns [s, N]; s is 1-based.
// s = 1 is det(M); s = N is the bottom-right entry.
inline Rat trailing_minor(const RatMat& m, std::size_t s) {
  if (!m.is_square()) throw std::invalid_argument("trailing_minor: matrix not square");
  const std::size_t n = m.rows();
  if (s < 1 || s > n) throw std::out_of_range("trailing_minor: index out of range");
  return det(m.block(s - 1, s - 1, n - s + 1, n - s + 1));
}

// All trailing determinants and trailing inverses of one square matrix,
// built bottom-up by bordering. dets[s] and invs[s] describe rows/columns
// [s, N] (1-based); dets[N+1] = 1 and invs[N+1] is 0x0. build() returns the
// first s (largest block) whose trailing block is singular, or 0 on success;
// on failure only the blocks below the reported s are filled in.
struct TrailingChain {
  std::vector<Rat> dets;
  std::vector<RatMat> invs;

  std::size_t build(const RatMat& m) {
    if (!m.is_square()) throw std::invalid_argument("trailing chain: matrix not square");
    const std::size_t n = m.rows();
    dets.assign(n + 2, Rat(1));
    invs.assign(n + 2, RatMat(0, 0));
    for (std::size_t s = n; s >= 1; --s) {
      const std::size_t k = n - s;  // size of the already-inverted block
      const RatMat& binv = invs[s + 1];
      RatMat u(k, 1), vt(1, k);
      for (std::size_t t = 0; t < k; ++t) {
        u(t, 0) = m(s + t, s - 1);
        vt(0, t) = m(s - 1, s + t);
      }
      RatMat binv_u = binv * u;          // k x 1
      RatMat vt_binv = vt * binv;        // 1 x k
      Rat alpha = m(s - 1, s - 1) - (vt * binv_u)(0, 0);
      if (alpha == 0) return s;
      dets[s] = alpha * dets[s + 1];
      RatMat inv(k + 1, k + 1);
      const Rat ai = Rat(1) / alpha;
      inv(0, 0) = ai;
      for (std::size_t t = 0; t < k; ++t) {
        inv(0, t + 1) = -vt_binv(0, t) * ai;
        inv(t + 1, 0) = -binv_u(t, 0) * ai;
      }
      for (std::size_t r = 0; r < k; ++r)
        for (std::size_t c = 0; c < k; ++c)
          inv(r + 1, c + 1) = binv(r, c) + binv_u(r, 0) * vt_binv(0, c) * ai;
      invs[s] = std::move(inv);
    }
    return 0;
  }
};

}  // namespace bdcluster
