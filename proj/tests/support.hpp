#pragma once

#include <stdexcept>
#include <utility>
#include <vector>

#include "bdcluster/bd_triple.hpp"
#include "bdcluster/matrix.hpp"
#include "bdcluster/pair_graph.hpp"
#include "bdcluster/rng.hpp"

namespace bdtest {

using bdcluster::BDPair;
using bdcluster::BDTriple;
using bdcluster::Rat;
using bdcluster::RatMat;

inline BDTriple make_triple(int n, std::vector<std::pair<int, int>> pairs) {
  return BDTriple::validate(n, pairs);
}

// n = 5, row: 1->2, 2->3; col: 1->3, 2->4. The standing small worked example.
inline BDPair gl5_pair() {
  return BDPair::make(make_triple(5, {{1, 2}, {2, 3}}), make_triple(5, {{1, 3}, {2, 4}}));
}

// n = 8, row: 2->3, 6->7; col: 6->1, 2->5. Decomposes with one alternating
// cycle, so the pair is not aperiodic.
inline BDPair gl8_pair() {
  return BDPair::make(make_triple(8, {{2, 3}, {6, 7}}), make_triple(8, {{6, 1}, {2, 5}}));
}

// n = 7 triple 1->3, 2->4, 4->1.
inline BDTriple fig_triple() { return make_triple(7, {{1, 3}, {2, 4}, {4, 1}}); }

// gamma: i -> i+1 on [1, n-2].
inline BDTriple cg_triple(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 1; i <= n - 2; ++i) pairs.emplace_back(i, i + 1);
  return make_triple(n, pairs);
}

inline BDPair self_pair(const BDTriple& t) { return BDPair::make(t, t); }

inline BDPair trivial_pair(int n) {
  return BDPair::make(BDTriple::trivial(n), BDTriple::trivial(n));
}

// Rejection-sampled valid triple; dom_size < 0 means random size.
inline BDTriple random_valid_triple(bdcluster::Rng& rng, int n, int dom_size = -1) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    int m = dom_size >= 0 ? dom_size : static_cast<int>(rng.uniform(0, n - 2));
    std::vector<int> src, dst;
    for (int i = 1; i <= n - 1; ++i) src.push_back(i), dst.push_back(i);
    for (int i = n - 2; i > 0; --i) {
      std::swap(src[static_cast<std::size_t>(i)],
                src[static_cast<std::size_t>(rng.uniform(0, i))]);
      std::swap(dst[static_cast<std::size_t>(i)],
                dst[static_cast<std::size_t>(rng.uniform(0, i))]);
    }
    std::vector<std::pair<int, int>> pairs;
    for (int i = 0; i < m; ++i) pairs.emplace_back(src[static_cast<std::size_t>(i)],
                                                   dst[static_cast<std::size_t>(i)]);
    try {
      return BDTriple::validate(n, pairs);
    } catch (const bdcluster::TripleValidationError&) {
    }
  }
  return BDTriple::trivial(n);
}

inline BDPair random_aperiodic_pair(bdcluster::Rng& rng, int n) {
  for (int attempt = 0; attempt < 4000; ++attempt) {
    BDPair p = BDPair::make(random_valid_triple(rng, n), random_valid_triple(rng, n));
    if (bdcluster::decompose(bdcluster::build_pair_graph(p)).aperiodic()) return p;
  }
  return trivial_pair(n);
}

inline RatMat random_point(bdcluster::Rng& rng, int n, int range = 20) {
  return bdcluster::random_int_matrix(rng, static_cast<std::size_t>(n),
                                      static_cast<std::size_t>(n), range);
}

// Random unipotent upper- (lower-) triangular matrix with small integer
// entries above (below) the diagonal.
inline RatMat random_unipotent(bdcluster::Rng& rng, int n, bool upper) {
  RatMat u = RatMat::identity(static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c)
      if (upper ? r < c : r > c) u(r, c) = rng.uniform(-4, 4);
  return u;
}

inline RatMat random_diag_invertible(bdcluster::Rng& rng, int n) {
  RatMat t(static_cast<std::size_t>(n), static_cast<std::size_t>(n));
  for (int r = 0; r < n; ++r) {
    long long v = 0;
    while (v == 0) v = rng.uniform(-6, 6);
    t(r, r) = v;
  }
  return t;
}

// Finite series log(u) for unipotent u = 1 + k with k nilpotent.
inline RatMat unipotent_log(const RatMat& u) {
  const std::size_t n = u.rows();
  const RatMat k = u - RatMat::identity(n);
  RatMat out(n, n), power = k;
  for (std::size_t m = 1; m < n; ++m) {
    out += power * Rat(m % 2 == 1 ? 1 : -1, m);
    power = power * k;
  }
  return out;
}

// Finite series exp(k) for nilpotent k.
inline RatMat nilpotent_exp(const RatMat& k) {
  const std::size_t n = k.rows();
  RatMat out = RatMat::identity(n), power = RatMat::identity(n);
  for (std::size_t m = 1; m < n; ++m) {
    power = power * k * Rat(1, m);
    out += power;
  }
  return out;
}

// Copies each diagonal block sitting on a nontrivial domain-side run of t to
// its image-side run block; all other entries of the result vanish.
inline RatMat run_block_push(const BDTriple& t, const RatMat& z) {
  const auto rd = bdcluster::runs(t);
  RatMat out(z.rows(), z.cols());
  for (const auto& run : rd.x_runs) {
    if (run.trivial() || !rd.x_run_nontrivial(run.lo)) continue;
    for (int a = run.lo; a <= run.hi; ++a)
      for (int b = run.lo; b <= run.hi; ++b)
        out(rd.gamma_pos(a) - 1, rd.gamma_pos(b) - 1) = z(a - 1, b - 1);
  }
  return out;
}

// Adjoint of run_block_push: image-side run blocks travel back.
inline RatMat run_block_pull(const BDTriple& t, const RatMat& z) {
  const auto rd = bdcluster::runs(t);
  RatMat out(z.rows(), z.cols());
  for (const auto& run : rd.y_runs) {
    if (run.trivial() || !rd.y_run_nontrivial(run.lo)) continue;
    for (int a = run.lo; a <= run.hi; ++a)
      for (int b = run.lo; b <= run.hi; ++b)
        out(rd.gamma_star_pos(a) - 1, rd.gamma_star_pos(b) - 1) = z(a - 1, b - 1);
  }
  return out;
}

// Group versions of the two maps above for invertible diagonal matrices:
// diagonal entries travel along the run position maps, all remaining diagonal
// entries become 1.
inline RatMat torus_push(const BDTriple& t, const RatMat& d) {
  const auto rd = bdcluster::runs(t);
  RatMat out = RatMat::identity(d.rows());
  for (const auto& run : rd.x_runs) {
    if (run.trivial() || !rd.x_run_nontrivial(run.lo)) continue;
    for (int a = run.lo; a <= run.hi; ++a)
      out(rd.gamma_pos(a) - 1, rd.gamma_pos(a) - 1) = d(a - 1, a - 1);
  }
  return out;
}

inline RatMat torus_pull(const BDTriple& t, const RatMat& d) {
  const auto rd = bdcluster::runs(t);
  RatMat out = RatMat::identity(d.rows());
  for (const auto& run : rd.y_runs) {
    if (run.trivial() || !rd.y_run_nontrivial(run.lo)) continue;
    for (int a = run.lo; a <= run.hi; ++a)
      out(rd.gamma_star_pos(a) - 1, rd.gamma_star_pos(a) - 1) = d(a - 1, a - 1);
  }
  return out;
}

}  // namespace bdtest
