#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/bd_triple.hpp"
#include "bdcluster/linalg.hpp"
#include "bdcluster/lmatrix.hpp"
#include "bdcluster/matrix.hpp"
#include "bdcluster/pair_graph.hpp"
#include "bdcluster/poisson.hpp"
#include "bdcluster/quiver.hpp"
#include "bdcluster/seed.hpp"
#include "bdcluster/verify.hpp"

namespace bdcluster {

// Which end of a row run the reduction cuts off.
enum class RunSide { Left, Right };

class TrivialRun : public std::invalid_argument {
 public:
  explicit TrivialRun(Interval run)
      : std::invalid_argument("reduce_run: run [" + std::to_string(run.lo) +
                              "," + std::to_string(run.hi) +
                              "] has no interior root to cut") {}
};

class NotARowRun : public std::invalid_argument {
 public:
  explicit NotARowRun(Interval run)
      : std::invalid_argument("reduce_run: [" + std::to_string(run.lo) + "," +
                              std::to_string(run.hi) +
                              "] is not a maximal row run") {}
};

class IdentityViolated : public std::runtime_error {
 public:
  IdentityViolated(VertexId v, Rat lhs_, Rat rhs_)
      : std::runtime_error("verify_matrixmap: function at (" +
                           std::to_string(v.first) + "," +
                           std::to_string(v.second) +
                           ") does not match its transported value"),
        vertex(v),
        lhs(std::move(lhs_)),
        rhs(std::move(rhs_)) {}
  VertexId vertex;
  Rat lhs, rhs;
};

class KernelViolation : public std::runtime_error {
 public:
  KernelViolation(VertexId v, const std::string& what_part)
      : std::runtime_error("exponent_relation: " + what_part + " at vertex (" +
                           std::to_string(v.first) + "," +
                           std::to_string(v.second) + ")"),
        vertex(v) {}
  VertexId vertex;
};

// Diagonal slot of one first-column vertex (row, 1) with row inside the run:
// the function at that vertex is the trailing minor at slot s of the glued
// matrix the entry lists it under.
struct RunAnchor {
  int r = 0;  // offset inside the run: the vertex is (run.lo - 1 + r, 1)
  int s = 0;  // its diagonal slot
};

// A row run of the pair together with the pair obtained by cutting one root
// off that run, the seeds on both sides, and the data governing how cluster
// functions transport between them.
struct RunReduction {
  BDPair pair;
  ClusterSeed seed;
  Interval run;        // the row run [p+1, p+k] of pair.row
  Interval image_run;  // its image run [q+1, q+k]
  RunSide side;
  BDPair reduced_pair;
  ClusterSeed reduced_seed;
  VertexId factor_vertex;  // mutable before the cut, frozen after; its
                           // reduced-seed function multiplies the functions
                           // reported by factored()
  int factor_l = -1;       // glued matrix hosting factor_vertex
  int factor_s = 0;        // and its diagonal slot there
  // anchors[l] lists the first-column vertices of the run whose diagonal
  // slot lies on matrix l, as (r, s) with r in [2, k].
  std::vector<std::vector<RunAnchor>> anchors;

  int p() const { return run.lo - 1; }
  int k() const { return run.len(); }
  int q() const { return image_run.lo - 1; }

  // Whether the function at (i, j) picks up the factor-vertex multiplier
  // under the transport map: exactly the vertices sharing the factor
  // vertex's matrix in slots strictly before it. Diagonal functions never do.
  bool factored(int i, int j) const {
    if (i == j) return false;
    const VertexRef& ref = seed.locate(i, j);
    return ref.l_id == factor_l && ref.s < factor_s;
  }
};

inline RunReduction reduce_run(const BDPair& pair, Interval run, RunSide side) {
  const RunDecomposition rd = runs(pair.row);
  std::size_t xi = rd.x_runs.size();
  for (std::size_t i = 0; i < rd.x_runs.size(); ++i)
    if (rd.x_runs[i] == run) xi = i;
  if (xi == rd.x_runs.size()) throw NotARowRun(run);
  if (run.len() < 2) throw TrivialRun(run);

  const Interval image = rd.y_runs[static_cast<std::size_t>(rd.x_to_y[xi])];
  const int p = run.lo - 1, k = run.len();
  const int cut_root = side == RunSide::Right ? p + k - 1 : p + 1;

  std::vector<std::pair<int, int>> kept;
  for (const auto& pr : pair.row.pairs())
    if (pr.first != cut_root) kept.push_back(pr);
  const BDPair reduced =
      BDPair::make(BDTriple::validate(pair.n(), kept), pair.col);

  RunReduction red{pair,    build_seed(pair),    run, image,
                   side,    reduced,             build_seed(reduced),
                   {0, 0},  -1,                  0,
                   {}};
  red.factor_vertex =
      side == RunSide::Right ? VertexId{p + k, 1} : VertexId{p + 2, 1};
  const VertexRef& ref =
      red.seed.locate(red.factor_vertex.first, red.factor_vertex.second);
  red.factor_l = ref.l_id;
  red.factor_s = ref.s;
  red.anchors.assign(red.seed.ls.size(), {});
  for (int r = 2; r <= k; ++r) {
    const VertexRef& a = red.seed.locate(p + r, 1);
    red.anchors[static_cast<std::size_t>(a.l_id)].push_back({r, a.s});
  }

  if (red.seed.is_frozen(red.factor_vertex.first, red.factor_vertex.second) ||
      !red.reduced_seed.is_frozen(red.factor_vertex.first,
                                  red.factor_vertex.second))
    throw std::logic_error("reduce_run: factor vertex kept its status");
  return red;
}

namespace detail {

// Instantiates L on the diagonal Y = Z = X and clears the one block row the
// cut deletes: for a right cut the last row of every Y block reaching the
// bottom of the image run, for a left cut the first row of every X block
// starting at the top of the run. Only the block's own cells are cleared;
// cells of row-mates glued next to it stay.
inline RatMat cut_instantiate(const LMatrix& L, const RunReduction& red,
                              const RatMat& Z) {
  RatMat m = L.instantiate(Z, Z);
  for (const BlockSpec& b : L.blocks) {
    if (b.dummy()) continue;
    int row;
    if (red.side == RunSide::Right) {
      if (b.kind != BlockKind::Y || b.source_rows.hi != red.image_run.hi)
        continue;
      row = b.placement_rows.hi;
    } else {
      if (b.kind != BlockKind::X || b.source_rows.lo != red.run.lo) continue;
      row = b.placement_rows.lo;
    }
    for (int c = b.placement_cols.lo; c <= b.placement_cols.hi; ++c)
      m(static_cast<std::size_t>(row - 1), static_cast<std::size_t>(c - 1)) = 0;
  }
  return m;
}

// Instantiates L with X = Z while the Y blocks spanning the full image run
// read the separately transformed matrix W; all other Y blocks read Z.
inline RatMat split_instantiate(const LMatrix& L, const RunReduction& red,
                                const RatMat& Z, const RatMat& W) {
  RatMat m = L.instantiate(Z, Z);
  for (const BlockSpec& b : L.blocks) {
    if (b.dummy() || b.kind != BlockKind::Y ||
        b.source_rows.hi != red.image_run.hi)
      continue;
    for (int dr = 0; dr < b.height(); ++dr)
      for (int dc = 0; dc < b.width(); ++dc)
        m(static_cast<std::size_t>(b.placement_rows.lo + dr - 1),
          static_cast<std::size_t>(b.placement_cols.lo + dc - 1)) =
            W(static_cast<std::size_t>(b.source_rows.lo + dr - 1),
              static_cast<std::size_t>(b.source_cols.lo + dc - 1));
  }
  return m;
}

// Trailing corner of m: rows [row_lo, end], columns [col_lo, end], 1-based.
inline RatMat corner_block(const RatMat& m, int row_lo, int col_lo) {
  return m.block(static_cast<std::size_t>(row_lo - 1),
                 static_cast<std::size_t>(col_lo - 1),
                 m.rows() - static_cast<std::size_t>(row_lo) + 1,
                 m.cols() - static_cast<std::size_t>(col_lo) + 1);
}

// Determinant of the square submatrix on the given 1-based rows (all
// columns kept, rows taken in the listed order).
inline Rat det_rows(const RatMat& m, const std::vector<int>& rows1) {
  std::vector<std::size_t> rs, cs;
  rs.reserve(rows1.size());
  for (int r : rows1) rs.push_back(static_cast<std::size_t>(r - 1));
  cs.reserve(m.cols());
  for (std::size_t c = 0; c < m.cols(); ++c) cs.push_back(c);
  return det(m.submatrix(rs, cs));
}

// The one-step unipotent factor: identity plus the computed coefficients
// along the image run, filling a column for a right cut and a row for a
// left cut.
inline RatMat unit_step(const RunReduction& red, const std::vector<Rat>& alpha) {
  RatMat u0 = RatMat::identity(static_cast<std::size_t>(red.pair.n()));
  const int q = red.q(), k = red.k();
  if (red.side == RunSide::Right) {
    for (int kappa = 1; kappa < k; ++kappa)
      u0(static_cast<std::size_t>(q + kappa - 1),
         static_cast<std::size_t>(q + k - 1)) = alpha[static_cast<std::size_t>(kappa - 1)];
  } else {
    for (int kappa = 2; kappa <= k; ++kappa)
      u0(static_cast<std::size_t>(q),
         static_cast<std::size_t>(q + kappa - 1)) = alpha[static_cast<std::size_t>(kappa - 1)];
  }
  return u0;
}

}  // namespace detail

// Coefficients of the one-step unipotent factor, as ratios of maximal
// minors of the trailing corner of the cut factor matrix. The corner keeps
// all its columns; the minors vary one row. For a right cut the matrix is
// plain in Z and the last coefficient is 1. For a left cut the corner may
// read rows the map itself transforms, so the coefficients are iterated to
// a fixed point; the first coefficient is 1.
inline std::vector<Rat> alpha_coefficients(const RunReduction& red,
                                           const RatMat& Z) {
  const LMatrix& L = red.seed.ls[static_cast<std::size_t>(red.factor_l)];
  const int N = L.size, k = red.k(), s = red.factor_s;
  if (red.side == RunSide::Right) {
    const RatMat B =
        detail::corner_block(detail::cut_instantiate(L, red, Z), s - k + 1, s);
    const int theta = N - s + k;
    std::vector<int> rows;
    rows.push_back(k);
    for (int r = k + 1; r <= theta; ++r) rows.push_back(r);
    const Rat denom = detail::det_rows(B, rows);
    if (denom == 0)
      throw ZeroDenominator(
          "alpha_coefficients: the factor-vertex function vanishes at Z");
    std::vector<Rat> alpha(static_cast<std::size_t>(k));
    for (int kappa = 1; kappa <= k; ++kappa) {
      rows[0] = kappa;
      alpha[static_cast<std::size_t>(kappa - 1)] = detail::det_rows(B, rows) / denom;
    }
    return alpha;
  }

  const int theta = N - s + 2;
  std::vector<Rat> alpha;
  RatMat W = Z;
  for (int round = 0; round < 16; ++round) {
    const RatMat B =
        detail::corner_block(detail::split_instantiate(L, red, Z, W), s - 1, s);
    std::vector<int> rows;
    for (int r = 2; r <= theta; ++r) rows.push_back(r);
    const Rat denom = detail::det_rows(B, rows);
    if (denom == 0)
      throw ZeroDenominator(
          "alpha_coefficients: the factor-vertex function vanishes at Z");
    std::vector<Rat> next(static_cast<std::size_t>(k));
    next[0] = 1;
    for (int kappa = 2; kappa <= k; ++kappa) {
      rows.clear();
      for (int r = 1; r <= theta; ++r)
        if (r != kappa) rows.push_back(r);
      const Rat value = detail::det_rows(B, rows) / denom;
      next[static_cast<std::size_t>(kappa - 1)] = kappa % 2 == 0 ? value : -value;
    }
    if (round > 0 && next == alpha) return alpha;
    alpha = std::move(next);
    W = detail::unit_step(red, alpha) * Z;
  }
  throw std::runtime_error(
      "alpha_coefficients: coefficients did not reach a fixed point");
}

// The transport map at the point Z: the one-step factor u0 and the full
// unipotent u, accumulated by repeatedly pushing the off-diagonal part of
// u0 along the row map and multiplying the new factors on the left.
struct UnipotentMap {
  std::vector<Rat> alpha;
  RatMat u0;
  RatMat u;
};

inline UnipotentMap build_U(const RunReduction& red, const RatMat& Z) {
  UnipotentMap out{alpha_coefficients(red, Z), RatMat(0, 0), RatMat(0, 0)};
  out.u0 = detail::unit_step(red, out.alpha);
  const std::size_t n = static_cast<std::size_t>(red.pair.n());
  const RatMat id = RatMat::identity(n);
  out.u = out.u0;
  RatMat cur = out.u0 - id;
  const GammaOperator push(red.pair.row, GammaVariant::Ringed);
  for (int i = 0; i < 4 * red.pair.n(); ++i) {
    cur = push.apply(cur, GammaDirection::Forward);
    if (cur.is_zero()) return out;
    out.u = (id + cur) * out.u;
  }
  throw std::logic_error("build_U: the pushed increment never vanished");
}

struct MatrixMapReport {
  UnipotentMap map;
  RatMat x;       // the transported point u * Z
  Rat factor;     // reduced-seed value at the factor vertex
  int factored = 0;  // functions that picked up the factor
};

// Checks, at one integer point Z, that every cluster function of the pair
// evaluated at u(Z) * Z equals the matching function of the reduced pair at
// Z, times the factor-vertex value exactly on the vertices factored() flags.
inline MatrixMapReport verify_matrixmap(const RunReduction& red,
                                        const RatMat& Z) {
  const Rat factor = evaluate(red.reduced_seed, red.factor_vertex.first,
                              red.factor_vertex.second, Z, Z);
  if (factor == 0)
    throw ZeroDenominator(
        "verify_matrixmap: the factor-vertex function vanishes at Z");
  MatrixMapReport rep{build_U(red, Z), RatMat(0, 0), factor, 0};
  rep.x = rep.map.u * Z;
  const int n = red.pair.n();
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const Rat lhs = evaluate(red.seed, i, j, rep.x, rep.x);
      Rat rhs = evaluate(red.reduced_seed, i, j, Z, Z);
      if (red.factored(i, j)) {
        rhs *= factor;
        ++rep.factored;
      }
      if (lhs != rhs) throw IdentityViolated({i, j}, lhs, rhs);
    }
  return rep;
}

struct ExponentReport {
  std::map<VertexId, long long> lambda;
  long long scale = 0;  // degree of the factor-vertex function
};

// Degree bookkeeping for the transport map: every function's degree drops
// under the reduction by a multiple of the factor vertex's degree, and the
// per-vertex multiples are returned. Both degree vectors are checked to be
// annihilated by the rows of their quiver's exchange matrix over the
// mutable vertices shared by the two quivers.
inline ExponentReport exponent_relation(const RunReduction& red) {
  const int n = red.pair.n();
  ExponentReport rep;
  rep.scale = red.seed.degree(red.factor_vertex.first, red.factor_vertex.second);
  std::map<VertexId, long long> d, dt;
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      d[{i, j}] = red.seed.degree(i, j);
      dt[{i, j}] = red.reduced_seed.degree(i, j);
      const long long diff = d[{i, j}] - dt[{i, j}];
      if (diff % rep.scale != 0)
        throw KernelViolation({i, j}, "degree drop off the common scale");
      rep.lambda[{i, j}] = diff / rep.scale;
    }

  const Quiver full = build_quiver(red.seed);
  const Quiver cut = build_quiver(red.reduced_seed);
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const VertexId u{i, j};
      if (cut.is_frozen(u)) continue;
      long long full_sum = 0, cut_sum = 0;
      for (int a = 1; a <= n; ++a)
        for (int b = 1; b <= n; ++b) {
          const VertexId w{a, b};
          full_sum += static_cast<long long>(full.net(u, w)) * d[w];
          cut_sum += static_cast<long long>(cut.net(u, w)) * dt[w];
        }
      if (full_sum != 0)
        throw KernelViolation(u, "degree vector escapes the full kernel");
      if (cut_sum != 0)
        throw KernelViolation(u, "degree vector escapes the reduced kernel");
    }
  return rep;
}

}  // namespace bdcluster
