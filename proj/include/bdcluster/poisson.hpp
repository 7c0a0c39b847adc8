#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/bd_triple.hpp"
#include "bdcluster/linalg.hpp"
#include "bdcluster/matrix.hpp"
#include "bdcluster/seed.hpp"

namespace bdcluster {

enum class GammaVariant { Traceless, Ringed };
enum class GammaDirection { Forward, Adjoint };

// Block-copy map between the run block spaces of a root-map triple. Forward
// reads the nontrivial domain-run blocks and writes them to the image runs;
// Adjoint goes the other way. The traceless variant subtracts the block trace
// before copying, the ringed variant copies blocks whole.
class GammaOperator {
 public:
  GammaOperator(BDTriple triple, GammaVariant variant)
      : triple_(std::move(triple)),
        variant_(variant),
        runs_(runs(triple_)),
        n_(static_cast<std::size_t>(triple_.n())) {}

  const BDTriple& triple() const { return triple_; }
  GammaVariant variant() const { return variant_; }

  RatMat apply(const RatMat& z, GammaDirection dir) const {
    check_dims(z);
    RatMat out(n_, n_);
    for (const Interval& run : source_runs(dir)) {
      if (run.len() < 2 || !source_nontrivial(dir, run.lo)) continue;
      Rat shift = 0;
      if (variant_ == GammaVariant::Traceless) {
        for (int a = run.lo; a <= run.hi; ++a) shift += z(a - 1, a - 1);
        shift /= run.len();
      }
      for (int a = run.lo; a <= run.hi; ++a)
        for (int b = run.lo; b <= run.hi; ++b) {
          Rat val = z(a - 1, b - 1);
          if (a == b) val -= shift;
          out(image_pos(dir, a) - 1, image_pos(dir, b) - 1) = val;
        }
    }
    return out;
  }

  // Orthogonal projection onto the block space the Forward/Adjoint source
  // reads from (domain runs for Forward, image runs for Adjoint).
  RatMat project(const RatMat& z, GammaDirection dir) const {
    check_dims(z);
    RatMat out(n_, n_);
    for (const Interval& run : source_runs(dir)) {
      if (run.len() < 2 || !source_nontrivial(dir, run.lo)) continue;
      Rat shift = 0;
      if (variant_ == GammaVariant::Traceless) {
        for (int a = run.lo; a <= run.hi; ++a) shift += z(a - 1, a - 1);
        shift /= run.len();
      }
      for (int a = run.lo; a <= run.hi; ++a)
        for (int b = run.lo; b <= run.hi; ++b) {
          Rat val = z(a - 1, b - 1);
          if (a == b) val -= shift;
          out(a - 1, b - 1) = val;
        }
    }
    return out;
  }

  // (1 - gamma)^{-1} z by an exact linear solve on the flattened matrix
  // space. A power-sum expansion would not do: overlapping runs can cycle
  // block positions, so the map need not be nilpotent, and the whole-block
  // variant can even fix a vector. In the fixed-vector case the solve is
  // singular and this throws.
  RatMat resolvent(const RatMat& z, GammaDirection dir) const {
    check_dims(z);
    if (apply(z, dir).is_zero()) return z;
    const RatMat& inv = resolvent_matrix(dir);
    RatMat out(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        const std::size_t row = r * n_ + c;
        Rat acc = 0;
        for (std::size_t rr = 0; rr < n_; ++rr)
          for (std::size_t cc = 0; cc < n_; ++cc) {
            const Rat& w = inv(row, rr * n_ + cc);
            if (w != 0) acc += w * z(rr, cc);
          }
        out(r, c) = acc;
      }
    return out;
  }

 private:
  void check_dims(const RatMat& z) const {
    if (z.rows() != n_ || z.cols() != n_)
      throw std::invalid_argument("GammaOperator: matrix has the wrong size");
  }
  // Inverse of (1 - gamma) as a matrix on flattened n x n input, built on
  // first use and cached per direction.
  const RatMat& resolvent_matrix(GammaDirection dir) const {
    auto& slot = inv_cache_[dir == GammaDirection::Forward ? 0 : 1];
    if (!slot) {
      const std::size_t m = n_ * n_;
      RatMat op(m, m);
      for (std::size_t r = 0; r < n_; ++r)
        for (std::size_t c = 0; c < n_; ++c) {
          RatMat basis(n_, n_);
          basis(r, c) = 1;
          const RatMat image = apply(basis, dir);
          const std::size_t col = r * n_ + c;
          op(col, col) += 1;
          for (std::size_t rr = 0; rr < n_; ++rr)
            for (std::size_t cc = 0; cc < n_; ++cc)
              if (image(rr, cc) != 0) op(rr * n_ + cc, col) -= image(rr, cc);
        }
      try {
        slot = inverse(op);
      } catch (const std::domain_error&) {
        throw std::domain_error(
            "GammaOperator: block-copy map fixes a vector, no resolvent");
      }
    }
    return *slot;
  }
  const std::vector<Interval>& source_runs(GammaDirection dir) const {
    return dir == GammaDirection::Forward ? runs_.x_runs : runs_.y_runs;
  }
  bool source_nontrivial(GammaDirection dir, int p) const {
    return dir == GammaDirection::Forward ? runs_.x_run_nontrivial(p)
                                          : runs_.y_run_nontrivial(p);
  }
  int image_pos(GammaDirection dir, int p) const {
    return dir == GammaDirection::Forward ? runs_.gamma_pos(p)
                                          : runs_.gamma_star_pos(p);
  }

  BDTriple triple_;
  GammaVariant variant_;
  RunDecomposition runs_;
  std::size_t n_;
  mutable std::optional<RatMat> inv_cache_[2];
};

// The positive R-matrix half attached to one triple, built on the traceless
// block-copy map: the only variant whose resolvent exists for every valid
// triple. The traceless map kills the identity, which makes the diagonal
// skew correction s_vector() vanish; the correction term stays in the
// formula as written.
class RPlusOperator {
 public:
  explicit RPlusOperator(const BDTriple& triple)
      : gamma_(triple, GammaVariant::Traceless),
        n_(static_cast<std::size_t>(triple.n())) {
    s_vec_ = s_operator(RatMat::identity(n_));
  }

  const GammaOperator& gamma_op() const { return gamma_; }
  const RatMat& s_vector() const { return s_vec_; }

  // (1/2) ((1-gamma)^{-1} - (1-gamma*)^{-1}) restricted to diagonal input.
  RatMat s_operator(const RatMat& diag) const {
    return (gamma_.resolvent(diag, GammaDirection::Forward) -
            gamma_.resolvent(diag, GammaDirection::Adjoint)) *
           Rat(1, 2);
  }

  RatMat apply(const RatMat& zeta) const {
    if (zeta.rows() != n_ || zeta.cols() != n_)
      throw std::invalid_argument("RPlusOperator: matrix has the wrong size");
    RatMat upper_eq(n_, n_), lower(n_, n_), diag(n_, n_);
    for (std::size_t r = 0; r < n_; ++r)
      for (std::size_t c = 0; c < n_; ++c) {
        if (r < c)
          upper_eq(r, c) = zeta(r, c);
        else if (r > c)
          lower(r, c) = zeta(r, c);
        else {
          upper_eq(r, c) = zeta(r, c);
          diag(r, c) = zeta(r, c);
        }
      }

    RatMat out = gamma_.resolvent(upper_eq, GammaDirection::Forward);
    out = out - gamma_.apply(gamma_.resolvent(lower, GammaDirection::Adjoint),
                             GammaDirection::Adjoint);
    const RatMat d_fwd =
        gamma_.apply(gamma_.resolvent(diag, GammaDirection::Forward),
                     GammaDirection::Forward);
    const RatMat d_adj = gamma_.resolvent(diag, GammaDirection::Adjoint);
    out = out - (d_fwd + d_adj) * Rat(1, 2);

    const Rat tr_zeta = zeta.trace();
    const Rat tr_zs = dot_trace(zeta, s_vec_);
    out = out - (s_vec_ * tr_zeta - RatMat::identity(n_) * tr_zs) *
                    Rat(1, static_cast<long long>(n_));
    return out;
  }

 private:
  GammaOperator gamma_;
  std::size_t n_;
  RatMat s_vec_;
};

// A function on the double: a seed vertex function or a single coordinate
// entry of either factor.
struct DoubleFn {
  enum class Kind { Vertex, XEntry, YEntry };
  Kind kind;
  int a, b;
  DiagSide side = DiagSide::X;
};

inline DoubleFn vertex_fn(int i, int j, DiagSide side = DiagSide::X) {
  return {DoubleFn::Kind::Vertex, i, j, side};
}
inline DoubleFn x_entry(int a, int b) { return {DoubleFn::Kind::XEntry, a, b}; }
inline DoubleFn y_entry(int a, int b) { return {DoubleFn::Kind::YEntry, a, b}; }

inline Rat fn_value(const ClusterSeed& seed, const DoubleFn& f, const RatMat& X,
                    const RatMat& Y) {
  switch (f.kind) {
    case DoubleFn::Kind::Vertex:
      return evaluate(seed, f.a, f.b, X, Y, f.side);
    case DoubleFn::Kind::XEntry:
      return X(f.a - 1, f.b - 1);
    default:
      return Y(f.a - 1, f.b - 1);
  }
}

inline std::pair<RatMat, RatMat> fn_grads(const ClusterSeed& seed,
                                          const DoubleFn& f, const RatMat& X,
                                          const RatMat& Y) {
  const std::size_t n = X.rows();
  if (f.kind == DoubleFn::Kind::Vertex)
    return gradient(seed, f.a, f.b, X, Y, f.side);
  RatMat gx(n, n), gy(n, n);
  (f.kind == DoubleFn::Kind::XEntry ? gx : gy)(f.b - 1, f.a - 1) = 1;
  return {std::move(gx), std::move(gy)};
}

// Bracket evaluator holding the two R-matrix halves of a seed's pair.
class DoubleBracket {
 public:
  explicit DoubleBracket(const ClusterSeed& seed)
      : seed_(&seed), r_col_(seed.pair.col), r_row_(seed.pair.row) {}

  const RPlusOperator& r_col() const { return r_col_; }
  const RPlusOperator& r_row() const { return r_row_; }

  Rat operator()(const DoubleFn& f1, const DoubleFn& f2, const RatMat& X,
                 const RatMat& Y) const {
    check_point(X, Y);
    const auto [gx1, gy1] = fn_grads(*seed_, f1, X, Y);
    const auto [gx2, gy2] = fn_grads(*seed_, f2, X, Y);
    const RatMat el1 = gx1 * X + gy1 * Y, er1 = X * gx1 + Y * gy1;
    const RatMat el2 = gx2 * X + gy2 * Y, er2 = X * gx2 + Y * gy2;
    return dot_trace(r_col_.apply(el1), el2) -
           dot_trace(r_row_.apply(er1), er2) + dot_trace(X * gx1, Y * gy2) -
           dot_trace(gx1 * X, gy2 * Y);
  }

  // Restriction to functions of one matrix argument: the bracket of the
  // lifts that ignore Y, evaluated on the diagonal. g1, g2 are the full
  // gradients of the restricted functions at X.
  Rat restricted(const RatMat& g1, const RatMat& g2, const RatMat& X) const {
    check_point(X, X);
    return dot_trace(r_col_.apply(g1 * X), g2 * X) -
           dot_trace(r_row_.apply(X * g1), X * g2);
  }

  RatMat restricted_grad(const DoubleFn& f, const RatMat& X) const {
    const auto [gx, gy] = fn_grads(*seed_, f, X, X);
    return gx + gy;
  }

 private:
  void check_point(const RatMat& X, const RatMat& Y) const {
    const auto n = static_cast<std::size_t>(seed_->n());
    if (X.rows() != n || X.cols() != n || Y.rows() != n || Y.cols() != n)
      throw std::invalid_argument("DoubleBracket: point has the wrong size");
  }

  const ClusterSeed* seed_;
  RPlusOperator r_col_, r_row_;
};

inline Rat double_bracket(const ClusterSeed& seed, const DoubleFn& f1,
                          const DoubleFn& f2, const RatMat& X, const RatMat& Y) {
  return DoubleBracket(seed)(f1, f2, X, Y);
}

inline Rat matn_bracket(const ClusterSeed& seed, const DoubleFn& f1,
                        const DoubleFn& f2, const RatMat& X) {
  const DoubleBracket ctx(seed);
  return ctx.restricted(ctx.restricted_grad(f1, X), ctx.restricted_grad(f2, X),
                        X);
}

class ZeroFunctionAtPoint : public std::runtime_error {
 public:
  ZeroFunctionAtPoint(VertexId vertex, std::size_t point)
      : std::runtime_error("seed function (" + std::to_string(vertex.first) +
                           "," + std::to_string(vertex.second) +
                           ") vanishes at sample point " +
                           std::to_string(point)),
        vertex(vertex),
        point(point) {}
  VertexId vertex;
  std::size_t point;
};

class NotLogCanonical : public std::runtime_error {
 public:
  NotLogCanonical(VertexId u, VertexId v, std::size_t first, std::size_t second)
      : std::runtime_error(
            "log-bracket of (" + std::to_string(u.first) + "," +
            std::to_string(u.second) + ") and (" + std::to_string(v.first) +
            "," + std::to_string(v.second) + ") differs between sample points " +
            std::to_string(first) + " and " + std::to_string(second)),
        u(u),
        v(v),
        first(first),
        second(second) {}
  VertexId u, v;
  std::size_t first, second;
};

// Matrix of the log-bracket constants {f_u, f_v} / (f_u f_v), rows and
// columns in vertices() order (mutable first, then frozen).
struct OmegaMatrix {
  std::vector<VertexId> ordering;
  RatMat entries;
};

inline OmegaMatrix omega(const ClusterSeed& seed,
                         const std::vector<RatMat>& sample_points) {
  if (sample_points.size() < 2)
    throw std::invalid_argument("omega: need at least two sample points");
  const DoubleBracket ctx(seed);
  const std::vector<VertexId> order = seed.vertices();
  const std::size_t m = order.size();

  OmegaMatrix result;
  result.ordering = order;
  result.entries = RatMat(m, m);

  bool first_point = true;
  std::size_t first_index = 0;
  for (std::size_t p = 0; p < sample_points.size(); ++p) {
    const RatMat& X = sample_points[p];
    std::vector<Rat> values(m);
    std::vector<RatMat> scaled_left, scaled_right, rc_left, rr_right;
    scaled_left.reserve(m);
    for (std::size_t u = 0; u < m; ++u) {
      values[u] = evaluate(seed, order[u].first, order[u].second, X);
      if (values[u] == 0) throw ZeroFunctionAtPoint(order[u], p);
      const RatMat g = ctx.restricted_grad(
          vertex_fn(order[u].first, order[u].second), X);
      scaled_left.push_back(g * X);
      scaled_right.push_back(X * g);
      rc_left.push_back(ctx.r_col().apply(scaled_left.back()));
      rr_right.push_back(ctx.r_row().apply(scaled_right.back()));
    }
    for (std::size_t u = 0; u < m; ++u)
      for (std::size_t v = 0; v < m; ++v) {
        const Rat w = (dot_trace(rc_left[u], scaled_left[v]) -
                       dot_trace(rr_right[u], scaled_right[v])) /
                      (values[u] * values[v]);
        if (first_point)
          result.entries(u, v) = w;
        else if (result.entries(u, v) != w)
          throw NotLogCanonical(order[u], order[v], first_index, p);
      }
    first_point = false;
  }
  return result;
}

}  // namespace bdcluster
