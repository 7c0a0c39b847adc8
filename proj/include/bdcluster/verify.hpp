#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/linalg.hpp"
#include "bdcluster/quiver.hpp"
#include "bdcluster/rng.hpp"
#include "bdcluster/seed.hpp"

namespace bdcluster {

class ZeroDenominator : public std::runtime_error {
 public:
  explicit ZeroDenominator(const std::string& msg) : std::runtime_error(msg) {}
};

class NonMonomialScaling : public std::runtime_error {
 public:
  explicit NonMonomialScaling(const std::string& msg) : std::runtime_error(msg) {}
};

namespace detail {

// Position of a vertex inside its trailing-minor chain: the glued matrix it
// lives on (l_id, or -1 for the principal chain of X itself), the diagonal
// slot s, and the chain length N.
struct ChainRef {
  int l_id;
  int s;
  int N;
};

inline ChainRef chain_ref(const ClusterSeed& seed, VertexId v) {
  if (v.first == v.second) return {-1, v.first, seed.n()};
  const VertexRef& ref = seed.locate(v.first, v.second);
  return {ref.l_id, ref.s, seed.ls[static_cast<std::size_t>(ref.l_id)].size};
}

inline RatMat chain_matrix(const ClusterSeed& seed, int l_id, const RatMat& X) {
  if (l_id < 0) return X;
  return seed.ls[static_cast<std::size_t>(l_id)].instantiate(X, X);
}

inline Rat det_drop_col(const RatMat& a, std::size_t col) {
  std::vector<std::size_t> rs(a.rows()), cs;
  std::iota(rs.begin(), rs.end(), std::size_t{0});
  for (std::size_t c = 0; c < a.cols(); ++c)
    if (c != col) cs.push_back(c);
  return det(a.submatrix(rs, cs));
}

// The bordered matrix whose column-deleted minor enters the explicit adjacent
// variable: deg(north) rows, deg(north)+1 columns. When the vertex's degree
// is below its north neighbor's, the slice is taken from the north chain,
// widened by one column on the left; the widening column falls off that chain
// exactly when the north function is the full determinant of its matrix, and
// is then spliced in from the vertex's own chain (the two chains share the
// trailing block, offset by one). Otherwise the slice is taken from the
// vertex's own chain.
inline RatMat bordered_matrix(const RatMat& home_mat, int s, int N,
                              const RatMat& up_mat, int s1) {
  const int deg = N - s + 1;
  const int deg1 = static_cast<int>(up_mat.rows()) - s1 + 1;
  RatMat a(static_cast<std::size_t>(deg1), static_cast<std::size_t>(deg1) + 1);
  if (deg < deg1) {
    if (s1 >= 2) {
      for (int r = 0; r < deg1; ++r)
        for (int c = 0; c <= deg1; ++c)
          a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
              up_mat(static_cast<std::size_t>(s1 - 1 + r), static_cast<std::size_t>(s1 - 2 + c));
    } else {
      for (int r = 0; r < deg1; ++r) {
        a(static_cast<std::size_t>(r), 0) =
            s - 1 + r <= N ? home_mat(static_cast<std::size_t>(s - 2 + r),
                                      static_cast<std::size_t>(s - 2))
                           : Rat(0);
        for (int c = 0; c < deg1; ++c)
          a(static_cast<std::size_t>(r), static_cast<std::size_t>(c) + 1) =
              up_mat(static_cast<std::size_t>(r), static_cast<std::size_t>(c));
      }
    }
  } else {
    for (int r = 0; r < deg1; ++r)
      for (int c = 0; c <= deg1; ++c)
        a(static_cast<std::size_t>(r), static_cast<std::size_t>(c)) =
            home_mat(static_cast<std::size_t>(s - 2 + r), static_cast<std::size_t>(s - 2 + c));
  }
  return a;
}

}  // namespace detail

// The two computations of the variable adjacent to a mutable vertex: the
// exchange quotient over the quiver arrows, and the explicit polynomial
// expression in minors of the neighboring chains. They agree identically.
struct AdjacentPair {
  VertexId vertex;
  Rat exchange_value;
  Rat explicit_value;
};

inline AdjacentPair adjacent_variable(const ClusterSeed& seed, const Quiver& q,
                                      VertexId v, const RatMat& X) {
  const int n = seed.n();
  if (X.rows() != static_cast<std::size_t>(n) || !X.is_square())
    throw std::invalid_argument("adjacent_variable: dimension mismatch");
  if (q.is_frozen(v)) throw FrozenVertexError(v);

  const auto [i, j] = v;
  const Rat fv = evaluate(seed, i, j, X);
  if (fv == 0)
    throw ZeroDenominator("adjacent_variable: function at (" + std::to_string(i) + "," +
                          std::to_string(j) + ") vanishes at the sample point");

  Rat prod_out(1), prod_in(1);
  for (const auto& [edge, mult] : q.arrows) {
    Rat* acc = nullptr;
    VertexId other;
    if (edge.first == v) {
      acc = &prod_out;
      other = edge.second;
    } else if (edge.second == v) {
      acc = &prod_in;
      other = edge.first;
    } else {
      continue;
    }
    const Rat f = evaluate(seed, other.first, other.second, X);
    for (int t = 0; t < mult; ++t) *acc *= f;
  }
  const Rat exchange = (prod_in + prod_out) / fv;

  const detail::ChainRef home = detail::chain_ref(seed, v);
  const auto north = detail::quiver_slot(seed.pair, i, j, -1, 0);
  const auto west = detail::quiver_slot(seed.pair, i, j, 0, -1);
  if (!north || !west)
    throw std::logic_error("adjacent_variable: mutable vertex lacks a north or west neighbor");
  const detail::ChainRef up = detail::chain_ref(seed, *north);
  const detail::ChainRef lt = detail::chain_ref(seed, *west);

  const RatMat home_mat = detail::chain_matrix(seed, home.l_id, X);
  const RatMat up_mat = detail::chain_matrix(seed, up.l_id, X);
  const RatMat lt_mat = detail::chain_matrix(seed, lt.l_id, X);

  const RatMat a = detail::bordered_matrix(home_mat, home.s, home.N, up_mat, up.s);
  const Rat det_a2 = detail::det_drop_col(a, 1);

  const Rat f_north = trailing_minor(up_mat, static_cast<std::size_t>(up.s));
  const Rat f_south =
      lt.s + 1 <= lt.N ? trailing_minor(lt_mat, static_cast<std::size_t>(lt.s) + 1) : Rat(1);

  Rat det_c12(0);
  const int deg_west = lt.N - lt.s + 1;
  if (deg_west >= 2) {
    const RatMat c = lt_mat.block(static_cast<std::size_t>(lt.s) - 1,
                                  static_cast<std::size_t>(lt.s) - 1,
                                  static_cast<std::size_t>(deg_west),
                                  static_cast<std::size_t>(deg_west));
    det_c12 = det(c.minor_matrix(0, 1));
  }

  return {v, exchange, f_south * det_a2 - f_north * det_c12};
}

namespace detail {

// Integer basis of the right kernel of a rational matrix, one generator per
// row: rational reduction, denominators cleared, content divided out, leading
// sign normalized.
inline IntMat integer_kernel(const RatMat& m) {
  RatMat a = m;
  const std::size_t rows = a.rows(), cols = a.cols();
  std::vector<std::size_t> pivot_col;
  std::size_t pr = 0;
  for (std::size_t c = 0; c < cols && pr < rows; ++c) {
    std::size_t p = pr;
    while (p < rows && a(p, c) == 0) ++p;
    if (p == rows) continue;
    a.swap_rows(p, pr);
    const Rat d = a(pr, c);
    for (std::size_t cc = c; cc < cols; ++cc) a(pr, cc) /= d;
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == pr || a(r, c) == 0) continue;
      const Rat f = a(r, c);
      for (std::size_t cc = c; cc < cols; ++cc) a(r, cc) -= f * a(pr, cc);
    }
    pivot_col.push_back(c);
    ++pr;
  }

  std::vector<bool> is_pivot(cols, false);
  for (std::size_t pc : pivot_col) is_pivot[pc] = true;

  std::vector<std::vector<Rat>> gens;
  for (std::size_t c = 0; c < cols; ++c) {
    if (is_pivot[c]) continue;
    std::vector<Rat> v(cols, Rat(0));
    v[c] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a(r, c);
    gens.push_back(std::move(v));
  }

  IntMat out(gens.size(), cols);
  for (std::size_t g = 0; g < gens.size(); ++g) {
    Int mult(1);
    for (const Rat& x : gens[g]) mult = boost::multiprecision::lcm(mult, denominator(x));
    Int content(0);
    std::vector<Int> row(cols);
    for (std::size_t c = 0; c < cols; ++c) {
      row[c] = numerator(Rat(gens[g][c] * mult));
      content = boost::multiprecision::gcd(content, row[c]);
    }
    if (content == 0) content = 1;
    Int sign(1);
    for (const Int& x : row)
      if (x != 0) {
        sign = x < 0 ? -1 : 1;
        break;
      }
    for (std::size_t c = 0; c < cols; ++c) out(g, c) = row[c] * sign / content;
  }
  return out;
}

inline Rat int_pow(long long base, long long e) {
  Rat r(1);
  const Rat b = e >= 0 ? Rat(base) : Rat(1, base);
  for (long long t = 0; t < (e >= 0 ? e : -e); ++t) r *= b;
  return r;
}

// The integer w with ratio = base^w, if one exists.
inline std::optional<long long> exact_power(long long base, const Rat& ratio) {
  if (ratio <= 0) return std::nullopt;
  Int num = numerator(ratio), den = denominator(ratio);
  if (num != 1 && den != 1) return std::nullopt;
  const bool up = den == 1;
  Int x = up ? num : den;
  long long w = 0;
  while (x > 1) {
    if (x % base != 0) return std::nullopt;
    x /= base;
    ++w;
  }
  return up ? w : -w;
}

inline RatMat scaling_diag(const IntMat& gens, std::size_t g, long long t) {
  RatMat d(gens.cols(), gens.cols());
  for (std::size_t i = 0; i < gens.cols(); ++i)
    d(i, i) = int_pow(t, static_cast<long long>(gens(g, i)));
  return d;
}

}  // namespace detail

// Exponent lattice of one side of the diagonal scaling action: integer
// vectors m with sum zero whose consecutive differences match across the root
// map. Its rank is the side's deficiency k.
inline IntMat toric_lattice(const BDTriple& t) {
  const int n = t.n();
  const std::size_t un = static_cast<std::size_t>(n);
  RatMat constraints(1 + t.domain().size(), un);
  for (std::size_t c = 0; c < un; ++c) constraints(0, c) = 1;
  std::size_t r = 1;
  for (int root : t.domain()) {
    const int img = t.gamma(root);
    constraints(r, static_cast<std::size_t>(root) - 1) += 1;
    constraints(r, static_cast<std::size_t>(root)) -= 1;
    constraints(r, static_cast<std::size_t>(img) - 1) -= 1;
    constraints(r, static_cast<std::size_t>(img)) += 1;
    ++r;
  }
  IntMat basis = detail::integer_kernel(constraints);
  if (basis.rows() != static_cast<std::size_t>(t.k()))
    throw std::logic_error("toric_lattice: kernel rank differs from the deficiency");
  return basis;
}

// Scaling weights of every seed function under the two-sided diagonal torus
// action: one row per vertex in the shared mutable-first ordering, one column
// per lattice generator (row side first). Each weight is extracted by exact
// evaluation at t = 2 and confirmed at t = 3.
struct ToricWeights {
  std::vector<VertexId> ordering;
  IntMat row_generators;
  IntMat col_generators;
  IntMat weights;
};

inline ToricWeights toric_weights(const ClusterSeed& seed, const Quiver& q,
                                  std::uint64_t rng_seed = 2026) {
  const int n = seed.n();
  ToricWeights tw;
  tw.ordering = q.vertices();
  tw.row_generators = toric_lattice(seed.pair.row);
  tw.col_generators = toric_lattice(seed.pair.col);
  const std::size_t kr = tw.row_generators.rows(), kc = tw.col_generators.rows();
  tw.weights = IntMat(tw.ordering.size(), kr + kc);

  Rng rng(rng_seed);
  RatMat X;
  std::vector<Rat> base;
  for (int trial = 0;; ++trial) {
    if (trial >= 64) throw std::runtime_error("toric_weights: no generic sample point found");
    X = random_int_matrix(rng, static_cast<std::size_t>(n), static_cast<std::size_t>(n), 6);
    base.clear();
    for (const auto& [i, j] : tw.ordering) base.push_back(evaluate(seed, i, j, X));
    if (std::none_of(base.begin(), base.end(), [](const Rat& x) { return x == 0; })) break;
  }

  for (std::size_t g = 0; g < kr + kc; ++g) {
    const bool row_side = g < kr;
    const IntMat& gens = row_side ? tw.row_generators : tw.col_generators;
    const std::size_t gi = row_side ? g : g - kr;
    const RatMat d2 = detail::scaling_diag(gens, gi, 2);
    const RatMat d3 = detail::scaling_diag(gens, gi, 3);
    const RatMat x2 = row_side ? d2 * X : X * d2;
    const RatMat x3 = row_side ? d3 * X : X * d3;
    for (std::size_t u = 0; u < tw.ordering.size(); ++u) {
      const auto [i, j] = tw.ordering[u];
      const auto w = detail::exact_power(2, evaluate(seed, i, j, x2) / base[u]);
      if (!w || evaluate(seed, i, j, x3) / base[u] != detail::int_pow(3, *w))
        throw NonMonomialScaling("toric_weights: function at (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") is not a scaling eigenvector of generator " +
                                 std::to_string(g));
      tw.weights(u, g) = *w;
    }
  }
  return tw;
}

// A point where one frozen function vanishes while every other seed function
// stays nonzero.
struct FrozenWitness {
  VertexId vertex;
  RatMat point;
};

namespace detail {

// Random point of the linear slice of matrices whose trailing chain block
// annihilates a fixed generic vector. Every point of the slice makes the
// vertex function vanish exactly; the slice is cut out by one linear equation
// in the entries of X per block row.
inline std::optional<RatMat> singular_slice_sample(const ClusterSeed& seed, ChainRef ref,
                                                   Rng& rng) {
  const int n = seed.n();
  const std::size_t un = static_cast<std::size_t>(n);
  const int d = ref.N - ref.s + 1;

  std::vector<long long> w(static_cast<std::size_t>(d));
  for (auto& x : w)
    do {
      x = rng.uniform(-9, 9);
    } while (x == 0);

  RatMat coeff(static_cast<std::size_t>(d), un * un);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) {
      std::pair<int, int> src;
      if (ref.l_id < 0) {
        src = {ref.s + r, ref.s + c};
      } else {
        const auto cell =
            seed.ls[static_cast<std::size_t>(ref.l_id)].cell(ref.s + r, ref.s + c);
        if (!cell) continue;
        src = {cell->row, cell->col};
      }
      coeff(static_cast<std::size_t>(r),
            static_cast<std::size_t>(src.first - 1) * un +
                static_cast<std::size_t>(src.second - 1)) += Rat(w[static_cast<std::size_t>(c)]);
    }

  const IntMat basis = integer_kernel(coeff);
  if (basis.rows() == 0) return std::nullopt;

  RatMat X(un, un);
  for (std::size_t g = 0; g < basis.rows(); ++g) {
    const long long coef = rng.uniform(-4, 4);
    if (coef == 0) continue;
    for (std::size_t e = 0; e < un * un; ++e) X(e / un, e % un) += Rat(Int(coef) * basis(g, e));
  }
  return X;
}

}  // namespace detail

inline std::vector<FrozenWitness> frozen_witnesses(const ClusterSeed& seed,
                                                   std::uint64_t rng_seed = 2026) {
  const int n = seed.n();
  Rng rng(rng_seed);

  auto others_nonzero = [&seed, n](VertexId v, const RatMat& X) {
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j)
        if (VertexId{i, j} != v && evaluate(seed, i, j, X) == 0) return false;
    return true;
  };

  std::vector<FrozenWitness> out;
  for (const VertexId& v : seed.frozen) {
    const detail::ChainRef ref = detail::chain_ref(seed, v);
    bool found = false;
    for (int t = 0; t < 48 && !found; ++t) {
      const auto X = detail::singular_slice_sample(seed, ref, rng);
      if (!X) continue;
      if (evaluate(seed, v.first, v.second, *X) != 0)
        throw std::logic_error("frozen_witnesses: slice point misses the vanishing locus");
      if (others_nonzero(v, *X)) {
        out.push_back({v, *X});
        found = true;
      }
    }
    if (!found)
      throw std::runtime_error("frozen_witnesses: no vanishing witness for vertex (" +
                               std::to_string(v.first) + "," + std::to_string(v.second) + ")");
  }
  return out;
}

}  // namespace bdcluster
