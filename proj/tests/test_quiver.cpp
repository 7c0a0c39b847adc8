#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cstddef>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/linalg.hpp"
#include "bdcluster/quiver.hpp"
#include "bdcluster/rng.hpp"
#include "support.hpp"

using namespace bdcluster;
using bdtest::cg_triple;
using bdtest::fig_triple;
using bdtest::gl5_pair;
using bdtest::make_triple;
using bdtest::random_point;
using bdtest::self_pair;
using bdtest::trivial_pair;

namespace {

std::vector<BDPair> pair_corpus() {
  std::vector<BDPair> out;
  for (int n = 2; n <= 5; ++n) out.push_back(trivial_pair(n));
  out.push_back(gl5_pair());
  out.push_back(self_pair(fig_triple()));
  for (int n = 3; n <= 5; ++n) out.push_back(self_pair(cg_triple(n)));
  out.push_back(BDPair::make(make_triple(5, {{2, 3}}), BDTriple::trivial(5)));
  out.push_back(BDPair::make(BDTriple::trivial(4), make_triple(4, {{3, 1}})));
  Rng rng(7);
  for (int n = 4; n <= 6; ++n)
    for (int t = 0; t < 3; ++t) out.push_back(bdtest::random_aperiodic_pair(rng, n));
  return out;
}

std::set<VertexId> out_neighbors(const Quiver& q, VertexId v) {
  std::set<VertexId> out;
  for (const auto& [edge, mult] : q.arrows)
    if (edge.first == v) out.insert(edge.second);
  return out;
}

std::set<VertexId> in_neighbors(const Quiver& q, VertexId v) {
  std::set<VertexId> out;
  for (const auto& [edge, mult] : q.arrows)
    if (edge.second == v) out.insert(edge.first);
  return out;
}

// Allowed total degrees by grid position, n >= 3.
std::set<int> degree_case_set(int n, VertexId v) {
  const auto [i, j] = v;
  const bool top = i == 1, bottom = i == n, left = j == 1, right = j == n;
  if (top && left) return {1, 2, 3};
  if (bottom && right) return {3, 4, 5};
  if ((top && right) || (bottom && left)) return {1, 2, 4, 5};
  if (top || left) return {2, 3, 5, 6};
  if (bottom || right) return {4, 5, 6};
  return {6};
}

// Standard matrix mutation in direction k (a mutable index, so also a
// column index under the shared ordering).
IntMat matrix_mutation(const IntMat& b, std::size_t k) {
  IntMat out(b.rows(), b.cols());
  for (std::size_t u = 0; u < b.rows(); ++u)
    for (std::size_t v = 0; v < b.cols(); ++v) {
      if (u == k || v == k)
        out(u, v) = -b(u, v);
      else
        out(u, v) = b(u, v) + (abs(b(u, k)) * b(k, v) + b(u, k) * abs(b(k, v))) / 2;
    }
  return out;
}

std::vector<RatMat> nonvanishing_points(const ClusterSeed& seed, Rng& rng,
                                        std::size_t count) {
  std::vector<RatMat> points;
  const int n = seed.n();
  while (points.size() < count) {
    RatMat X = random_point(rng, n);
    bool ok = true;
    for (int i = 1; i <= n && ok; ++i)
      for (int j = 1; j <= n && ok; ++j)
        if (evaluate(seed, i, j, X) == 0) ok = false;
    if (ok) points.push_back(std::move(X));
  }
  return points;
}

}  // namespace

TEST_CASE("reference neighborhoods wrap across the grid borders") {
  const Quiver q = build_quiver(gl5_pair());

  CHECK(out_neighbors(q, {1, 4}) ==
        std::set<VertexId>{{5, 2}, {2, 5}, {1, 3}});
  CHECK(in_neighbors(q, {1, 4}) == std::set<VertexId>{{5, 1}, {1, 5}, {2, 4}});

  CHECK(out_neighbors(q, {4, 5}) == std::set<VertexId>{{4, 4}, {3, 5}});
  CHECK(in_neighbors(q, {4, 5}) == std::set<VertexId>{{3, 4}, {3, 1}, {5, 5}});
}

TEST_CASE("trivial pair quiver is the plain grid with no wraps") {
  const int n = 5;
  const Quiver q = build_quiver(trivial_pair(n));
  for (int i = 2; i < n; ++i)
    for (int j = 2; j < n; ++j) {
      CHECK(out_neighbors(q, {i, j}) ==
            std::set<VertexId>{{i - 1, j}, {i + 1, j + 1}, {i, j - 1}});
      CHECK(in_neighbors(q, {i, j}) ==
            std::set<VertexId>{{i - 1, j - 1}, {i, j + 1}, {i + 1, j}});
    }
  for (const auto& [edge, mult] : q.arrows) {
    CHECK(mult == 1);
    const auto [fi, fj] = edge.first;
    const auto [ti, tj] = edge.second;
    CHECK(std::max(std::abs(fi - ti), std::abs(fj - tj)) == 1);
  }
}

TEST_CASE("vertex degrees and frozen sets follow the border tables") {
  for (const BDPair& pair : pair_corpus()) {
    const int n = pair.n();
    const ClusterSeed seed = build_seed(pair);
    const Quiver q = build_quiver(seed);

    CHECK(q.frozen == seed.frozen);
    CHECK(q.frozen.size() ==
          1 + static_cast<std::size_t>(pair.row.k() + pair.col.k()));
    CHECK(q.is_mutable({n, n}));

    for (const auto& [edge, mult] : q.arrows) {
      CHECK(mult == 1);
      CHECK(edge.first != edge.second);
      CHECK(q.arrow_count(edge.second, edge.first) == 0);
      CHECK((q.is_mutable(edge.first) || q.is_mutable(edge.second)));
    }

    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        const VertexId v{i, j};
        const int d = q.degree(v);
        CHECK(degree_case_set(n, v).count(d) == 1);
        if (q.is_frozen(v)) CHECK(d <= 3);
        const bool interior = i > 1 && i < n && j > 1 && j < n;
        if (interior) CHECK(d == 6);
        if (j == 1 && i > 1 && i < n && q.is_mutable(v))
          CHECK((d == 6) == (pair.row.in_domain(i - 1) && pair.row.in_domain(i)));
      }
  }
}

TEST_CASE("exchange matrix is skew on the mutable block and has full rank") {
  for (const BDPair& pair : pair_corpus()) {
    const Quiver q = build_quiver(pair);
    const ExchangeMatrix b = exchange_matrix(q);

    REQUIRE(b.ordering.size() ==
            static_cast<std::size_t>(pair.n()) * pair.n());
    REQUIRE(b.entries.rows() == b.mutable_count);
    for (std::size_t u = 0; u < b.mutable_count; ++u)
      for (std::size_t v = 0; v < b.mutable_count; ++v)
        CHECK(b.entries(u, v) == -b.entries(v, u));

    CHECK(rank(to_rational(b.entries)) == b.mutable_count);
  }

  const ExchangeMatrix b3 = exchange_matrix(build_quiver(trivial_pair(3)));
  CHECK(b3.mutable_count == 4);
  CHECK(rank(to_rational(b3.entries)) == 4);
}

TEST_CASE("quiver mutation is involutive and tracks matrix mutation") {
  for (const BDPair& pair :
       {trivial_pair(3), trivial_pair(4), gl5_pair(), self_pair(fig_triple())}) {
    const Quiver q = build_quiver(pair);
    const ExchangeMatrix b = exchange_matrix(q);

    for (std::size_t k = 0; k < b.mutable_count; ++k) {
      const VertexId v = b.ordering[k];
      const Quiver m = mutate(q, v);
      CHECK(mutate(m, v) == q);

      const ExchangeMatrix bm = exchange_matrix(m);
      CHECK(bm.ordering == b.ordering);
      CHECK(bm.entries == matrix_mutation(b.entries, k));
      for (std::size_t u = 0; u < bm.mutable_count; ++u)
        for (std::size_t w = 0; w < bm.mutable_count; ++w)
          CHECK(bm.entries(u, w) == -bm.entries(w, u));
    }
  }

  const Quiver q = build_quiver(trivial_pair(3));
  CHECK_THROWS_AS(mutate(q, {1, 1}), FrozenVertexError);

  // A second mutation step away from the seed exercises path completion
  // on top of arrows created by the first one.
  const Quiver m1 = mutate(q, {2, 2});
  const ExchangeMatrix b1 = exchange_matrix(m1);
  const auto pos = std::find(b1.ordering.begin(), b1.ordering.end(),
                             VertexId{3, 3}) - b1.ordering.begin();
  const Quiver m2 = mutate(m1, {3, 3});
  CHECK(exchange_matrix(m2).entries ==
        matrix_mutation(b1.entries, static_cast<std::size_t>(pos)));
}

TEST_CASE("exchange and log-bracket matrices are compatible with unit scale") {
  Rng rng(113);
  const std::vector<BDPair> pairs = {
      trivial_pair(2), trivial_pair(3), gl5_pair(), self_pair(fig_triple()),
      BDPair::make(make_triple(5, {{2, 3}}), BDTriple::trivial(5))};
  for (const BDPair& pair : pairs) {
    const ClusterSeed seed = build_seed(pair);
    const Quiver q = build_quiver(seed);
    const ExchangeMatrix b = exchange_matrix(q);
    const OmegaMatrix om = omega(seed, nonvanishing_points(seed, rng, 2));
    CHECK(compatibility(b, om) == Rat(1));
  }

  const ClusterSeed seed = build_seed(trivial_pair(3));
  const Quiver q = build_quiver(seed);
  const OmegaMatrix om = omega(seed, nonvanishing_points(seed, rng, 2));

  Quiver broken = q;
  REQUIRE(broken.arrow_count({2, 3}, {3, 2}) == 0);
  REQUIRE(broken.arrow_count({3, 2}, {2, 3}) == 0);
  broken.arrows[{{2, 3}, {3, 2}}] = 1;
  CHECK_THROWS_AS(compatibility(exchange_matrix(broken), om), NotCompatible);

  OmegaMatrix reordered = om;
  std::reverse(reordered.ordering.begin(), reordered.ordering.end());
  CHECK_THROWS_AS(compatibility(exchange_matrix(q), reordered),
                  std::invalid_argument);
}

TEST_CASE("dot rendering marks frozen boxes and mutable circles") {
  const std::string dot = to_dot(build_quiver(trivial_pair(2)));
  CHECK(dot.find("v1_1 [label=\"(1,1)\", shape=box];") != std::string::npos);
  CHECK(dot.find("v2_2 [label=\"(2,2)\", shape=circle];") != std::string::npos);
  CHECK(dot.find("v2_2 -> v1_2;") != std::string::npos);
  CHECK(dot.find("v1_1 -> v2_2;") != std::string::npos);
  CHECK(dot.rfind("digraph quiver {", 0) == 0);
}
