#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/matrix.hpp"
#include "bdcluster/pair_graph.hpp"
#include "bdcluster/poisson.hpp"
#include "bdcluster/seed.hpp"

namespace bdcluster {

class FrozenVertexError : public std::invalid_argument {
 public:
  explicit FrozenVertexError(VertexId v)
      : std::invalid_argument("mutate: vertex (" + std::to_string(v.first) +
                              "," + std::to_string(v.second) + ") is frozen"),
        vertex(v) {}
  VertexId vertex;
};

// Directed graph on the n x n vertex grid. Arrows carry a multiplicity:
// freshly built quivers only have simple arrows, but mutation can stack
// parallel ones. Opposite arrows never coexist and there are no loops.
struct Quiver {
  int n = 0;
  std::set<VertexId> frozen;
  std::map<std::pair<VertexId, VertexId>, int> arrows;

  bool is_frozen(VertexId v) const { return frozen.count(v) != 0; }
  bool is_mutable(VertexId v) const { return !is_frozen(v); }

  int arrow_count(VertexId from, VertexId to) const {
    auto it = arrows.find({from, to});
    return it == arrows.end() ? 0 : it->second;
  }
  // Signed arrow balance from -> to.
  int net(VertexId from, VertexId to) const {
    return arrow_count(from, to) - arrow_count(to, from);
  }
  int degree(VertexId v) const {
    int d = 0;
    for (const auto& [edge, mult] : arrows)
      if (edge.first == v || edge.second == v) d += mult;
    return d;
  }

  // All n^2 vertices, mutable first, then frozen, each group row-major;
  // the shared ordering for the exchange and log-bracket matrices.
  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    out.reserve(static_cast<std::size_t>(n) * n);
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 1; i <= n; ++i)
        for (int j = 1; j <= n; ++j)
          if (is_frozen({i, j}) == (pass == 1)) out.push_back({i, j});
    return out;
  }

  bool operator==(const Quiver&) const = default;
};

namespace detail {

// One neighbor slot of a grid vertex: the plain grid offset when it stays
// inside the grid, or the wrapped border image when the root-map condition
// holds; empty when the slot is absent.
inline std::optional<VertexId> quiver_slot(const BDPair& pair, int i, int j,
                                           int di, int dj) {
  const int n = pair.n();
  const int r = i + di, c = j + dj;
  const bool up = r < 1, down = r > n, left = c < 1, right = c > n;
  if (!up && !down && !left && !right) return VertexId{r, c};
  if (up && left) return std::nullopt;
  if (down && right) return std::nullopt;
  if (up) {
    if (!pair.col.in_image(j - 1)) return std::nullopt;
    return VertexId{n, pair.col.gamma_inv(j - 1) + (dj == 0 ? 1 : 0)};
  }
  if (left) {
    if (!pair.row.in_domain(i - 1)) return std::nullopt;
    return VertexId{pair.row.gamma(i - 1) + (di == 0 ? 1 : 0), n};
  }
  if (down) {
    const int root = j + dj - 1;
    if (!pair.col.in_domain(root)) return std::nullopt;
    return VertexId{1, pair.col.gamma(root) + 1};
  }
  const int root = i + di - 1;
  if (!pair.row.in_image(root)) return std::nullopt;
  return VertexId{pair.row.gamma_inv(root) + 1, 1};
}

}  // namespace detail

inline Quiver build_quiver(const ClusterSeed& seed) {
  const int n = seed.n();
  Quiver q;
  q.n = n;
  q.frozen = seed.frozen;

  auto add = [&q](VertexId from, VertexId to) {
    if (q.is_frozen(from) && q.is_frozen(to)) return;
    if (q.arrow_count(to, from) != 0)
      throw std::logic_error("build_quiver: opposite arrows collide");
    q.arrows[{from, to}] = 1;
  };

  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j) {
      const VertexId v{i, j};
      if (q.is_frozen(v)) continue;

      auto north = detail::quiver_slot(seed.pair, i, j, -1, 0);
      auto south_east = detail::quiver_slot(seed.pair, i, j, 1, 1);
      auto west = detail::quiver_slot(seed.pair, i, j, 0, -1);
      auto north_west = detail::quiver_slot(seed.pair, i, j, -1, -1);
      auto east = detail::quiver_slot(seed.pair, i, j, 0, 1);
      auto south = detail::quiver_slot(seed.pair, i, j, 1, 0);
      if (i == 1 && east && q.is_frozen(*east)) east.reset();
      if (j == 1 && south && q.is_frozen(*south)) south.reset();

      if (north) add(v, *north);
      if (south_east) add(v, *south_east);
      if (west) add(v, *west);
      if (north_west) add(*north_west, v);
      if (east) add(*east, v);
      if (south) add(*south, v);
    }
  return q;
}

inline Quiver build_quiver(const BDPair& pair) {
  return build_quiver(build_seed(pair));
}

// Integer exchange matrix: one row per mutable vertex, one column per
// vertex, both in the shared mutable-first ordering.
struct ExchangeMatrix {
  std::vector<VertexId> ordering;
  std::size_t mutable_count = 0;
  IntMat entries;
};

inline ExchangeMatrix exchange_matrix(const Quiver& q) {
  ExchangeMatrix b;
  b.ordering = q.vertices();
  b.mutable_count = b.ordering.size() - q.frozen.size();
  b.entries = IntMat(b.mutable_count, b.ordering.size());
  for (std::size_t u = 0; u < b.mutable_count; ++u)
    for (std::size_t v = 0; v < b.ordering.size(); ++v)
      b.entries(u, v) = q.net(b.ordering[u], b.ordering[v]);
  return b;
}

// Quiver mutation at a mutable vertex: complete every two-arrow path
// through it, cancel opposite arrows, then reverse the arrows at the
// vertex. Arrows between two frozen vertices are discarded.
inline Quiver mutate(const Quiver& q, VertexId v) {
  if (q.is_frozen(v)) throw FrozenVertexError(v);

  std::map<std::pair<VertexId, VertexId>, int> net = q.arrows;
  auto shift = [&net](VertexId from, VertexId to, int count) {
    int& fwd = net[{from, to}];
    int& bwd = net[{to, from}];
    fwd += count;
    const int cancel = std::min(fwd, bwd);
    if (cancel > 0) {
      fwd -= cancel;
      bwd -= cancel;
    }
  };

  for (const auto& [in_edge, in_mult] : q.arrows) {
    if (in_edge.second != v) continue;
    for (const auto& [out_edge, out_mult] : q.arrows) {
      if (out_edge.first != v) continue;
      if (q.is_frozen(in_edge.first) && q.is_frozen(out_edge.second)) continue;
      shift(in_edge.first, out_edge.second, in_mult * out_mult);
    }
  }

  Quiver result;
  result.n = q.n;
  result.frozen = q.frozen;
  for (const auto& [edge, mult] : net) {
    if (mult <= 0) continue;
    if (edge.first == v || edge.second == v)
      result.arrows[{edge.second, edge.first}] = mult;
    else
      result.arrows[edge] = mult;
  }
  return result;
}

class NotCompatible : public std::runtime_error {
 public:
  NotCompatible(std::size_t row, std::size_t col, Rat value)
      : std::runtime_error("compatibility: product entry (" +
                           std::to_string(row) + "," + std::to_string(col) +
                           ") is " + rat_to_string(value) +
                           " where it should make a scaled identity block"),
        row(row),
        col(col),
        value(std::move(value)) {}
  std::size_t row, col;
  Rat value;
};

// Checks B * Omega = [lambda 1 | 0] over the shared ordering and returns
// the common lambda.
inline Rat compatibility(const ExchangeMatrix& b, const OmegaMatrix& om) {
  if (b.ordering != om.ordering)
    throw std::invalid_argument("compatibility: orderings differ");
  const std::size_t m = b.ordering.size();
  const RatMat product = to_rational(b.entries) * om.entries;
  const Rat lambda = product(0, 0);
  for (std::size_t u = 0; u < b.mutable_count; ++u)
    for (std::size_t v = 0; v < m; ++v) {
      const Rat expected = (u == v) ? lambda : Rat(0);
      if (product(u, v) != expected) throw NotCompatible(u, v, product(u, v));
    }
  return lambda;
}

// DOT rendering with frozen vertices as boxes and mutable ones as circles.
inline std::string to_dot(const Quiver& q) {
  std::ostringstream out;
  out << "digraph quiver {\n";
  for (int i = 1; i <= q.n; ++i)
    for (int j = 1; j <= q.n; ++j) {
      const VertexId v{i, j};
      out << "  v" << i << "_" << j << " [label=\"(" << i << "," << j
          << ")\", shape=" << (q.is_frozen(v) ? "box" : "circle") << "];\n";
    }
  for (const auto& [edge, mult] : q.arrows)
    for (int t = 0; t < mult; ++t)
      out << "  v" << edge.first.first << "_" << edge.first.second << " -> v"
          << edge.second.first << "_" << edge.second.second << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace bdcluster
