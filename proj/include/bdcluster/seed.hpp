#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bdcluster/linalg.hpp"
#include "bdcluster/lmatrix.hpp"
#include "bdcluster/pair_graph.hpp"

namespace bdcluster {

class PeriodicPairError : public std::runtime_error {
 public:
  explicit PeriodicPairError(const std::string& msg) : std::runtime_error(msg) {}
};

// Selects which of the two trailing-minor families a diagonal vertex (i,i)
// refers to on the double: the one carved from X or the one carved from Y.
// The two agree after the substitution Y = X.
enum class DiagSide { X, Y };

struct VertexRef {
  int l_id = -1;  // index into ClusterSeed::ls
  int s = 0;      // the function is the trailing minor of that L at s
  bool operator==(const VertexRef&) const = default;
};

using VertexId = std::pair<int, int>;

struct ClusterSeed {
  BDPair pair;
  std::vector<LMatrix> ls;
  std::map<VertexId, VertexRef> index_map;  // off-diagonal vertices only
  std::set<VertexId> frozen;

  int n() const { return pair.n(); }

  const VertexRef& locate(int i, int j) const {
    auto it = index_map.find({i, j});
    if (it == index_map.end())
      throw std::out_of_range("ClusterSeed::locate: no such off-diagonal vertex");
    return it->second;
  }

  bool is_frozen(int i, int j) const { return frozen.count({i, j}) != 0; }

  int s_of(int i, int j) const { return i == j ? i : locate(i, j).s; }

  int degree(int i, int j) const {
    if (i == j) return n() - i + 1;
    const VertexRef& ref = locate(i, j);
    return ls[ref.l_id].size - ref.s + 1;
  }

  // All n^2 vertices: mutable ones first, then frozen ones, each group in
  // row-major order. This ordering is shared by every matrix indexed by
  // vertices (exchange matrix, bracket constants, weights).
  std::vector<VertexId> vertices() const {
    std::vector<VertexId> out;
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 1; i <= n(); ++i)
        for (int j = 1; j <= n(); ++j)
          if (is_frozen(i, j) == (pass == 1)) out.push_back({i, j});
    return out;
  }
};

inline ClusterSeed build_seed(const BDPair& pair) {
  const int n = pair.n();
  const PathDecomposition dec = decompose(build_pair_graph(pair));
  if (!dec.aperiodic())
    throw PeriodicPairError("build_seed: the pair graph contains an alternating cycle");

  ClusterSeed seed{pair, {}, {}, {}};
  for (const AltPath& p : dec.paths) seed.ls.push_back(assemble_L(p, pair));

  for (std::size_t l = 0; l < seed.ls.size(); ++l) {
    const LMatrix& L = seed.ls[l];
    for (int s = 1; s <= L.size; ++s) {
      const auto& src = L.cell(s, s);
      if (!src.has_value())
        throw std::logic_error("build_seed: empty diagonal cell");
      const bool below = src->row > src->col;
      if (src->row == src->col || (src->kind == BlockKind::X) != below)
        throw std::logic_error("build_seed: diagonal cell on the wrong side");
      auto [it, inserted] =
          seed.index_map.emplace(VertexId{src->row, src->col},
                                 VertexRef{static_cast<int>(l), s});
      if (!inserted)
        throw std::logic_error("build_seed: vertex met twice on the diagonals");
    }
  }
  if (seed.index_map.size() != static_cast<std::size_t>(n) * (n - 1))
    throw std::logic_error("build_seed: diagonals do not cover all vertices");

  seed.frozen.insert({1, 1});
  for (int j = 2; j <= n; ++j)
    if (!pair.col.in_image(j - 1)) seed.frozen.insert({1, j});
  for (int i = 2; i <= n; ++i)
    if (!pair.row.in_domain(i - 1)) seed.frozen.insert({i, 1});

  return seed;
}

// Value of the cluster function at a point (X, Y) of the double. With i = j
// the function is the trailing principal minor of X or of Y starting at row i,
// per `side`; otherwise it is the trailing minor of the instantiated L at the
// vertex's diagonal slot.
inline Rat evaluate(const ClusterSeed& seed, int i, int j, const RatMat& X,
                    const RatMat& Y, DiagSide side = DiagSide::X) {
  const int n = seed.n();
  if (X.rows() != static_cast<std::size_t>(n) || !X.is_square() ||
      Y.rows() != static_cast<std::size_t>(n) || !Y.is_square())
    throw std::invalid_argument("evaluate: dimension mismatch");
  if (i == j) {
    const RatMat& M = side == DiagSide::X ? X : Y;
    return trailing_minor(M, i);
  }
  const VertexRef& ref = seed.locate(i, j);
  return trailing_minor(seed.ls[ref.l_id].instantiate(X, Y), ref.s);
}

// Restriction to the diagonal Y = X.
inline Rat evaluate(const ClusterSeed& seed, int i, int j, const RatMat& X) {
  return evaluate(seed, i, j, X, X);
}

// Gradients with respect to X and Y, with the convention that entry (u,v) of
// a gradient is the partial derivative in the (v,u) entry of the argument.
// Each cell of the trailing submatrix contributes one adjugate entry to the
// gradient slot of its source entry.
inline std::pair<RatMat, RatMat> gradient(const ClusterSeed& seed, int i, int j,
                                          const RatMat& X, const RatMat& Y,
                                          DiagSide side = DiagSide::X) {
  const int n = seed.n();
  if (X.rows() != static_cast<std::size_t>(n) || !X.is_square() ||
      Y.rows() != static_cast<std::size_t>(n) || !Y.is_square())
    throw std::invalid_argument("gradient: dimension mismatch");
  RatMat gx(n, n), gy(n, n);
  if (i == j) {
    const RatMat& M = side == DiagSide::X ? X : Y;
    RatMat& g = side == DiagSide::X ? gx : gy;
    const RatMat adj = adjugate(M.block(i - 1, i - 1, n - i + 1, n - i + 1));
    for (int a = i; a <= n; ++a)
      for (int b = i; b <= n; ++b) g(b - 1, a - 1) = adj(b - i, a - i);
    return {gx, gy};
  }
  const VertexRef& ref = seed.locate(i, j);
  const LMatrix& L = seed.ls[ref.l_id];
  const int s = ref.s, N = L.size;
  const RatMat inst = L.instantiate(X, Y);
  const RatMat adj = adjugate(inst.block(s - 1, s - 1, N - s + 1, N - s + 1));
  for (int r = s; r <= N; ++r)
    for (int c = s; c <= N; ++c)
      if (const auto& src = L.cell(r, c); src.has_value()) {
        RatMat& g = src->kind == BlockKind::X ? gx : gy;
        g(src->col - 1, src->row - 1) += adj(c - s, r - s);
      }
  return {gx, gy};
}

}  // namespace bdcluster
