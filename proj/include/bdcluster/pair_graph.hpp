#pragma once

#include <algorithm>
#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "bdcluster/bd_triple.hpp"

namespace bdcluster {

struct BDPair {
  BDTriple row, col;

  static BDPair make(BDTriple r, BDTriple c) {
    if (r.n() != c.n()) throw std::invalid_argument("pair: mismatched sizes");
    return BDPair{std::move(r), std::move(c)};
  }
  int n() const { return row.n(); }
  BDPair opposite() const { return BDPair{col.opposite(), row.opposite()}; }
};

enum class GraphRow { Upper, Lower };

struct GraphVertex {
  GraphRow row;
  int idx;  // in [1, n-1]
  auto operator<=>(const GraphVertex&) const = default;
};

enum class EdgeKind { Horizontal, Down, Up };

struct GraphEdge {
  EdgeKind kind;
  GraphVertex from, to;
  auto operator<=>(const GraphEdge&) const = default;
};

// Directed graph on two copies of [1, n-1]: one horizontal edge i -> n-i for
// every i in each row (the two orientations of each pair are distinct edges;
// i = n/2 contributes a single loop), a down edge i -> gamma_r(i) for every
// source root of the row triple, and an up edge j -> gamma_c^{-1}(j) for
// every target root of the column triple.
struct PairGraph {
  BDPair pair;
  std::vector<GraphEdge> edges;
};

inline PairGraph build_pair_graph(const BDPair& p) {
  PairGraph g{p, {}};
  const int n = p.n();
  for (GraphRow row : {GraphRow::Upper, GraphRow::Lower}) {
    for (int i = 1; i <= n - 1; ++i)
      g.edges.push_back({EdgeKind::Horizontal, {row, i}, {row, n - i == i ? i : n - i}});
  }
  for (int i : p.row.domain())
    g.edges.push_back({EdgeKind::Down, {GraphRow::Upper, i}, {GraphRow::Lower, p.row.gamma(i)}});
  for (int j : p.col.image())
    g.edges.push_back({EdgeKind::Up, {GraphRow::Lower, j}, {GraphRow::Upper, p.col.gamma_inv(j)}});
  return g;
}

// A maximal alternating path (odd edge count, starts and ends with a
// horizontal edge) or an alternating cycle (even edge count). Vertices are
// listed in traversal order; for cycles the first vertex is repeated at the
// end.
struct AltPath {
  std::vector<GraphVertex> verts;
  bool is_cycle = false;

  std::size_t edge_count() const { return verts.empty() ? 0 : verts.size() - 1; }

  // Edge t connects verts[t] -> verts[t+1]; even t horizontal, odd inclined.
  GraphEdge edge(std::size_t t) const {
    const GraphVertex a = verts[t], b = verts[t + 1];
    if (t % 2 == 0) return {EdgeKind::Horizontal, a, b};
    return {a.row == GraphRow::Upper ? EdgeKind::Down : EdgeKind::Up, a, b};
  }
};

struct PathDecomposition {
  std::vector<AltPath> paths;
  std::vector<AltPath> cycles;
  bool aperiodic() const { return cycles.empty(); }
};

namespace detail {

struct HEdge {
  GraphRow row;
  int from;
  auto operator<=>(const HEdge&) const = default;
  int to(int n) const { return from == n - from ? from : n - from; }
};

// The horizontal edge that follows e through an inclined edge, if any.
inline std::optional<HEdge> h_succ(const BDPair& p, HEdge e) {
  const int head = e.to(p.n());
  if (e.row == GraphRow::Upper) {
    if (!p.row.in_domain(head)) return std::nullopt;
    return HEdge{GraphRow::Lower, p.row.gamma(head)};
  }
  if (!p.col.in_image(head)) return std::nullopt;
  return HEdge{GraphRow::Upper, p.col.gamma_inv(head)};
}

// The horizontal edge that precedes e through an inclined edge, if any.
inline std::optional<HEdge> h_pred(const BDPair& p, HEdge e) {
  const int tail = e.from;
  if (e.row == GraphRow::Upper) {
    if (!p.col.in_domain(tail)) return std::nullopt;
    const int below = p.col.gamma(tail);  // up edge below -> tail
    return HEdge{GraphRow::Lower, below == p.n() - below ? below : p.n() - below};
  }
  if (!p.row.in_image(tail)) return std::nullopt;
  const int above = p.row.gamma_inv(tail);  // down edge above -> tail
  return HEdge{GraphRow::Upper, above == p.n() - above ? above : p.n() - above};
}

}  // namespace detail

// Component analysis of the undirected one-triple graph: two rows of
// [1, n-1], one horizontal edge per pair {i, n-i} in each row (a loop at n/2
// for even n), and an inclined edge i (upper) -- gamma(i) (lower) per source
// root. The triple is aperiodic when every component is a path with at most
// one loop attached.
inline bool single_triple_aperiodic(const BDTriple& t) {
  const int n = t.n();
  auto vid = [&](GraphRow row, int i) {
    return (row == GraphRow::Upper ? 0 : n - 1) + (i - 1);
  };
  std::vector<std::vector<int>> adj(2 * (n - 1));
  std::vector<int> loops(2 * (n - 1), 0);
  int edge_pairs = 0;
  for (GraphRow row : {GraphRow::Upper, GraphRow::Lower}) {
    for (int i = 1; i <= n - 1; ++i) {
      if (i > n - i) continue;
      if (i == n - i) {
        loops[vid(row, i)]++;
      } else {
        adj[vid(row, i)].push_back(vid(row, n - i));
        adj[vid(row, n - i)].push_back(vid(row, i));
        ++edge_pairs;
      }
    }
  }
  for (int i : t.domain()) {
    adj[vid(GraphRow::Upper, i)].push_back(vid(GraphRow::Lower, t.gamma(i)));
    adj[vid(GraphRow::Lower, t.gamma(i))].push_back(vid(GraphRow::Upper, i));
  }
  (void)edge_pairs;
  std::vector<int> comp(2 * (n - 1), -1);
  int ncomp = 0;
  for (int s = 0; s < 2 * (n - 1); ++s) {
    if (comp[s] >= 0) continue;
    std::vector<int> stack{s};
    comp[s] = ncomp;
    while (!stack.empty()) {
      int v = stack.back();
      stack.pop_back();
      for (int w : adj[v])
        if (comp[w] < 0) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
    }
    ++ncomp;
  }
  std::vector<int> verts(ncomp, 0), degs(ncomp, 0), loopcount(ncomp, 0);
  for (int v = 0; v < 2 * (n - 1); ++v) {
    verts[comp[v]]++;
    degs[comp[v]] += static_cast<int>(adj[v].size());
    loopcount[comp[v]] += loops[v];
  }
  for (int c = 0; c < ncomp; ++c) {
    const int edges = degs[c] / 2;
    if (edges >= verts[c]) return false;  // contains a cycle
    if (loopcount[c] > 1) return false;   // path with two loops
  }
  return true;
}

inline PathDecomposition decompose(const PairGraph& g) {
  using detail::HEdge;
  const BDPair& p = g.pair;
  const int n = p.n();

  std::vector<HEdge> all;
  for (GraphRow row : {GraphRow::Upper, GraphRow::Lower})
    for (int i = 1; i <= n - 1; ++i) all.push_back({row, i});

  std::map<HEdge, bool> used;
  for (const HEdge& e : all) used[e] = false;

  auto walk = [&](HEdge start, bool cycle) {
    AltPath path;
    path.is_cycle = cycle;
    HEdge cur = start;
    path.verts.push_back({cur.row, cur.from});
    std::size_t guard = 8 * all.size() + 8;
    while (guard--) {
      used[cur] = true;
      path.verts.push_back({cur.row, cur.to(n)});
      auto next = detail::h_succ(p, cur);
      if (!next) {
        if (cycle) throw std::logic_error("decompose: cycle walk fell off");
        return path;
      }
      if (cycle && *next == start) {
        path.verts.push_back({start.row, start.from});  // close up
        return path;
      }
      path.verts.push_back({next->row, next->from});
      cur = *next;
    }
    throw std::logic_error("decompose: walk did not terminate");
  };

  PathDecomposition out;
  for (const HEdge& e : all) {
    if (used.at(e) || detail::h_pred(p, e)) continue;
    out.paths.push_back(walk(e, false));
  }
  for (const HEdge& e : all) {
    if (used.at(e)) continue;
    // every remaining horizontal edge has both neighbors: cycle territory
    out.cycles.push_back(walk(e, true));
  }

  auto key = [](const AltPath& a) { return a.verts; };
  std::sort(out.paths.begin(), out.paths.end(),
            [&](const AltPath& a, const AltPath& b) { return key(a) < key(b); });

  // canonical cycle start: lexicographically smallest horizontal tail
  for (AltPath& c : out.cycles) {
    std::vector<GraphVertex> v(c.verts.begin(), c.verts.end() - 1);  // drop repeat
    std::size_t best = 0;
    for (std::size_t t = 2; t < v.size(); t += 2)
      if (v[t] < v[best]) best = t;
    std::rotate(v.begin(), v.begin() + best, v.end());
    v.push_back(v.front());
    c.verts = std::move(v);
  }
  std::sort(out.cycles.begin(), out.cycles.end(),
            [&](const AltPath& a, const AltPath& b) { return key(a) < key(b); });
  return out;
}

}  // namespace bdcluster
