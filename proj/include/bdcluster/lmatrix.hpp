#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "bdcluster/bd_triple.hpp"
#include "bdcluster/matrix.hpp"
#include "bdcluster/pair_graph.hpp"

namespace bdcluster {

enum class BlockKind { X, Y };

inline const char* to_string(BlockKind k) { return k == BlockKind::X ? "X" : "Y"; }

// One block of a glued matrix. Source intervals select rows/columns of the
// underlying n x n matrix of the given kind; placement intervals are the rows
// and columns the block occupies inside L (1-based). Dummy blocks pad the
// block list so that kinds alternate starting with X and ending with Y; they
// carry empty intervals ({1,0}) and no exit point.
struct BlockSpec {
  BlockKind kind = BlockKind::X;
  Interval source_rows{1, 0};
  Interval source_cols{1, 0};
  Interval placement_rows{1, 0};
  Interval placement_cols{1, 0};
  std::optional<std::pair<int, int>> exit_point;  // source coordinates

  bool dummy() const { return source_rows.len() <= 0; }
  int height() const { return std::max(source_rows.len(), 0); }
  int width() const { return std::max(source_cols.len(), 0); }
};

// Origin of one cell of L: entry (row, col) of X or of Y.
struct CellSource {
  BlockKind kind;
  int row, col;
  bool operator==(const CellSource&) const = default;
};

struct LMatrix {
  int n = 0;     // size of the underlying X and Y matrices
  int size = 0;  // L is size x size
  AltPath path;  // the defining walk through the pair graph
  std::vector<BlockSpec> blocks;

  const std::optional<CellSource>& cell(int r, int c) const {
    return grid_.at(static_cast<std::size_t>(r - 1) * size + (c - 1));
  }

  RatMat instantiate(const RatMat& X, const RatMat& Y) const {
    if (X.rows() != static_cast<std::size_t>(n) || !X.is_square() ||
        Y.rows() != static_cast<std::size_t>(n) || !Y.is_square())
      throw std::invalid_argument("LMatrix::instantiate: dimension mismatch");
    RatMat m(size, size);
    for (int r = 1; r <= size; ++r)
      for (int c = 1; c <= size; ++c)
        if (const auto& src = cell(r, c); src.has_value()) {
          const RatMat& source = src->kind == BlockKind::X ? X : Y;
          m(r - 1, c - 1) = source(src->row - 1, src->col - 1);
        }
    return m;
  }

  RatMat instantiate(const RatMat& X) const { return instantiate(X, X); }

  void fill_grid();  // defined below; called by assemble_L

 private:
  std::vector<std::optional<CellSource>> grid_;
};

namespace detail {

inline void check_alternating_path(const AltPath& path, const BDPair& pair) {
  const int n = pair.n();
  if (path.is_cycle || path.verts.size() < 2 || path.verts.size() % 2 != 0)
    throw std::invalid_argument("assemble_L: malformed path");
  for (std::size_t t = 0; t + 1 < path.verts.size(); ++t) {
    const GraphVertex a = path.verts[t], b = path.verts[t + 1];
    bool ok = true;
    if (t % 2 == 0) {
      ok = a.row == b.row && b.idx == (a.idx == n - a.idx ? a.idx : n - a.idx);
    } else if (a.row == GraphRow::Upper) {
      ok = b.row == GraphRow::Lower && pair.row.in_domain(a.idx) &&
           pair.row.gamma(a.idx) == b.idx;
    } else {
      ok = b.row == GraphRow::Upper && pair.col.in_image(a.idx) &&
           pair.col.gamma_inv(a.idx) == b.idx;
    }
    if (!ok) throw std::invalid_argument("assemble_L: malformed path");
  }
}

}  // namespace detail

inline void LMatrix::fill_grid() {
  grid_.assign(static_cast<std::size_t>(size) * size, std::nullopt);
  std::vector<bool> row_used(size + 1, false), col_used(size + 1, false);
  for (const BlockSpec& b : blocks) {
    if (b.dummy()) continue;
    for (int p = 0; p < b.height(); ++p)
      for (int q = 0; q < b.width(); ++q) {
        const int r = b.placement_rows.lo + p, c = b.placement_cols.lo + q;
        if (r < 1 || r > size || c < 1 || c > size)
          throw std::logic_error("LMatrix: block placed outside the matrix");
        auto& slot = grid_[static_cast<std::size_t>(r - 1) * size + (c - 1)];
        if (slot.has_value())
          throw std::logic_error("LMatrix: overlapping blocks");
        slot = CellSource{b.kind, b.source_rows.lo + p, b.source_cols.lo + q};
        row_used[r] = col_used[c] = true;
      }
    if (b.exit_point) {
      const int er = b.placement_rows.lo + (b.exit_point->first - b.source_rows.lo);
      const int ec = b.placement_cols.lo + (b.exit_point->second - b.source_cols.lo);
      if (er != ec) throw std::logic_error("LMatrix: exit point off the diagonal");
    }
  }
  for (int r = 1; r <= size; ++r)
    if (!row_used[r] || !col_used[r])
      throw std::logic_error("LMatrix: uncovered row or column");
}

// Builds the glued matrix defined by a maximal alternating path. Every
// horizontal edge of the path contributes a block: an upper edge i -> (n-i)
// gives the X rows [alpha, n] and columns [1, beta] with alpha, beta read off
// the row/column run structure, and a lower edge gives the Y rows [1, alpha']
// and columns [beta', n]. An inclined edge between two horizontal edges pins
// the relative position of their blocks: after a descent the Y block sits
// immediately to the left of the X block with the glued rows aligned, and
// after an ascent the X block sits immediately above the Y block with the
// glued columns aligned.
inline LMatrix assemble_L(const AltPath& path, const BDPair& pair) {
  detail::check_alternating_path(path, pair);
  const int n = pair.n();

  LMatrix L;
  L.n = n;
  L.path = path;

  struct Placed {
    BlockSpec spec;
    long long row_off = 0, col_off = 0;  // global = off + local, local 1-based
  };
  std::vector<Placed> placed;

  for (std::size_t t = 0; t < path.edge_count(); t += 2) {
    const GraphVertex tail = path.verts[t];
    const int i = tail.idx;
    BlockSpec b;
    if (tail.row == GraphRow::Upper) {
      b.kind = BlockKind::X;
      const int alpha = minus_closure(pair.row.domain(), n - i + 1) + 1;
      const int beta = plus_closure(pair.col.domain(), n, i);
      b.source_rows = {alpha, n};
      b.source_cols = {1, beta};
      b.exit_point = {{n - i + 1, 1}};
    } else {
      b.kind = BlockKind::Y;
      const int alpha_bar = plus_closure(pair.row.image(), n, i);
      const int beta_bar = minus_closure(pair.col.image(), n - i + 1) + 1;
      b.source_rows = {1, alpha_bar};
      b.source_cols = {beta_bar, n};
      b.exit_point = {{1, n - i + 1}};
    }
    placed.push_back({b, 0, 0});
  }

  for (std::size_t t = 1; t < path.edge_count(); t += 2) {
    const GraphVertex a = path.verts[t], b = path.verts[t + 1];
    Placed& prev = placed[(t - 1) / 2];
    Placed& next = placed[(t + 1) / 2];
    auto lrow = [](const BlockSpec& s, int p) { return p - s.source_rows.lo + 1; };
    auto lcol = [](const BlockSpec& s, int q) { return q - s.source_cols.lo + 1; };
    if (a.row == GraphRow::Upper) {
      // prev is the X block, next the Y block glued to its left.
      next.row_off = prev.row_off + lrow(prev.spec, a.idx) - lrow(next.spec, b.idx);
      next.col_off = prev.col_off - next.spec.width();
    } else {
      // prev is the Y block, next the X block glued on top of it.
      next.col_off = prev.col_off + lcol(prev.spec, a.idx) - lcol(next.spec, b.idx);
      next.row_off = prev.row_off - next.spec.height();
    }
  }

  long long min_row = 0, min_col = 0, max_row = 0, max_col = 0;
  bool first = true;
  for (const Placed& p : placed) {
    const long long r0 = p.row_off + 1, r1 = p.row_off + p.spec.height();
    const long long c0 = p.col_off + 1, c1 = p.col_off + p.spec.width();
    if (first) {
      min_row = r0, max_row = r1, min_col = c0, max_col = c1;
      first = false;
    } else {
      min_row = std::min(min_row, r0), max_row = std::max(max_row, r1);
      min_col = std::min(min_col, c0), max_col = std::max(max_col, c1);
    }
  }

  long long expected = 0;
  for (std::size_t t = 0; t < path.verts.size(); t += 2) expected += path.verts[t].idx;
  const long long height = max_row - min_row + 1, width = max_col - min_col + 1;
  if (height != width || height != expected)
    throw std::logic_error("assemble_L: glued blocks do not form the expected square");
  L.size = static_cast<int>(expected);

  for (Placed& p : placed) {
    const int r_off = static_cast<int>(p.row_off - min_row + 1);
    const int c_off = static_cast<int>(p.col_off - min_col + 1);
    p.spec.placement_rows = {r_off + 1, r_off + p.spec.height()};
    p.spec.placement_cols = {c_off + 1, c_off + p.spec.width()};
    L.blocks.push_back(p.spec);
  }

  if (L.blocks.front().kind == BlockKind::Y)
    L.blocks.insert(L.blocks.begin(), BlockSpec{BlockKind::X, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {}});
  if (L.blocks.back().kind == BlockKind::X)
    L.blocks.push_back(BlockSpec{BlockKind::Y, {1, 0}, {1, 0}, {1, 0}, {1, 0}, {}});

  L.fill_grid();
  return L;
}

}  // namespace bdcluster
