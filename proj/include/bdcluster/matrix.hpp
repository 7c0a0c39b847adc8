#pragma once

#include <cassert>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <vector>

#include "bdcluster/rational.hpp"

namespace bdcluster {

// Dense row-major matrix over an exact scalar. Indices are 0-based here;
// domain code that speaks 1-based positions converts at its own boundary.
template <class T>
class Mat {
 public:
  Mat() : rows_(0), cols_(0) {}
  Mat(std::size_t r, std::size_t c, const T& fill = T(0)) : rows_(r), cols_(c), a_(r * c, fill) {}

  Mat(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ ? rows.begin()->size() : 0;
    a_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) throw std::invalid_argument("ragged matrix literal");
      for (const auto& v : row) a_.push_back(v);
    }
  }

  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  bool empty() const { return rows_ == 0 || cols_ == 0; }

  T& operator()(std::size_t r, std::size_t c) {
    assert(r < rows_ && c < cols_);
    return a_[r * cols_ + c];
  }
  const T& operator()(std::size_t r, std::size_t c) const {
    assert(r < rows_ && c < cols_);
    return a_[r * cols_ + c];
  }

  bool operator==(const Mat& o) const = default;

  bool is_square() const { return rows_ == cols_; }

  bool is_zero() const {
    for (const auto& v : a_)
      if (v != 0) return false;
    return true;
  }

  Mat transpose() const {
    Mat t(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t c = 0; c < cols_; ++c) t(c, r) = (*this)(r, c);
    return t;
  }

  Mat operator+(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] + o.a_[i];
    return s;
  }

  Mat operator-(const Mat& o) const {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    Mat s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] - o.a_[i];
    return s;
  }

  Mat operator-() const {
    Mat s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = -a_[i];
    return s;
  }

  Mat& operator+=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
    return *this;
  }

  Mat& operator-=(const Mat& o) {
    assert(rows_ == o.rows_ && cols_ == o.cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
    return *this;
  }

  Mat operator*(const Mat& o) const {
    assert(cols_ == o.rows_);
    Mat p(rows_, o.cols_);
    for (std::size_t r = 0; r < rows_; ++r)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& x = (*this)(r, k);
        if (x == 0) continue;
        for (std::size_t c = 0; c < o.cols_; ++c) p(r, c) += x * o(k, c);
      }
    return p;
  }

  Mat operator*(const T& x) const {
    Mat s(rows_, cols_);
    for (std::size_t i = 0; i < a_.size(); ++i) s.a_[i] = a_[i] * x;
    return s;
  }

  T trace() const {
    assert(is_square());
    T t(0);
    for (std::size_t i = 0; i < rows_; ++i) t += (*this)(i, i);
    return t;
  }

  void swap_rows(std::size_t r1, std::size_t r2) {
    for (std::size_t c = 0; c < cols_; ++c) std::swap((*this)(r1, c), (*this)(r2, c));
  }

  // Submatrix by explicit index lists (0-based, in order, repeats allowed).
  Mat submatrix(const std::vector<std::size_t>& rs, const std::vector<std::size_t>& cs) const {
    Mat s(rs.size(), cs.size());
    for (std::size_t r = 0; r < rs.size(); ++r)
      for (std::size_t c = 0; c < cs.size(); ++c) s(r, c) = (*this)(rs[r], cs[c]);
    return s;
  }

  Mat block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    assert(r0 + nr <= rows_ && c0 + nc <= cols_);
    Mat s(nr, nc);
    for (std::size_t r = 0; r < nr; ++r)
      for (std::size_t c = 0; c < nc; ++c) s(r, c) = (*this)(r0 + r, c0 + c);
    return s;
  }

  void set_block(std::size_t r0, std::size_t c0, const Mat& b) {
    assert(r0 + b.rows() <= rows_ && c0 + b.cols() <= cols_);
    for (std::size_t r = 0; r < b.rows(); ++r)
      for (std::size_t c = 0; c < b.cols(); ++c) (*this)(r0 + r, c0 + c) = b(r, c);
  }

  Mat minor_matrix(std::size_t row, std::size_t col) const {
    assert(row < rows_ && col < cols_);
    Mat s(rows_ - 1, cols_ - 1);
    for (std::size_t r = 0, rr = 0; r < rows_; ++r) {
      if (r == row) continue;
      for (std::size_t c = 0, cc = 0; c < cols_; ++c) {
        if (c == col) continue;
        s(rr, cc) = (*this)(r, c);
        ++cc;
      }
      ++rr;
    }
    return s;
  }

 private:
  std::size_t rows_, cols_;
  std::vector<T> a_;
};

using RatMat = Mat<Rat>;
using IntMat = Mat<Int>;

// Tr(a*b) without forming the product.
inline Rat dot_trace(const RatMat& a, const RatMat& b) {
  assert(a.cols() == b.rows() && a.rows() == b.cols());
  Rat t(0);
  for (std::size_t r = 0; r < a.rows(); ++r)
    for (std::size_t k = 0; k < a.cols(); ++k) t += a(r, k) * b(k, r);
  return t;
}

inline RatMat to_rational(const IntMat& m) {
  RatMat r(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) r(i, j) = Rat(m(i, j));
  return r;
}

}  // namespace bdcluster
