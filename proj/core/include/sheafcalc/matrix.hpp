#pragma once

#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <vector>

#include "sheafcalc/errors.hpp"
#include "sheafcalc/rational.hpp"

namespace sheafcalc {

/// Dense row-major matrix over an exact or floating scalar. Sizes in this
/// library are small (stalk dimensions times cell counts), so no sparsity.
template <typename T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, T(0)) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& row : rows) {
      if (row.size() != cols_) fail(ErrorCode::ShapeMismatch, "ragged matrix literal");
      for (const auto& v : row) data_.push_back(v);
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1);
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }
  bool operator!=(const Matrix& other) const { return !(*this == other); }

  Matrix operator+(const Matrix& other) const {
    require_same_shape(other, "matrix add");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] + other.data_[i];
    return out;
  }

  Matrix operator-(const Matrix& other) const {
    require_same_shape(other, "matrix subtract");
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] - other.data_[i];
    return out;
  }

  Matrix operator-() const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = -data_[i];
    return out;
  }

  Matrix operator*(const Matrix& other) const {
    if (cols_ != other.rows_) fail(ErrorCode::ShapeMismatch, "matrix product shapes");
    Matrix out(rows_, other.cols_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t k = 0; k < cols_; ++k) {
        const T& a = (*this)(i, k);
        if (a == T(0)) continue;
        for (std::size_t j = 0; j < other.cols_; ++j)
          out(i, j) += a * other(k, j);
      }
    return out;
  }

  Matrix operator*(const T& scalar) const {
    Matrix out(rows_, cols_);
    for (std::size_t i = 0; i < data_.size(); ++i) out.data_[i] = data_[i] * scalar;
    return out;
  }

  std::vector<T> apply(const std::vector<T>& x) const {
    if (x.size() != cols_) fail(ErrorCode::ShapeMismatch, "matrix-vector shapes");
    std::vector<T> y(rows_, T(0));
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) y[i] += (*this)(i, j) * x[j];
    return y;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  /// Writes `block` with its top-left corner at (r, c).
  void set_block(std::size_t r, std::size_t c, const Matrix& block) {
    if (r + block.rows_ > rows_ || c + block.cols_ > cols_)
      fail(ErrorCode::ShapeMismatch, "block out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
      for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r + i, c + j) = block(i, j);
  }

  void add_block(std::size_t r, std::size_t c, const Matrix& block) {
    if (r + block.rows_ > rows_ || c + block.cols_ > cols_)
      fail(ErrorCode::ShapeMismatch, "block out of range");
    for (std::size_t i = 0; i < block.rows_; ++i)
      for (std::size_t j = 0; j < block.cols_; ++j) (*this)(r + i, c + j) += block(i, j);
  }

  Matrix block(std::size_t r, std::size_t c, std::size_t nr, std::size_t nc) const {
    if (r + nr > rows_ || c + nc > cols_)
      fail(ErrorCode::ShapeMismatch, "block out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r + i, c + j);
    return out;
  }

  bool is_zero() const {
    for (const auto& v : data_)
      if (!(v == T(0))) return false;
    return true;
  }

  bool is_square() const { return rows_ == cols_; }

  bool is_symmetric() const {
    if (!is_square()) return false;
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = i + 1; j < cols_; ++j)
        if (!((*this)(i, j) == (*this)(j, i))) return false;
    return true;
  }

  const std::vector<T>& data() const { return data_; }

 private:
  void require_same_shape(const Matrix& other, const char* what) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) fail(ErrorCode::ShapeMismatch, what);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

using RatMatrix = Matrix<Rational>;
using RealMatrix = Matrix<double>;

inline double scalar_to_double(const Rational& v) { return v.get_d(); }
inline double scalar_to_double(double v) { return v; }

/// Converts a scalar out of the exact store into the requested backend.
template <typename T>
T scalar_cast(const Rational& v);
template <>
inline Rational scalar_cast<Rational>(const Rational& v) { return v; }
template <>
inline double scalar_cast<double>(const Rational& v) { return v.get_d(); }

template <typename T>
Matrix<T> matrix_cast(const RatMatrix& m) {
  Matrix<T> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = scalar_cast<T>(m(i, j));
  return out;
}

inline RatMatrix matrix_from_double(const RealMatrix& m) {
  RatMatrix out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = rational_from_double(m(i, j));
  return out;
}

inline double max_abs(const RealMatrix& m) {
  double best = 0.0;
  for (const auto& v : m.data()) best = std::max(best, std::abs(v));
  return best;
}

inline double max_abs_diff(const RealMatrix& a, const RealMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::ShapeMismatch, "max_abs_diff shapes");
  double best = 0.0;
  for (std::size_t i = 0; i < a.data().size(); ++i)
    best = std::max(best, std::abs(a.data()[i] - b.data()[i]));
  return best;
}

inline double max_abs_diff(const RatMatrix& a, const RatMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    fail(ErrorCode::ShapeMismatch, "max_abs_diff shapes");
  Rational best(0);
  for (std::size_t i = 0; i < a.data().size(); ++i) {
    Rational d = abs(a.data()[i] - b.data()[i]);
    if (d > best) best = d;
  }
  return best.get_d();
}

/// Scale-aware float comparison: true iff the max-abs difference is at most
/// tol * (1 + max-abs entry of either side).
inline bool float_matrices_close(const RealMatrix& a, const RealMatrix& b,
                                 double tol = 1e-9) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const double scale = 1.0 + std::max(max_abs(a), max_abs(b));
  return max_abs_diff(a, b) <= tol * scale;
}

}  // namespace sheafcalc
