#include "sheafcalc/linalg.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>

namespace sheafcalc {

std::vector<std::size_t> rref_in_place(RatMatrix& m) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::size_t pivot = row;
    while (pivot < m.rows() && m(pivot, col) == Rational(0)) ++pivot;
    if (pivot == m.rows()) continue;
    if (pivot != row)
      for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m(row, j), m(pivot, j));
    const Rational inv_pivot = Rational(1) / m(row, col);
    for (std::size_t j = col; j < m.cols(); ++j) m(row, j) *= inv_pivot;
    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == row || m(i, col) == Rational(0)) continue;
      const Rational factor = m(i, col);
      for (std::size_t j = col; j < m.cols(); ++j) m(i, j) -= factor * m(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

std::size_t rank(const RatMatrix& m) {
  RatMatrix copy = m;
  return rref_in_place(copy).size();
}

RatMatrix kernel_basis(const RatMatrix& m) {
  RatMatrix r = m;
  const std::vector<std::size_t> pivots = rref_in_place(r);
  std::vector<bool> is_pivot(m.cols(), false);
  for (std::size_t p : pivots) is_pivot[p] = true;

  const std::size_t nullity = m.cols() - pivots.size();
  RatMatrix basis(m.cols(), nullity);
  std::size_t out = 0;
  for (std::size_t free_col = 0; free_col < m.cols(); ++free_col) {
    if (is_pivot[free_col]) continue;
    basis(free_col, out) = Rational(1);
    for (std::size_t i = 0; i < pivots.size(); ++i)
      basis(pivots[i], out) = -r(i, free_col);
    ++out;
  }
  return basis;
}

bool is_invertible(const RatMatrix& m) {
  return m.is_square() && rank(m) == m.rows();
}

RatMatrix inverse(const RatMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::NotInvertible, "inverse of non-square matrix");
  const std::size_t n = m.rows();
  RatMatrix aug(n, 2 * n);
  aug.set_block(0, 0, m);
  aug.set_block(0, n, RatMatrix::identity(n));
  const auto pivots = rref_in_place(aug);
  // Pivots fill columns 0..n-1 exactly when m is invertible.
  if (pivots.size() < n || pivots[n - 1] != n - 1)
    fail(ErrorCode::NotInvertible, "singular matrix");
  return aug.block(0, n, n, n);
}

namespace {

Eigen::MatrixXd to_eigen(const RealMatrix& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

bool nearly_symmetric(const RealMatrix& m) {
  if (!m.is_square()) return false;
  const double scale = 1.0 + max_abs(m);
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = i + 1; j < m.cols(); ++j)
      if (std::abs(m(i, j) - m(j, i)) > 1e-12 * scale) return false;
  return true;
}

}  // namespace

std::vector<std::complex<double>> spectrum(const RealMatrix& m) {
  if (!m.is_square()) fail(ErrorCode::ShapeMismatch, "spectrum of non-square matrix");
  std::vector<std::complex<double>> eigs;
  if (nearly_symmetric(m)) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      eigs.emplace_back(solver.eigenvalues()[i], 0.0);
  } else {
    Eigen::EigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
    if (solver.info() != Eigen::Success)
      fail(ErrorCode::NonConvergence, "eigensolver did not converge");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
      eigs.push_back(solver.eigenvalues()[i]);
  }
  std::sort(eigs.begin(), eigs.end(), [](const auto& a, const auto& b) {
    if (a.real() != b.real()) return a.real() < b.real();
    return a.imag() < b.imag();
  });
  return eigs;
}

double min_symmetric_eigenvalue(const RealMatrix& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m));
  if (solver.info() != Eigen::Success)
    fail(ErrorCode::NonConvergence, "symmetric eigensolver did not converge");
  return solver.eigenvalues().minCoeff();
}

}  // namespace sheafcalc
