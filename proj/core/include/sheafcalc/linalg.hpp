#pragma once

#include <complex>
#include <vector>

#include "sheafcalc/matrix.hpp"

namespace sheafcalc {

/// Reduces `m` to reduced row echelon form in place and returns the pivot
/// column indices. Exact arithmetic only: rank is discontinuous, so there is
/// deliberately no floating-point overload.
std::vector<std::size_t> rref_in_place(RatMatrix& m);

std::size_t rank(const RatMatrix& m);

/// Basis of the right kernel, returned as matrix columns (cols() == nullity).
RatMatrix kernel_basis(const RatMatrix& m);

bool is_invertible(const RatMatrix& m);

/// Exact inverse; throws NotInvertible on singular input.
RatMatrix inverse(const RatMatrix& m);

/// Eigenvalues of a real square matrix via the float backend. Symmetric
/// input yields real eigenvalues in ascending order; otherwise eigenvalues
/// are sorted by (real, imag). Throws NonConvergence if the QR iteration
/// fails to settle.
std::vector<std::complex<double>> spectrum(const RealMatrix& m);

/// Smallest eigenvalue of a symmetric matrix (float backend).
double min_symmetric_eigenvalue(const RealMatrix& m);

}  // namespace sheafcalc
