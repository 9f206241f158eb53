#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace spinfridge {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

/// Working representation of a block-diagonal matrix: one dense block per
/// basis partition element (a single block for the dense path).
using BlockMatrices = std::vector<Matrix>;

inline constexpr Complex kI{0.0, 1.0};

namespace pauli {
Matrix identity();
Matrix x();
Matrix y();
Matrix z();
}  // namespace pauli

/// Eigenvalues of a Hermitian matrix, ascending. Only the lower triangle is read.
RealVector hermitian_eigenvalues(const Matrix& m);

/// max_ij |m - m^dagger|
double hermiticity_defect(const Matrix& m);

Matrix kron(const Matrix& a, const Matrix& b);

/// Embed a single-site operator at register position `pos` (0 = most significant).
Matrix embed_site_operator(const Matrix& op, int pos, int num_sites);

/// Spectral norm (largest singular value).
double operator_norm(const Matrix& m);

/// Shannon-style entropy, -sum p ln p with 0 ln 0 := 0.
double entropy_of_spectrum(const RealVector& eigenvalues);

}  // namespace spinfridge
