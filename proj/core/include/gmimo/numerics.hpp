#pragma once

#include <complex>

#include <Eigen/Dense>

namespace gmimo {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

struct HermitianEigen {
  RealVector eigenvalues;      // descending
  ComplexMatrix eigenvectors;  // column i pairs with eigenvalues(i)
};

struct SingularValueDecomposition {
  ComplexMatrix u;
  RealVector singular_values;  // descending, nonnegative
  ComplexMatrix v;
};

enum class SvdMode { kThin, kFull };

// Relative asymmetry ||A - A^H||_F / ||A||_F accepted by hermitian_eig.
inline constexpr double kHermitianTolerance = 1e-10;

// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
// Throws DimensionError for non-square or non-Hermitian input and
// NumericalError if the sweeps fail to converge.
HermitianEigen hermitian_eig(const ComplexMatrix& a);

// A = U diag(s) V^H. Thin mode returns min(m, n) columns in U and V; full mode
// returns square unitary U (m x m) and V (n x n).
SingularValueDecomposition svd(const ComplexMatrix& a, SvdMode mode = SvdMode::kThin);

// Orthonormal basis of the numerical null space of A. The numerical rank r is
// the smallest count whose discarded singular-value tail satisfies
// sqrt(sum_{i>r} s_i^2) <= tol * ||A||_F, which bounds ||A N||_F by the same
// quantity.
ComplexMatrix null_space(const ComplexMatrix& a, double tol);

// Uses default_rank_tolerance(a).
ComplexMatrix null_space(const ComplexMatrix& a);

// 1e-10 * max(rows, cols): relative counterpart of the usual
// eps * max(m, n) * s_max rank heuristic.
double default_rank_tolerance(const ComplexMatrix& a);

// Numerical rank under the same tail criterion as null_space.
Eigen::Index numerical_rank(const RealVector& singular_values, double tol);

bool all_finite(const ComplexMatrix& a);

}  // namespace gmimo
