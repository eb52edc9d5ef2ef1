#include "gmimo/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

#include "gmimo/errors.hpp"

namespace gmimo {

namespace {

constexpr int kMaxJacobiSweeps = 100;

double off_diagonal_norm(const ComplexMatrix& a) {
  double sum = 0.0;
  for (Eigen::Index j = 0; j < a.cols(); ++j) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
      if (i != j) sum += std::norm(a(i, j));
    }
  }
  return std::sqrt(sum);
}

// Annihilates a(p, q) with the unitary G = diag-phase * real rotation * diag-phase^H
// acting on the (p, q) plane, accumulating G into v.
void jacobi_rotate(ComplexMatrix& a, ComplexMatrix& v, Eigen::Index p, Eigen::Index q) {
  const Complex apq = a(p, q);
  const double magnitude = std::abs(apq);
  if (magnitude == 0.0) return;

  const Complex phase = apq / magnitude;
  const double app = a(p, p).real();
  const double aqq = a(q, q).real();
  const double theta = (aqq - app) / (2.0 * magnitude);
  const double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;

  // Rotation [[c, s*phase], [-s*conj(phase), c]]. Products are spelled out
  // because std::complex multiplication goes through the slow NaN-aware path.
  const double sr = s * phase.real();
  const double si = s * phase.imag();
  const auto rotate = [c, sr, si](Complex& x, Complex& y, bool conjugate_phase) {
    const double pi = conjugate_phase ? -si : si;
    const double xr = x.real(), xi = x.imag(), yr = y.real(), yi = y.imag();
    // x' = c x - conj(sp) y, y' = sp x + c y  with sp = sr + i pi
    x = Complex(c * xr - (sr * yr + pi * yi), c * xi - (sr * yi - pi * yr));
    y = Complex(sr * xr - pi * xi + c * yr, sr * xi + pi * xr + c * yi);
  };

  const Eigen::Index n = a.rows();
  for (Eigen::Index k = 0; k < n; ++k) rotate(a(k, p), a(k, q), false);
  for (Eigen::Index k = 0; k < n; ++k) rotate(a(p, k), a(q, k), true);
  for (Eigen::Index k = 0; k < n; ++k) rotate(v(k, p), v(k, q), false);

  a(p, q) = 0.0;
  a(q, p) = 0.0;
  a(p, p) = a(p, p).real();
  a(q, q) = a(q, q).real();
}

}  // namespace

bool all_finite(const ComplexMatrix& a) {
  return std::all_of(a.data(), a.data() + a.size(),
                     [](const Complex& z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); });
}

HermitianEigen hermitian_eig(const ComplexMatrix& input) {
  if (input.rows() != input.cols()) {
    throw DimensionError("numerics", "hermitian_eig requires a square matrix, got " +
                                         std::to_string(input.rows()) + "x" + std::to_string(input.cols()));
  }
  if (!all_finite(input)) {
    throw NumericalError("numerics", "hermitian_eig input has non-finite entries");
  }
  const double scale = input.norm();
  const double asymmetry = (input - input.adjoint()).norm();
  if (asymmetry > kHermitianTolerance * scale) {
    throw DimensionError("numerics", "hermitian_eig input is not Hermitian (relative asymmetry " +
                                         std::to_string(scale > 0 ? asymmetry / scale : asymmetry) + ")");
  }

  const Eigen::Index n = input.rows();
  ComplexMatrix a = 0.5 * (input + input.adjoint());
  ComplexMatrix v = ComplexMatrix::Identity(n, n);

  const double target = static_cast<double>(std::max<Eigen::Index>(n, 1)) *
                        std::numeric_limits<double>::epsilon() * scale;
  bool converged = n <= 1 || scale == 0.0;
  for (int sweep = 0; sweep < kMaxJacobiSweeps && !converged; ++sweep) {
    for (Eigen::Index p = 0; p < n - 1; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        jacobi_rotate(a, v, p, q);
      }
    }
    converged = off_diagonal_norm(a) <= target;
  }
  if (!converged) {
    throw NumericalError("numerics", "Jacobi eigensolver did not converge");
  }

  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i).real() > a(j, j).real(); });

  HermitianEigen out{RealVector(n), ComplexMatrix(n, n)};
  for (Eigen::Index k = 0; k < n; ++k) {
    out.eigenvalues(k) = a(order[k], order[k]).real();
    out.eigenvectors.col(k) = v.col(order[k]);
  }
  return out;
}

SingularValueDecomposition svd(const ComplexMatrix& a, SvdMode mode) {
  if (!all_finite(a)) {
    throw NumericalError("numerics", "svd input has non-finite entries");
  }
  const unsigned options = mode == SvdMode::kFull ? (Eigen::ComputeFullU | Eigen::ComputeFullV)
                                                  : (Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (a.size() == 0) {
    const Eigen::Index m = a.rows();
    const Eigen::Index n = a.cols();
    if (mode == SvdMode::kFull) {
      return {ComplexMatrix::Identity(m, m), RealVector(0), ComplexMatrix::Identity(n, n)};
    }
    return {ComplexMatrix(m, 0), RealVector(0), ComplexMatrix(n, 0)};
  }
  Eigen::BDCSVD<ComplexMatrix> solver(a, options);
  return {solver.matrixU(), solver.singularValues(), solver.matrixV()};
}

double default_rank_tolerance(const ComplexMatrix& a) {
  return 1e-10 * static_cast<double>(std::max<Eigen::Index>({a.rows(), a.cols(), 1}));
}

Eigen::Index numerical_rank(const RealVector& singular_values, double tol) {
  const double total = singular_values.norm();
  if (total == 0.0) return 0;
  const double limit = tol * total;
  double tail = 0.0;
  Eigen::Index rank = singular_values.size();
  // Extend the discarded tail while its energy stays within the limit.
  while (rank > 0) {
    const double s = singular_values(rank - 1);
    if (std::sqrt(tail + s * s) > limit) break;
    tail += s * s;
    --rank;
  }
  return rank;
}

ComplexMatrix null_space(const ComplexMatrix& a, double tol) {
  if (!(tol > 0.0)) {
    throw ValidationError("numerics", "null_space tolerance must be positive");
  }
  const Eigen::Index n = a.cols();
  if (a.rows() == 0) return ComplexMatrix::Identity(n, n);
  const SingularValueDecomposition d = svd(a, SvdMode::kFull);
  const Eigen::Index rank = numerical_rank(d.singular_values, tol);
  return d.v.rightCols(n - rank);
}

ComplexMatrix null_space(const ComplexMatrix& a) { return null_space(a, default_rank_tolerance(a)); }

}  // namespace gmimo
