#include <gtest/gtest.h>

#include <random>

#include "gmimo/errors.hpp"
#include "gmimo/numerics.hpp"
#include "test_support.hpp"

namespace gmimo {
namespace {

using testing::random_complex;
using testing::random_hermitian;
using testing::unitarity_error;

TEST(HermitianEig, IdentityHasUnitEigenvalues) {
  const HermitianEigen e = hermitian_eig(ComplexMatrix::Identity(3, 3));
  for (Eigen::Index i = 0; i < 3; ++i) EXPECT_DOUBLE_EQ(e.eigenvalues(i), 1.0);
  EXPECT_LE(unitarity_error(e.eigenvectors), 1e-12);
}

TEST(HermitianEig, DiagonalIsSortedDescending) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  a(1, 1) = 2.0;
  const HermitianEigen e = hermitian_eig(a);
  EXPECT_DOUBLE_EQ(e.eigenvalues(0), 2.0);
  EXPECT_DOUBLE_EQ(e.eigenvalues(1), 1.0);
  // Permuted identity up to a phase per column.
  EXPECT_NEAR(std::abs(e.eigenvectors(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 1)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(e.eigenvectors(0, 0)), 0.0, 1e-14);
}

TEST(HermitianEig, TraceEqualsEigenvalueSum) {
  std::mt19937_64 rng(6);
  const ComplexMatrix a = random_hermitian(6, rng);
  const HermitianEigen e = hermitian_eig(a);
  EXPECT_NEAR(a.trace().real(), e.eigenvalues.sum(), 1e-8);
}

TEST(HermitianEig, ReconstructsRandomHermitian) {
  std::mt19937_64 rng(11);
  for (Eigen::Index n : {1, 2, 5, 17, 40}) {
    const ComplexMatrix a = random_hermitian(n, rng);
    const HermitianEigen e = hermitian_eig(a);
    const ComplexMatrix rebuilt =
        e.eigenvectors * e.eigenvalues.cast<Complex>().asDiagonal() * e.eigenvectors.adjoint();
    EXPECT_LE((rebuilt - a).norm() / a.norm(), 1e-8) << "n=" << n;
    EXPECT_LE(unitarity_error(e.eigenvectors), 1e-8);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(e.eigenvalues(i - 1), e.eigenvalues(i));
  }
}

TEST(HermitianEig, RejectsNonSquareAndNonHermitian) {
  EXPECT_THROW(hermitian_eig(ComplexMatrix::Zero(2, 3)), DimensionError);
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  a(0, 1) = Complex(0.5, 0.0);
  EXPECT_THROW(hermitian_eig(a), DimensionError);
}

TEST(Svd, ZeroMatrix) {
  const SingularValueDecomposition d = svd(ComplexMatrix::Zero(2, 3));
  ASSERT_EQ(d.singular_values.size(), 2);
  EXPECT_EQ(d.singular_values(0), 0.0);
  EXPECT_EQ(d.singular_values(1), 0.0);
}

TEST(Svd, Identity) {
  const SingularValueDecomposition d = svd(ComplexMatrix::Identity(4, 4));
  for (Eigen::Index i = 0; i < 4; ++i) EXPECT_NEAR(d.singular_values(i), 1.0, 1e-15);
}

TEST(Svd, RankOneOuterProduct) {
  std::mt19937_64 rng(3);
  ComplexVector u = random_complex(4, 1, rng);
  ComplexVector v = random_complex(5, 1, rng);
  u *= 2.0 / u.norm();
  v *= 3.0 / v.norm();
  const SingularValueDecomposition d = svd(u * v.adjoint());
  // ||u v^H||_2 = ||u|| ||v|| = 6; every other singular value vanishes.
  EXPECT_NEAR(d.singular_values(0), 6.0, 1e-12);
  for (Eigen::Index i = 1; i < d.singular_values.size(); ++i) EXPECT_NEAR(d.singular_values(i), 0.0, 1e-12);
}

TEST(Svd, ReconstructionAndOrthonormality) {
  std::mt19937_64 rng(21);
  for (auto [m, n] : {std::pair<Eigen::Index, Eigen::Index>{3, 7}, {7, 3}, {12, 12}}) {
    const ComplexMatrix a = random_complex(m, n, rng);
    for (SvdMode mode : {SvdMode::kThin, SvdMode::kFull}) {
      const SingularValueDecomposition d = svd(a, mode);
      const Eigen::Index k = d.singular_values.size();
      const ComplexMatrix rebuilt =
          d.u.leftCols(k) * d.singular_values.cast<Complex>().asDiagonal() * d.v.leftCols(k).adjoint();
      EXPECT_LE((rebuilt - a).norm() / a.norm(), 1e-8);
      EXPECT_LE(unitarity_error(d.u), 1e-8);
      EXPECT_LE(unitarity_error(d.v), 1e-8);
    }
  }
}

TEST(Svd, AgreesWithEigenvaluesOfGram) {
  std::mt19937_64 rng(5);
  const ComplexMatrix a = random_complex(9, 6, rng);
  const SingularValueDecomposition d = svd(a);
  const HermitianEigen e = hermitian_eig(a.adjoint() * a);
  for (Eigen::Index i = 0; i < 6; ++i) {
    EXPECT_NEAR(d.singular_values(i), std::sqrt(std::max(0.0, e.eigenvalues(i))), 1e-7);
  }
}

TEST(NullSpace, SingularDiagonal) {
  ComplexMatrix a = ComplexMatrix::Zero(2, 2);
  a(0, 0) = 1.0;
  const ComplexMatrix n = null_space(a, 1e-12);
  ASSERT_EQ(n.cols(), 1);
  EXPECT_NEAR(std::abs(n(0, 0)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(n(1, 0)), 1.0, 1e-14);
}

TEST(NullSpace, FullRankSquareHasNone) {
  std::mt19937_64 rng(8);
  EXPECT_EQ(null_space(random_complex(5, 5, rng)).cols(), 0);
}

TEST(NullSpace, WideRandomMatrix) {
  std::mt19937_64 rng(13);
  const ComplexMatrix a = random_complex(2, 6, rng);
  const double tol = 1e-10;
  const ComplexMatrix n = null_space(a, tol);
  ASSERT_EQ(n.cols(), 4);
  EXPECT_LE((a * n).norm(), tol * a.norm());
  EXPECT_LE(unitarity_error(n), 1e-8);
}

TEST(NullSpace, ZeroRowsGiveIdentityAndBadTolThrows) {
  EXPECT_EQ(null_space(ComplexMatrix(0, 4)).cols(), 4);
  EXPECT_THROW(null_space(ComplexMatrix::Identity(2, 2), 0.0), ValidationError);
}

TEST(NumericalRank, TailCriterion) {
  RealVector s(3);
  s << 1.0, 1e-3, 1e-12;
  EXPECT_EQ(numerical_rank(s, 1e-10), 2);
  EXPECT_EQ(numerical_rank(s, 1e-2), 1);
  EXPECT_EQ(numerical_rank(RealVector::Zero(3), 1e-10), 0);
}

}  // namespace
}  // namespace gmimo
