#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "eei/gaussmat.hpp"
#include "support.hpp"

using namespace eei;
using eei::testing::random_pd;

namespace {

Matrix m2(double a, double b, double c, double d) {
  Matrix m(2, 2);
  m << a, b, c, d;
  return m;
}

ErrorCode code_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no eei::Error thrown";
  return ErrorCode::kInvalidArgument;
}

}  // namespace

TEST(CovMatrix, SymmetrizesInput) {
  const CovMatrix c(m2(2, 1, 0, 2));
  EXPECT_DOUBLE_EQ(c(0, 1), 0.5);
  EXPECT_DOUBLE_EQ(c(1, 0), 0.5);
}

TEST(CovMatrix, RejectsIndefinite) {
  EXPECT_EQ(code_of([] { CovMatrix(m2(1, 2, 2, 1)); }), ErrorCode::kNotPositiveSemidefinite);
  EXPECT_EQ(code_of([] { CovMatrix(Matrix(2, 3)); }), ErrorCode::kDimensionMismatch);
}

TEST(CovMatrix, AcceptsBoundaryOfCone) {
  const CovMatrix c(m2(1, 1, 1, 1));
  EXPECT_NEAR(c.min_eigenvalue(), 0.0, 1e-15);
  EXPECT_FALSE(c.is_positive_definite());
}

TEST(CovMatrix, ProjectClipsNegativeEigenvalues) {
  const CovMatrix p = CovMatrix::project(m2(1, 2, 2, 1));
  // eigenvalues 3 and -1 -> keep 3 along (1,1)/sqrt2
  EXPECT_NEAR(p(0, 0), 1.5, 1e-12);
  EXPECT_NEAR(p(0, 1), 1.5, 1e-12);
}

TEST(PsdLeq, Examples) {
  EXPECT_TRUE(psd_leq(CovMatrix::identity(2), CovMatrix::identity(2).scaled(2.0), 1e-10));
  EXPECT_FALSE(psd_leq(CovMatrix::scalar(2), CovMatrix::scalar(1), 1e-10));
  const CovMatrix s(m2(2, 0.3, 0.3, 1));
  EXPECT_TRUE(psd_leq(s, s, 1e-10));
}

TEST(SimDiag, AlreadyDiagonal) {
  const SimDiagResult r = simdiag(CovMatrix::identity(2), CovMatrix::diagonal({2, 3}));
  EXPECT_NEAR(r.d(0), 3.0, 1e-14);
  EXPECT_NEAR(r.d(1), 2.0, 1e-14);
  EXPECT_NEAR(std::abs(r.q(1, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::abs(r.q(0, 1)), 1.0, 1e-14);
}

TEST(SimDiag, Whitening) {
  const CovMatrix a = CovMatrix::diagonal({4, 1});
  const CovMatrix b = CovMatrix::identity(2);
  const SimDiagResult r = simdiag(a, b);
  // d sorted descending: (1, 1/4); Q = diag(1/2, 1) up to column order.
  EXPECT_NEAR(r.d(0), 1.0, 1e-14);
  EXPECT_NEAR(r.d(1), 0.25, 1e-14);
  EXPECT_NEAR(r.q(1, 0), 1.0, 1e-14);
  EXPECT_NEAR(r.q(0, 1), 0.5, 1e-14);
  EXPECT_NEAR((r.q.transpose() * a.matrix() * r.q - Matrix::Identity(2, 2)).norm(), 0, 1e-14);
}

TEST(SimDiag, RandomPairsReconstruct) {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + t % 5);
    const CovMatrix a = random_pd(rng, n), b = random_pd(rng, n);
    const SimDiagResult r = simdiag(a, b);
    const Matrix qa = r.q.transpose() * a.matrix() * r.q;
    const Matrix qb = r.q.transpose() * b.matrix() * r.q;
    EXPECT_LT((qa - Matrix::Identity(n, n)).cwiseAbs().maxCoeff(), 1e-8);
    Matrix off = qb;
    off.diagonal().setZero();
    EXPECT_LT(off.cwiseAbs().maxCoeff(), 1e-8);
    EXPECT_LT((qb.diagonal() - r.d).cwiseAbs().maxCoeff(), 1e-8);
    for (Eigen::Index i = 1; i < n; ++i) EXPECT_GE(r.d(i - 1), r.d(i));
    // Back-transform: a = Q^{-T} Q^{-1}, b = Q^{-T} diag(d) Q^{-1}.
    const Matrix qi = r.q.inverse();
    EXPECT_LT((qi.transpose() * r.d.asDiagonal() * qi - b.matrix()).norm(), 1e-9);
  }
}

TEST(SimDiag, SingularFirstArgument) {
  EXPECT_THROW(simdiag(CovMatrix::diagonal({1, 0}), CovMatrix::identity(2)), Error);
}

TEST(GaussianEntropy, Examples) {
  const double c = std::log(2 * std::numbers::pi * std::numbers::e);
  EXPECT_NEAR(gaussian_entropy(CovMatrix::scalar(1)), 0.5 * c, 1e-14);
  EXPECT_NEAR(gaussian_entropy(CovMatrix::identity(2)), c, 1e-14);
  EXPECT_NEAR(gaussian_entropy(CovMatrix(m2(2, 1, 1, 2))), c + 0.5 * std::log(3.0), 1e-13);
  EXPECT_NEAR(gaussian_entropy(CovMatrix(m2(2, 1, 1, 2))), 3.387183, 1e-6);
}

TEST(GaussianEntropy, AdditiveOverBlocks) {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 50; ++t) {
    const CovMatrix a = random_pd(rng, 2), b = random_pd(rng, 3);
    Matrix blk = Matrix::Zero(5, 5);
    blk.topLeftCorner(2, 2) = a.matrix();
    blk.bottomRightCorner(3, 3) = b.matrix();
    EXPECT_NEAR(gaussian_entropy(CovMatrix(blk)), gaussian_entropy(a) + gaussian_entropy(b), 1e-12);
  }
}

TEST(GaussianEntropy, SingularThrows) {
  EXPECT_EQ(code_of([] { gaussian_entropy(CovMatrix::diagonal({1, 0})); }),
            ErrorCode::kSingularCovariance);
}

TEST(ConditionalCov, Examples) {
  EXPECT_NEAR(gaussian_conditional_cov(CovMatrix::scalar(1), CovMatrix::scalar(1))(0, 0), 0.5, 1e-15);
  EXPECT_NEAR(gaussian_conditional_cov(CovMatrix::scalar(0), CovMatrix::scalar(3))(0, 0), 0.0, 1e-15);
  const CovMatrix c = gaussian_conditional_cov(CovMatrix::diagonal({1, 4}), CovMatrix::identity(2));
  EXPECT_NEAR(c(0, 0), 0.5, 1e-14);
  EXPECT_NEAR(c(1, 1), 0.8, 1e-14);
  EXPECT_NEAR(c(0, 1), 0.0, 1e-14);
}

TEST(ConditionalCov, MonotoneInNoiseAndBoundedBySource) {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    const auto n = static_cast<Eigen::Index>(1 + t % 4);
    const CovMatrix x = random_pd(rng, n), z1 = random_pd(rng, n);
    const CovMatrix z2(z1.matrix() + random_pd(rng, n).matrix());
    const CovMatrix c1 = gaussian_conditional_cov(x, z1), c2 = gaussian_conditional_cov(x, z2);
    EXPECT_TRUE(psd_leq(c1, c2, 1e-9));
    EXPECT_TRUE(psd_leq(c2, x, 1e-9));
    EXPECT_TRUE(psd_leq(c1, z1, 1e-9));
  }
}

TEST(MarkovResidual, Examples) {
  EXPECT_DOUBLE_EQ(markov_residual(MarkovTriple(CovMatrix::scalar(0), CovMatrix::scalar(2),
                                                CovMatrix::scalar(3))),
                   0.0);
  EXPECT_NEAR(markov_residual(MarkovTriple(CovMatrix::scalar(0.8), CovMatrix::scalar(1.0),
                                           CovMatrix::scalar(1.0))),
              0.0, 1e-15);
  // Direct evaluation of |2 S1 - 2 S2 S1 / S3|: 2 - 4/3.
  EXPECT_NEAR(markov_residual(MarkovTriple(CovMatrix::scalar(1), CovMatrix::scalar(2),
                                           CovMatrix::scalar(3))),
              2.0 / 3.0, 1e-15);
  // 2 - 3/2 - 3/2
  EXPECT_NEAR(markov_residual(MarkovTriple(CovMatrix::scalar(1), CovMatrix::scalar(3),
                                           CovMatrix::scalar(2))),
              1.0, 1e-14);
}

TEST(MarkovResidual, SingularThirdCovariance) {
  EXPECT_THROW(MarkovTriple(CovMatrix::scalar(1), CovMatrix::scalar(1), CovMatrix::scalar(0)),
               Error);
}

TEST(LinearAlgebra, InverseSqrtAndLogDet) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    const CovMatrix a = random_pd(rng, 4);
    const Matrix s = spd_inv_sqrt(a.matrix());
    EXPECT_LT((s * a.matrix() * s - Matrix::Identity(4, 4)).norm(), 1e-10);
    EXPECT_NEAR(log_det_spd(a.matrix()), std::log(a.matrix().determinant()), 1e-10);
    EXPECT_LT((spd_inverse(a.matrix()) * a.matrix() - Matrix::Identity(4, 4)).norm(), 1e-10);
  }
}
