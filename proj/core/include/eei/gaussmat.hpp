#pragma once

// Dense symmetric-matrix primitives and Gaussian information quantities.
//
// Everything here works on small dense matrices (n up to a few hundred) and
// is a pure function of its arguments.

#include <Eigen/Dense>

#include <initializer_list>

#include "eei/errors.hpp"

namespace eei {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

inline constexpr double kDefaultPsdTol = 1e-10;

/// Symmetric positive-semidefinite covariance matrix.
///
/// The input is symmetrized on construction and rejected when its smallest
/// eigenvalue is below -psd_tol * max(1, largest |eigenvalue|). Matrices on
/// the boundary of the cone (exact zero eigenvalues) are accepted.
class CovMatrix {
 public:
  explicit CovMatrix(const Matrix& entries, double psd_tol = kDefaultPsdTol);

  static CovMatrix zero(Eigen::Index n);
  static CovMatrix identity(Eigen::Index n);
  static CovMatrix scalar(double variance);
  static CovMatrix diagonal(const Vector& diag);
  static CovMatrix diagonal(std::initializer_list<double> diag);

  /// Nearest PSD matrix in Frobenius norm (negative eigenvalues clipped).
  static CovMatrix project(const Matrix& entries,
                           double psd_tol = kDefaultPsdTol);

  Eigen::Index dim() const { return m_.rows(); }
  const Matrix& matrix() const { return m_; }
  double psd_tol() const { return psd_tol_; }
  double operator()(Eigen::Index i, Eigen::Index j) const { return m_(i, j); }

  double min_eigenvalue() const;
  double max_eigenvalue() const;
  bool is_positive_definite() const;

  CovMatrix scaled(double factor) const;

 private:
  Matrix m_;
  double psd_tol_;
};

/// Result of simultaneous diagonalization: Q^T A Q = I, Q^T B Q = diag(d).
struct SimDiagResult {
  Matrix q;
  Vector d;  // descending
};

/// Y1 -> Y2 -> Y3 candidate chain, given only through covariances.
struct MarkovTriple {
  MarkovTriple(CovMatrix y1, CovMatrix y2, CovMatrix y3);

  CovMatrix s_y1;
  CovMatrix s_y2;
  CovMatrix s_y3;
};

// --- linear-algebra helpers -------------------------------------------------

struct SymEig {
  Vector values;  // ascending
  Matrix vectors;
};

SymEig sym_eig(const Matrix& m);

Matrix symmetrize(const Matrix& m);

/// max(1, largest |eigenvalue|), the scale used by every relative tolerance.
double eig_scale(const Matrix& m);

double min_eigenvalue(const Matrix& m);

/// Clip negative eigenvalues to zero.
Matrix project_psd(const Matrix& m);

/// Smallest eigenvalue strictly above tol * eig_scale.
bool is_positive_definite(const Matrix& m, double tol = kDefaultPsdTol);

/// Inverse of a symmetric positive-definite matrix; throws
/// SingularCovariance when the matrix fails the PD test.
Matrix spd_inverse(const Matrix& m, double tol = kDefaultPsdTol);

/// Symmetric square root and inverse square root of a PD matrix.
Matrix spd_sqrt(const Matrix& m);
Matrix spd_inv_sqrt(const Matrix& m, double tol = kDefaultPsdTol);

/// ln det of a PD matrix; throws SingularCovariance otherwise.
double log_det_spd(const Matrix& m, double tol = kDefaultPsdTol);

// --- module operations ------------------------------------------------------

/// a ⪯ b, i.e. b - a is PSD up to tol * max(1, largest |eig(b - a)|).
bool psd_leq(const CovMatrix& a, const CovMatrix& b, double tol);

/// Simultaneously diagonalize a (PD) and b (PSD).
///
/// Whitens by a^{-1/2} and orthogonally diagonalizes a^{-1/2} b a^{-1/2};
/// Q = a^{-1/2} U. Columns are ordered by descending d, and each column of U
/// is signed so its first non-negligible component is positive.
SimDiagResult simdiag(const CovMatrix& a, const CovMatrix& b);

/// Differential entropy of N(0, s) in nats: 1/2 ln((2 pi e)^n det s).
double gaussian_entropy(const CovMatrix& s);

/// Posterior covariance of X given X + Z for independent Gaussians.
CovMatrix gaussian_conditional_cov(const CovMatrix& s_x, const CovMatrix& s_z);

/// Frobenius norm of 2 S1 - S2 S3^{-1} S1 - S1 S3^{-1} S2.
///
/// The matrix is the quadratic-form kernel that must vanish for Y1 and Y2 to
/// be conditionally independent given Y3 (jointly Gaussian case only).
double markov_residual(const MarkovTriple& t);

}  // namespace eei
