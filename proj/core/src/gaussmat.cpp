#include "eei/gaussmat.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <sstream>
#include <vector>

namespace eei {

namespace {

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw Error(ErrorCode::kDimensionMismatch, msg.str());
  }
}

}  // namespace

// --- helpers ---------------------------------------------------------------

Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

SymEig sym_eig(const Matrix& m) {
  Eigen::SelfAdjointEigenSolver<Matrix> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw Error(ErrorCode::kNoConvergence, "symmetric eigensolver failed");
  }
  return {es.eigenvalues(), es.eigenvectors()};
}

double eig_scale(const Matrix& m) {
  if (m.size() == 0) return 1.0;
  const Vector ev = sym_eig(m).values;
  return std::max(1.0, ev.cwiseAbs().maxCoeff());
}

double min_eigenvalue(const Matrix& m) { return sym_eig(m).values.minCoeff(); }

Matrix project_psd(const Matrix& m) {
  const SymEig e = sym_eig(m);
  const Vector clipped = e.values.cwiseMax(0.0);
  return symmetrize(e.vectors * clipped.asDiagonal() * e.vectors.transpose());
}

bool is_positive_definite(const Matrix& m, double tol) {
  const Vector ev = sym_eig(m).values;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() > tol * scale;
}

Matrix spd_inverse(const Matrix& m, double tol) {
  if (!is_positive_definite(m, tol)) {
    throw Error(ErrorCode::kSingularCovariance,
                "matrix is singular or not positive definite");
  }
  Eigen::LDLT<Matrix> ldlt(symmetrize(m));
  Matrix inv = ldlt.solve(Matrix::Identity(m.rows(), m.cols()));
  return symmetrize(inv);
}

Matrix spd_sqrt(const Matrix& m) {
  const SymEig e = sym_eig(m);
  const Vector root = e.values.cwiseMax(0.0).cwiseSqrt();
  return symmetrize(e.vectors * root.asDiagonal() * e.vectors.transpose());
}

Matrix spd_inv_sqrt(const Matrix& m, double tol) {
  const SymEig e = sym_eig(m);
  const double scale = std::max(1.0, e.values.cwiseAbs().maxCoeff());
  if (e.values.minCoeff() <= tol * scale) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "inverse square root of a non-positive-definite matrix");
  }
  const Vector inv_root = e.values.cwiseSqrt().cwiseInverse();
  return symmetrize(e.vectors * inv_root.asDiagonal() *
                    e.vectors.transpose());
}

double log_det_spd(const Matrix& m, double tol) {
  const Vector ev = sym_eig(m).values;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() <= tol * scale) {
    throw Error(ErrorCode::kSingularCovariance,
                "log-determinant of a singular covariance");
  }
  return ev.array().log().sum();
}

// --- CovMatrix ---------------------------------------------------------------

CovMatrix::CovMatrix(const Matrix& entries, double psd_tol)
    : m_(symmetrize(entries)), psd_tol_(psd_tol) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "covariance must be a non-empty square matrix");
  }
  if (!m_.allFinite()) {
    throw Error(ErrorCode::kInvalidArgument, "covariance has non-finite entries");
  }
  if (psd_tol < 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "psd_tol must be nonnegative");
  }
  const Vector ev = sym_eig(m_).values;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  if (ev.minCoeff() < -psd_tol * scale) {
    std::ostringstream msg;
    msg << "matrix is not positive semidefinite (min eigenvalue "
        << ev.minCoeff() << ")";
    throw Error(ErrorCode::kNotPositiveSemidefinite, msg.str());
  }
}

CovMatrix CovMatrix::zero(Eigen::Index n) { return CovMatrix(Matrix::Zero(n, n)); }

CovMatrix CovMatrix::identity(Eigen::Index n) {
  return CovMatrix(Matrix::Identity(n, n));
}

CovMatrix CovMatrix::scalar(double variance) {
  return CovMatrix(Matrix::Constant(1, 1, variance));
}

CovMatrix CovMatrix::diagonal(const Vector& diag) {
  return CovMatrix(Matrix(diag.asDiagonal()));
}

CovMatrix CovMatrix::diagonal(std::initializer_list<double> diag) {
  Vector v(static_cast<Eigen::Index>(diag.size()));
  std::copy(diag.begin(), diag.end(), v.data());
  return diagonal(v);
}

CovMatrix CovMatrix::project(const Matrix& entries, double psd_tol) {
  return CovMatrix(project_psd(entries), psd_tol);
}

double CovMatrix::min_eigenvalue() const { return sym_eig(m_).values.minCoeff(); }

double CovMatrix::max_eigenvalue() const { return sym_eig(m_).values.maxCoeff(); }

bool CovMatrix::is_positive_definite() const {
  return eei::is_positive_definite(m_, psd_tol_);
}

CovMatrix CovMatrix::scaled(double factor) const {
  return CovMatrix(factor * m_, psd_tol_);
}

MarkovTriple::MarkovTriple(CovMatrix y1, CovMatrix y2, CovMatrix y3)
    : s_y1(std::move(y1)), s_y2(std::move(y2)), s_y3(std::move(y3)) {
  require_same_dim(s_y1.matrix(), s_y2.matrix(), "MarkovTriple");
  require_same_dim(s_y1.matrix(), s_y3.matrix(), "MarkovTriple");
  if (!s_y3.is_positive_definite()) {
    throw Error(ErrorCode::kSingularCovariance,
                "MarkovTriple: covariance of Y3 must be invertible");
  }
}

// --- operations ---------------------------------------------------------------

bool psd_leq(const CovMatrix& a, const CovMatrix& b, double tol) {
  require_same_dim(a.matrix(), b.matrix(), "psd_leq");
  const Vector ev = sym_eig(b.matrix() - a.matrix()).values;
  const double scale = std::max(1.0, ev.cwiseAbs().maxCoeff());
  return ev.minCoeff() >= -tol * scale;
}

SimDiagResult simdiag(const CovMatrix& a, const CovMatrix& b) {
  require_same_dim(a.matrix(), b.matrix(), "simdiag");
  if (!a.is_positive_definite()) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "simdiag: first matrix must be positive definite");
  }
  const Matrix a_inv_sqrt = spd_inv_sqrt(a.matrix(), a.psd_tol());
  const SymEig e = sym_eig(a_inv_sqrt * b.matrix() * a_inv_sqrt);

  const Eigen::Index n = a.dim();
  std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](auto i, auto j) {
    return e.values(i) > e.values(j);
  });

  Matrix u(n, n);
  Vector d(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Eigen::Index src = order[static_cast<std::size_t>(k)];
    Vector col = e.vectors.col(src);
    for (Eigen::Index r = 0; r < n; ++r) {
      if (std::abs(col(r)) > 1e-12) {
        if (col(r) < 0.0) col = -col;
        break;
      }
    }
    u.col(k) = col;
    // b is PSD, so tiny negative rounding is clipped.
    d(k) = std::max(0.0, e.values(src));
  }
  return {a_inv_sqrt * u, d};
}

double gaussian_entropy(const CovMatrix& s) {
  const double n = static_cast<double>(s.dim());
  double log_det = 0.0;
  try {
    log_det = log_det_spd(s.matrix(), s.psd_tol());
  } catch (const Error&) {
    throw Error(ErrorCode::kSingularCovariance,
                "gaussian_entropy: covariance is singular");
  }
  return 0.5 * (n * std::log(2.0 * std::numbers::pi * std::numbers::e) +
                log_det);
}

CovMatrix gaussian_conditional_cov(const CovMatrix& s_x, const CovMatrix& s_z) {
  require_same_dim(s_x.matrix(), s_z.matrix(), "gaussian_conditional_cov");
  if (s_x.matrix().isZero(0.0)) return CovMatrix::zero(s_x.dim());
  const Matrix sum = s_x.matrix() + s_z.matrix();
  if (!is_positive_definite(sum, s_x.psd_tol())) {
    throw Error(ErrorCode::kSingularCovariance,
                "gaussian_conditional_cov: Sigma_X + Sigma_Z is singular");
  }
  const Matrix gain = Eigen::LDLT<Matrix>(sum).solve(s_x.matrix());
  return CovMatrix::project(s_x.matrix() - s_x.matrix() * gain);
}

double markov_residual(const MarkovTriple& t) {
  const Matrix& y1 = t.s_y1.matrix();
  const Matrix& y2 = t.s_y2.matrix();
  const Matrix& y3 = t.s_y3.matrix();
  // B = S2 S3^{-1} S1; S1 S3^{-1} S2 = B^T since every S is symmetric.
  const Matrix b = y2 * Eigen::LDLT<Matrix>(y3).solve(y1);
  const Matrix m = symmetrize(2.0 * y1 - b - b.transpose());
  return m.norm();
}

}  // namespace eei
