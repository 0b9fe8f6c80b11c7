#include "eei/construct.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace eei {

namespace {

// Both branch formulas agree on the threshold, so ties take the zero branch.
constexpr double kThresholdTol = 1e-12;

void require_mu(double mu) {
  if (!(mu > 1.0) || !std::isfinite(mu)) {
    std::ostringstream msg;
    msg << "mu must exceed 1 (got " << mu << ")";
    throw Error(ErrorCode::kBadMu, msg.str());
  }
}

void require_pd(const CovMatrix& m, const char* name) {
  if (!m.is_positive_definite()) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                std::string(name) + " must be positive definite");
  }
}

void require_dims(const CovMatrix& a, const CovMatrix& b) {
  if (a.dim() != b.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "covariance dimensions differ");
  }
}

// Q^{-T} diag(v) Q^{-1} for Q^T a Q = I, using Q^{-T} = a Q.
Matrix from_q_coords(const Matrix& a, const Matrix& q, const Vector& v) {
  const Matrix aq = a * q;
  return symmetrize(aq * v.asDiagonal() * aq.transpose());
}

double spectral(const CovMatrix& m) { return std::max(0.0, m.max_eigenvalue()); }

double log_2pie() { return std::log(2.0 * std::numbers::pi * std::numbers::e); }

}  // namespace

EEIInstance::EEIInstance(double mu_in, CovMatrix s_w_in,
                         std::optional<CovMatrix> s_v_in, CovMatrix r_in)
    : mu(mu_in), s_w(std::move(s_w_in)), s_v(std::move(s_v_in)), r(std::move(r_in)) {
  require_mu(mu);
  require_dims(s_w, r);
  require_pd(s_w, "Sigma_W");
  require_pd(r, "R");
  if (s_v) {
    require_dims(s_w, *s_v);
    require_pd(*s_v, "Sigma_V");
  }
}

bool ConstructionCertificate::holds(double tol) const {
  return zero_product_residual <= tol * scale &&
         order_residual >= -tol * scale && markov_residual <= tol * scale;
}

double matched_alpha(double h_x, const CovMatrix& s_w) {
  require_pd(s_w, "Sigma_W");
  const double n = static_cast<double>(s_w.dim());
  const double log_det = log_det_spd(s_w.matrix());
  // h(alpha W) = n/2 (ln 2 pi e + ln alpha) + 1/2 ln det W
  return std::exp(2.0 * h_x / n - log_2pie() - log_det / n);
}

double f_alpha(double alpha, const EEIInstance& instance) {
  if (!(alpha > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be positive");
  }
  const double n = static_cast<double>(instance.dim());
  const double log_det = log_det_spd(instance.s_w.matrix());
  const double h_x = 0.5 * (n * (log_2pie() + std::log(alpha)) + log_det);
  const double h_y = 0.5 * (n * (log_2pie() + std::log(alpha + 1.0)) + log_det);
  return h_x - instance.mu * h_y;
}

double f_alpha_argmax(const EEIInstance& instance) {
  require_mu(instance.mu);
  return 1.0 / (instance.mu - 1.0);
}

double objective_thm3(const CovMatrix& s_x, const CovMatrix& s_w, double mu) {
  require_dims(s_x, s_w);
  if (!s_x.is_positive_definite()) {
    return -std::numeric_limits<double>::infinity();
  }
  return gaussian_entropy(s_x) -
         mu * gaussian_entropy(CovMatrix(s_x.matrix() + s_w.matrix()));
}

double objective_thm4(const CovMatrix& s_x, const CovMatrix& s_w,
                      const CovMatrix& s_v, double mu) {
  require_dims(s_x, s_w);
  require_dims(s_x, s_v);
  return gaussian_entropy(CovMatrix(s_x.matrix() + s_w.matrix())) -
         mu * gaussian_entropy(CovMatrix(s_x.matrix() + s_v.matrix()));
}

ConstructionCertificate construct_l(const CovMatrix& s_x, const CovMatrix& s_w,
                                    double mu) {
  require_mu(mu);
  require_dims(s_x, s_w);
  require_pd(s_x, "Sigma_X");
  require_pd(s_w, "Sigma_W");

  const SimDiagResult sd = simdiag(s_x, s_w);
  const Eigen::Index n = s_x.dim();
  const double m1 = mu - 1.0;

  Vector d_l(n), w_tilde(n), x_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = sd.d(i);
    if (d <= m1 + kThresholdTol) {
      d_l(i) = 0.0;
      w_tilde(i) = d;
    } else {
      d_l(i) = (d - m1) / (mu * (1.0 + d));
      w_tilde(i) = m1;
    }
    x_star(i) = w_tilde(i) / m1;
  }

  const Matrix& sx = s_x.matrix();
  const Matrix l = symmetrize(sd.q * d_l.asDiagonal() * sd.q.transpose());
  const Matrix s_wt = from_q_coords(sx, sd.q, w_tilde);
  const Matrix s_xs = from_q_coords(sx, sd.q, x_star);
  const Matrix s_xp = symmetrize(sx - s_xs);

  ConstructionCertificate cert{
      CovMatrix::project(l), CovMatrix::project(s_wt), CovMatrix::project(s_xs),
      CovMatrix::project(s_xp)};
  cert.scale = std::max({1.0, spectral(s_x), spectral(s_w)});
  cert.zero_product_residual =
      std::max((l * s_xp).norm(), (s_xp * l).norm());
  cert.order_residual =
      std::min({min_eigenvalue(sx - s_xs), min_eigenvalue(s_w.matrix() - s_wt),
                min_eigenvalue(l)});
  cert.markov_residual = markov_residual(MarkovTriple(
      CovMatrix(s_xp, 1e-8), CovMatrix(sx + s_wt, 1e-8), CovMatrix(sx + s_w.matrix())));
  return cert;
}

Domination dominating_gaussian_thm3(const CovMatrix& s_x, const CovMatrix& s_w,
                                    double mu) {
  ConstructionCertificate cert = construct_l(s_x, s_w, mu);
  const double gap =
      objective_thm3(cert.s_x_star, s_w, mu) - objective_thm3(s_x, s_w, mu);
  if (gap < -1e-8) {
    std::ostringstream msg;
    msg << "dominating Gaussian is worse than the input by " << -gap;
    throw Error(ErrorCode::kDominationFailed, msg.str());
  }
  CovMatrix s_x_star = cert.s_x_star;
  return {std::move(s_x_star), std::move(cert), gap};
}

ConstructionCertificate construct_k(const CovMatrix& s_w,
                                    const CovMatrix& s_v_tilde, double mu) {
  require_mu(mu);
  require_dims(s_w, s_v_tilde);
  require_pd(s_w, "Sigma_W");
  require_pd(s_v_tilde, "Sigma_V~");

  const SimDiagResult sd = simdiag(s_v_tilde, s_w);
  const Eigen::Index n = s_w.dim();
  const double inv_m1 = 1.0 / (mu - 1.0);

  Vector d_k(n), w_tilde(n), x_star(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double d = sd.d(i);
    if (d <= inv_m1 + kThresholdTol) {
      d_k(i) = 0.0;
      w_tilde(i) = d;
    } else {
      d_k(i) = (mu - 1.0) - 1.0 / d;
      w_tilde(i) = inv_m1;
    }
    x_star(i) = inv_m1 - w_tilde(i);
  }

  const Matrix& sv = s_v_tilde.matrix();
  const Matrix k = symmetrize(sd.q * d_k.asDiagonal() * sd.q.transpose());
  const Matrix s_wt = from_q_coords(sv, sd.q, w_tilde);
  const Matrix s_xs = from_q_coords(sv, sd.q, x_star);

  ConstructionCertificate cert{CovMatrix::project(k), CovMatrix::project(s_wt),
                               CovMatrix::project(s_xs), s_v_tilde};
  cert.scale = std::max({1.0, spectral(s_w), spectral(s_v_tilde)});
  cert.zero_product_residual = std::max((k * s_xs).norm(), (s_xs * k).norm());
  cert.order_residual =
      std::min({min_eigenvalue(s_w.matrix() - s_wt), min_eigenvalue(s_xs),
                min_eigenvalue(k)});
  cert.markov_residual = markov_residual(
      MarkovTriple(CovMatrix(s_xs, 1e-8), CovMatrix(s_xs + s_wt, 1e-8),
                   CovMatrix(s_xs + s_w.matrix(), 1e-8)));
  return cert;
}

Optimum eei_optimum_thm3(const EEIInstance& instance) {
  ConstructionCertificate cert = construct_l(instance.r, instance.s_w, instance.mu);
  const double obj = objective_thm3(cert.s_x_star, instance.s_w, instance.mu);
  CovMatrix s_x_star = cert.s_x_star;
  return Optimum{std::move(s_x_star), obj, std::move(cert)};
}

}  // namespace eei
