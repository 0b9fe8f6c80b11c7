#include "eei/applications.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "eei/construct.hpp"

namespace eei {

namespace {

double trace_posterior(const Matrix& direction, double t, const CovMatrix& s_z) {
  return gaussian_conditional_cov(CovMatrix::project(t * direction), s_z)
      .matrix()
      .trace();
}

}  // namespace

BroadcastInstance::BroadcastInstance(CovMatrix z1, CovMatrix z2, CovMatrix r_in,
                                     std::optional<CovMatrix> dir)
    : s_z1(std::move(z1)),
      s_z2(std::move(z2)),
      r(std::move(r_in)),
      direction(dir ? std::move(*dir) : r) {
  const Eigen::Index n = s_z1.dim();
  if (s_z2.dim() != n || r.dim() != n || direction.dim() != n) {
    throw Error(ErrorCode::kDimensionMismatch, "broadcast matrices differ in size");
  }
  if (!s_z1.is_positive_definite() || !s_z2.is_positive_definite()) {
    throw Error(ErrorCode::kNotPositiveDefinite,
                "receiver noise covariances must be positive definite");
  }
  if (!(r.matrix().trace() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "Tr{R} must be positive");
  }
  if (!(direction.matrix().trace() > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "search direction must be nonzero");
  }
}

BroadcastDesign design_private_message(const BroadcastInstance& inst) {
  const double target = inst.r.matrix().trace();
  const double ceiling = inst.s_z2.matrix().trace();
  if (target >= ceiling) {
    std::ostringstream msg;
    msg << "Tr{R} = " << target << " is not below Tr{Sigma_Z2} = " << ceiling;
    throw Error(ErrorCode::kThresholdUnreachable, msg.str());
  }
  const Matrix& dir = inst.direction.matrix();

  double lo = 0.0;
  double hi = 1.0;
  while (trace_posterior(dir, hi, inst.s_z2) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e15) {
      throw Error(ErrorCode::kThresholdUnreachable,
                  "posterior trace saturates below Tr{R} along the direction");
    }
  }
  int steps = 0;
  while (steps < 300 && hi - lo > 1e-14 * hi) {
    const double mid = 0.5 * (lo + hi);
    if (trace_posterior(dir, mid, inst.s_z2) < target) {
      lo = mid;
    } else {
      hi = mid;
    }
    ++steps;
  }
  const double t_star = 0.5 * (lo + hi);
  const CovMatrix s_x = CovMatrix::project(t_star * dir);
  const double rx1 = gaussian_conditional_cov(s_x, inst.s_z1).matrix().trace();
  const double rx2 = gaussian_conditional_cov(s_x, inst.s_z2).matrix().trace();
  if (rx1 > target + 1e-9) {
    std::ostringstream msg;
    msg << "receiver 1 posterior trace " << rx1 << " exceeds Tr{R} = " << target;
    throw Error(ErrorCode::kSeparationFailed, msg.str());
  }

  // With mu = 2 the K construction yields Z~1 = min(Z1, Z2) in the common
  // eigenbasis, i.e. Z~1 ⪯ Z1 and Z~1 ⪯ Z2.
  const ConstructionCertificate kc = construct_k(inst.s_z1, inst.s_z2, 2.0);
  const Matrix& k = kc.multiplier.matrix();
  const Matrix z1t = spd_inverse(spd_inverse(inst.s_z1.matrix()) + k);
  const CovMatrix s_z1t = CovMatrix::project(z1t);

  BroadcastDesign out{s_x, t_star, rx1, rx2, t_star, steps, kc.multiplier, s_z1t};
  out.trace_mse_rx1_tilde = gaussian_conditional_cov(s_x, s_z1t).matrix().trace();
  out.order_residual = std::min(min_eigenvalue(inst.s_z1.matrix() - z1t),
                                min_eigenvalue(inst.s_z2.matrix() - z1t));
  out.markov_residual = markov_residual(
      MarkovTriple(s_x, CovMatrix(s_x.matrix() + z1t, 1e-8),
                   CovMatrix(s_x.matrix() + inst.s_z1.matrix())));
  return out;
}

CovMatrix lmmse_matrix(const CovMatrix& s_x, const CovMatrix& s_z) {
  return gaussian_conditional_cov(s_x, s_z);
}

double mi_lower_bound(const CovMatrix& s_x, const CovMatrix& r) {
  if (!s_x.is_positive_definite() || !r.is_positive_definite()) {
    throw Error(ErrorCode::kSingularCovariance,
                "LMMSE bound needs positive definite Sigma_X and R");
  }
  const CovMatrix e = lmmse_matrix(s_x, r);
  return 0.5 * log_det_spd(s_x.matrix()) - 0.5 * log_det_spd(e.matrix());
}

double gaussian_mutual_information(const CovMatrix& s_x, const CovMatrix& s_z) {
  return 0.5 * log_det_spd(s_x.matrix() + s_z.matrix()) -
         0.5 * log_det_spd(s_z.matrix());
}

}  // namespace eei
