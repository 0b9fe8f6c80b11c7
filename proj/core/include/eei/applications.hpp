#pragma once

// Private-message broadcast covariance design and the LMMSE bound on
// mutual information.

#include <optional>

#include "eei/gaussmat.hpp"

namespace eei {

struct BroadcastInstance {
  /// direction defaults to r.
  BroadcastInstance(CovMatrix s_z1, CovMatrix s_z2, CovMatrix r,
                    std::optional<CovMatrix> direction = std::nullopt);

  CovMatrix s_z1;
  CovMatrix s_z2;
  CovMatrix r;  // only Tr{r} is binding
  CovMatrix direction;
};

struct BroadcastDesign {
  CovMatrix s_x_star;
  double t_star;
  double trace_mse_rx1;
  double trace_mse_rx2;
  double alpha;  // equal to t_star along the chosen ray
  int bisection_steps = 0;

  // Enhanced receiver 1: Z~1 = (Z1^{-1} + K)^{-1} with Z~1 ⪯ Z1, Z~1 ⪯ Z2.
  CovMatrix k_multiplier;
  CovMatrix s_z1_tilde;
  double trace_mse_rx1_tilde = 0.0;
  double order_residual = 0.0;   // min eig of Z1 - Z~1 and Z2 - Z~1
  double markov_residual = 0.0;  // (X*; X* + Z~1; X* + Z1)
};

/// Scale t* of the ray t * direction with Tr{Sigma_{X|Y2}} = Tr{r}.
/// Throws ThresholdUnreachable when Tr{r} >= Tr{Sigma_Z2} (or the bracket
/// cannot be found) and SeparationFailed when receiver 1 ends above the
/// threshold.
BroadcastDesign design_private_message(const BroadcastInstance& inst);

/// Sigma_X - Sigma_X (Sigma_X + Sigma_Z)^{-1} Sigma_X.
CovMatrix lmmse_matrix(const CovMatrix& s_x, const CovMatrix& s_z);

/// 1/2 ln|Sigma_X| - 1/2 ln|LMMSE(Sigma_X, r)|, which equals the Gaussian
/// channel mutual information 1/2 ln(|Sigma_X + r| / |r|).
double mi_lower_bound(const CovMatrix& s_x, const CovMatrix& r);

/// 1/2 ln(|Sigma_X + Sigma_Z| / |Sigma_Z|).
double gaussian_mutual_information(const CovMatrix& s_x, const CovMatrix& s_z);

}  // namespace eei
