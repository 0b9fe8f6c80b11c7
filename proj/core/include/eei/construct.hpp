#pragma once

// Explicit constructions behind the extremal entropy inequality
//
//   h(X + W) - mu h(X + V)  subject to  Cov(X) ⪯ R,
//
// with the matched-entropy scalars, the L and K multiplier constructions and
// the optimal Gaussian covariances.

#include <optional>

#include "eei/gaussmat.hpp"

namespace eei {

/// Problem statement. Without s_v this is the single-noise problem
/// h(X) - mu h(X + W).
struct EEIInstance {
  EEIInstance(double mu, CovMatrix s_w, std::optional<CovMatrix> s_v,
              CovMatrix r);

  Eigen::Index dim() const { return s_w.dim(); }

  double mu;
  CovMatrix s_w;
  std::optional<CovMatrix> s_v;
  CovMatrix r;
};

struct ConstructionCertificate {
  CovMatrix multiplier;    // L or K
  CovMatrix s_w_tilde;
  CovMatrix s_x_star;
  CovMatrix s_complement;  // Sigma_X' for L, Sigma_V~ for K
  double zero_product_residual = 0.0;
  double order_residual = 0.0;  // most negative eigenvalue over the claimed gaps
  double markov_residual = 0.0;
  double scale = 1.0;  // max(1, spectral norms of the inputs)

  /// All three residuals within tol * scale.
  bool holds(double tol = 1e-8) const;
};

/// alpha with gaussian_entropy(alpha * s_w) == h_x.
double matched_alpha(double h_x, const CovMatrix& s_w);

/// f(alpha) = h(alpha W) - mu h((alpha + 1) W).
double f_alpha(double alpha, const EEIInstance& instance);

/// Closed-form maximizer 1 / (mu - 1).
double f_alpha_argmax(const EEIInstance& instance);

/// F3(S) = h(S) - mu h(S + W); -inf when S is singular.
double objective_thm3(const CovMatrix& s_x, const CovMatrix& s_w, double mu);

/// F4(S) = h(S + W) - mu h(S + V).
double objective_thm4(const CovMatrix& s_x, const CovMatrix& s_w,
                      const CovMatrix& s_v, double mu);

/// L construction for a given input covariance (single-noise problem).
ConstructionCertificate construct_l(const CovMatrix& s_x, const CovMatrix& s_w,
                                    double mu);

struct Domination {
  CovMatrix s_x_star;
  ConstructionCertificate certificate;
  double gap;  // F3(Sigma_X*) - F3(Sigma_X), nonnegative
};

/// Gaussian Sigma_X* ⪯ Sigma_X that does at least as well as Sigma_X.
/// Throws DominationFailed if the gap is below -1e-8.
Domination dominating_gaussian_thm3(const CovMatrix& s_x, const CovMatrix& s_w,
                                    double mu);

/// K construction for the two-noise problem, given the split Sigma_V~.
ConstructionCertificate construct_k(const CovMatrix& s_w,
                                    const CovMatrix& s_v_tilde, double mu);

struct OptimumOptions {
  double fixed_point_tol = 1e-10;
  int fixed_point_iters = 200;
  double ascent_tol = 1e-9;
  int ascent_iters = 20000;
};

struct Optimum {
  CovMatrix s_x_star;
  double objective;
  ConstructionCertificate certificate;
  double stationarity = 0.0;  // projected-gradient norm at s_x_star
  int fixed_point_iterations = 0;
  bool fixed_point_converged = false;
  int ascent_iterations = 0;
};

/// Single-noise optimum: the L construction evaluated at Sigma_X = R.
Optimum eei_optimum_thm3(const EEIInstance& instance);

/// Two-noise optimum over 0 ⪯ Sigma ⪯ R.
///
/// Stage 1 runs the damped split iteration
///   V~ <- (1 - b) V~ + b (V - W~),  b = (mu - 1) / mu,
/// with W~ from construct_k. Stage 2 maximizes F4 by projected gradient in
/// R-whitened coordinates, where the feasible set is {0 ⪯ S ⪯ I} and the
/// projection is an eigenvalue clip to [0, 1]. The returned certificate is
/// built from the multiplier of the S ⪰ 0 constraint at the optimum.
Optimum eei_optimum_thm4(const EEIInstance& instance,
                         const OptimumOptions& options = {});

}  // namespace eei
