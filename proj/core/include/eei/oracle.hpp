#pragma once

// Independent numerical checks: quadrature-based inequality checks for 1-D
// non-Gaussian inputs and a random-search oracle over Gaussian inputs.

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eei/construct.hpp"
#include "eei/grid_density.hpp"

namespace eei {

struct VerificationReport {
  std::string check;
  std::vector<std::pair<std::string, double>> parameters;
  Eigen::Index n = 1;
  double mu = std::numeric_limits<double>::quiet_NaN();
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;  // positive when the claimed inequality holds
  double tol = 0.0;
  double quadrature_error = 0.0;
  std::int64_t trials = 0;
  std::uint64_t seed = 0;
  double elapsed_ms = 0.0;

  bool passed() const { return margin >= -tol; }
};

/// Scalar problem for check_eei. Without s2_v it is the single-noise form
/// h(X) - mu h(X + W).
struct ScalarEEI {
  double mu;
  double s2_w;
  std::optional<double> s2_v;
  double r;
};

/// h(X1 + X2) >= 1/2 ln(e^{2 h(X1)} + e^{2 h(X2)}); margin = lhs - rhs.
VerificationReport check_epi(const GridDensity& d1, const GridDensity& d2,
                             double tol = 1e-4);

/// h(X + W~ + W') - h(X + W~) against the same for Gaussian X of equal
/// variance; margin = lhs - rhs.
VerificationReport check_worst_noise(const GridDensity& d_x, double s2_wt,
                                     double s2_wp, double tol = 1e-4);

/// Objective of d_x against the constructed Gaussian optimum;
/// margin = rhs - lhs. Throws InfeasibleDensity when var(d_x) > r + 1e-6.
VerificationReport check_eei(const GridDensity& d_x, const ScalarEEI& inst,
                             double tol = 1e-3);

/// Best objective over `trials` random feasible Gaussian covariances against
/// the constructed optimum; margin = rhs - lhs. Deterministic in seed: each
/// trial draws from its own stream derived from (seed, trial index).
VerificationReport gaussian_search(const EEIInstance& instance,
                                   std::int64_t trials, std::uint64_t seed,
                                   unsigned threads = 0, double tol = 1e-6);

/// Random feasible covariance for trial `index` as used by gaussian_search.
CovMatrix sample_feasible(const CovMatrix& r, std::uint64_t seed,
                          std::uint64_t index);

/// Maximizer of a unimodal function on [lo, hi].
double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol = 1e-12, int max_iter = 1000);

std::uint64_t splitmix64(std::uint64_t x);

}  // namespace eei
