#pragma once

// Grid checks of the variational argument: first-variation (stationarity)
// residual with fitted multipliers, and the second-variation quadratic form.

#include <cstdint>
#include <vector>

#include "eei/grid_density.hpp"

namespace eei {

struct FirstVariationFit {
  double residual_rms;  // density-weighted RMS of the stationarity equation
  double alpha0;
  double alpha1;
  double gamma;
  double theta;
  double phi;
  double entropy_constraint;  // p = h(f_X), implied by the candidate
  double max_inconsistency;   // sup |f_X * f_V - f_Y|
};

/// Fits (alpha0, alpha1, gamma, theta, phi) by weighted least squares over
/// the (x, y) grid with weight f_X(x) f_V(y - x); lambda(y) is eliminated
/// through the f_Y equation. Throws InconsistentDensity when f_Y differs from
/// f_X * f_V by more than 1e-4 anywhere.
FirstVariationFit variational_first_fit(const GridDensity& fx,
                                        const GridDensity& fy,
                                        const GridDensity& fv, double mu);

double variational_first_residual(const GridDensity& fx, const GridDensity& fy,
                                  const GridDensity& fv, double mu);

/// Second-variation quadratic form
///   ∬ -(1 - a1) fV/fX hX^2 + 2 mu fV/fY hX hY - mu fX fV / fY^2 hY^2,
/// with the x- and y-marginal sums precomputed once per density triple.
class SecondVariation {
 public:
  SecondVariation(const GridDensity& fx, const GridDensity& fy,
                  const GridDensity& fv, double mu);

  /// hx on the fx grid, hy on the fy grid. Throws InvalidArgument when
  /// alpha1 < 1 - mu or the lengths do not match.
  double evaluate(const std::vector<double>& hx, const std::vector<double>& hy,
                  double alpha1) const;

  double mu() const { return mu_; }

 private:
  double kernel(std::size_t i, std::size_t j) const;

  GridDensity fx_;
  GridDensity fy_;
  GridDensity fv_;
  double mu_;
  std::vector<double> row_mass_;  // Σ_j w_j h fV(y_j - x_i)
  std::vector<double> col_mass_;  // Σ_i w_i h fX(x_i) fV(y_j - x_i)
  std::ptrdiff_t offset_ = 0;  // fV index of (y_0 - x_0) when grids align
  bool aligned_ = false;
};

double variational_second_form(const GridDensity& fx, const GridDensity& fy,
                               const GridDensity& fv, double mu,
                               const std::vector<double>& hx,
                               const std::vector<double>& hy, double alpha1);

/// Random admissible perturbation h = f p - f ∫ f p for a smooth random p
/// (four cosine modes in the standardized coordinate), so that ∫ h = 0.
/// Deterministic in (seed, index).
std::vector<double> admissible_perturbation(const GridDensity& f,
                                            std::uint64_t seed,
                                            std::uint64_t index);

/// Largest alpha1 for which the second variation stays nonpositive on
/// admissible perturbations around Gaussian f_X, f_V: 1 - mu rho^2 with
/// rho^2 = var_x / (var_x + var_v).
double second_variation_alpha1_max(double var_x, double var_v, double mu);

}  // namespace eei
