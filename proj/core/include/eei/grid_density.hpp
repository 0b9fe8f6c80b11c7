#pragma once

// Tabulated 1-D probability densities on a uniform grid.

#include <cstddef>
#include <functional>
#include <vector>

#include "eei/errors.hpp"

namespace eei {

inline constexpr std::size_t kDefaultGridPoints = 4001;

class GridDensity {
 public:
  /// Values at lo, lo + step, ..., hi. Trapezoidal mass must be 1 within
  /// 1e-6 and every value nonnegative.
  GridDensity(double lo, double hi, std::vector<double> values);

  /// Same grid, values rescaled to unit trapezoidal mass.
  static GridDensity from_unnormalized(double lo, double hi,
                                       std::vector<double> values);
  static GridDensity tabulate(double lo, double hi, std::size_t points,
                              const std::function<double(double)>& pdf);

  /// Grid with the given step starting at lo; the last node is the first one
  /// at or beyond hi. Used to put several densities on a common step.
  static GridDensity tabulate_step(double lo, double hi, double step,
                                   const std::function<double(double)>& pdf);

  /// N(mean, var) on mean ± 8 sd.
  static GridDensity gaussian(double mean, double var,
                              std::size_t points = kDefaultGridPoints);
  /// Uniform on exactly [a, b].
  static GridDensity uniform(double a, double b,
                             std::size_t points = kDefaultGridPoints);
  /// w N(m1, s1^2) + (1 - w) N(m2, s2^2); s1, s2 are standard deviations.
  static GridDensity mixture(double w, double m1, double s1, double m2,
                             double s2, std::size_t points = kDefaultGridPoints);

  double lo() const { return lo_; }
  double hi() const { return hi_; }
  double step() const { return step_; }
  std::size_t size() const { return values_.size(); }
  double x(std::size_t i) const { return lo_ + static_cast<double>(i) * step_; }
  double operator[](std::size_t i) const { return values_[i]; }
  const std::vector<double>& values() const { return values_; }

  /// Linear interpolation; 0 outside [lo, hi].
  double at(double x) const;

  /// Trapezoid weight of node i (1/2 at both ends, 1 elsewhere).
  double weight(std::size_t i) const {
    return (i == 0 || i + 1 == values_.size()) ? 0.5 : 1.0;
  }

  double mass() const;
  double mean() const;
  double variance() const;

 private:
  double lo_;
  double hi_;
  double step_;
  std::vector<double> values_;
};

double normal_pdf(double x, double mean, double var);

struct EntropyEstimate {
  double value;  // nats
  double error;  // Richardson estimate |I_h - I_2h| / 3
};

/// -∫ f ln f by the trapezoid rule, with f clipped below 1e-300 inside ln.
EntropyEstimate entropy_quadrature(const GridDensity& d);

/// Density of X + N(0, sigma2) on a grid widened by 8 sd on each side.
/// Throws GridTooCoarse when step > sd / 4.
GridDensity convolve_density(const GridDensity& d, double sigma2);

/// Density of X1 + X2. Exact product-trapezoid sum when the grids share a
/// step and node alignment; otherwise sums over a's nodes and interpolates b,
/// so b should then be the smooth one.
GridDensity convolve_densities(const GridDensity& a, const GridDensity& b);

}  // namespace eei
