#include "eei/grid_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eei {

namespace {

constexpr double kLogFloor = 1e-300;

double trapezoid(const std::vector<double>& v, double step) {
  if (v.size() < 2) return 0.0;
  double s = 0.5 * (v.front() + v.back());
  for (std::size_t i = 1; i + 1 < v.size(); ++i) s += v[i];
  return s * step;
}

void require_grid(double lo, double hi, std::size_t points) {
  if (!(hi > lo) || !std::isfinite(lo) || !std::isfinite(hi)) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs finite lo < hi");
  }
  if (points < 3) {
    throw Error(ErrorCode::kInvalidArgument, "grid needs at least 3 points");
  }
}

}  // namespace

double normal_pdf(double x, double mean, double var) {
  const double z = x - mean;
  return std::exp(-0.5 * z * z / var) / std::sqrt(2.0 * std::numbers::pi * var);
}

GridDensity::GridDensity(double lo, double hi, std::vector<double> values)
    : lo_(lo), hi_(hi), values_(std::move(values)) {
  require_grid(lo_, hi_, values_.size());
  step_ = (hi_ - lo_) / static_cast<double>(values_.size() - 1);
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::kUnnormalizedDensity,
                  "density values must be finite and nonnegative");
    }
  }
  const double m = mass();
  if (std::abs(m - 1.0) > 1e-6) {
    std::ostringstream msg;
    msg << "density integrates to " << m << ", not 1";
    throw Error(ErrorCode::kUnnormalizedDensity, msg.str());
  }
}

GridDensity GridDensity::from_unnormalized(double lo, double hi,
                                           std::vector<double> values) {
  require_grid(lo, hi, values.size());
  const double step = (hi - lo) / static_cast<double>(values.size() - 1);
  const double m = trapezoid(values, step);
  if (!(m > 0.0) || !std::isfinite(m)) {
    throw Error(ErrorCode::kUnnormalizedDensity, "density has no mass");
  }
  for (double& v : values) v /= m;
  return GridDensity(lo, hi, std::move(values));
}

GridDensity GridDensity::tabulate(double lo, double hi, std::size_t points,
                                  const std::function<double(double)>& pdf) {
  require_grid(lo, hi, points);
  const double step = (hi - lo) / static_cast<double>(points - 1);
  std::vector<double> v(points);
  for (std::size_t i = 0; i < points; ++i) {
    v[i] = pdf(lo + static_cast<double>(i) * step);
  }
  return from_unnormalized(lo, hi, std::move(v));
}

GridDensity GridDensity::tabulate_step(double lo, double hi, double step,
                                       const std::function<double(double)>& pdf) {
  if (!(step > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "grid step must be positive");
  }
  require_grid(lo, hi, 3);
  const auto points = static_cast<std::size_t>(std::ceil((hi - lo) / step - 1e-9)) + 1;
  return tabulate(lo, lo + static_cast<double>(points - 1) * step,
                  std::max<std::size_t>(points, 3), pdf);
}

GridDensity GridDensity::gaussian(double mean, double var, std::size_t points) {
  if (!(var > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "variance must be positive");
  }
  const double half = 8.0 * std::sqrt(var);
  return tabulate(mean - half, mean + half, points,
                  [=](double x) { return normal_pdf(x, mean, var); });
}

GridDensity GridDensity::uniform(double a, double b, std::size_t points) {
  require_grid(a, b, points);
  return GridDensity(a, b, std::vector<double>(points, 1.0 / (b - a)));
}

GridDensity GridDensity::mixture(double w, double m1, double s1, double m2,
                                 double s2, std::size_t points) {
  if (!(w >= 0.0 && w <= 1.0) || !(s1 > 0.0) || !(s2 > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "mixture needs 0 <= w <= 1 and positive deviations");
  }
  const double lo = std::min(m1 - 8.0 * s1, m2 - 8.0 * s2);
  const double hi = std::max(m1 + 8.0 * s1, m2 + 8.0 * s2);
  return tabulate(lo, hi, points, [=](double x) {
    return w * normal_pdf(x, m1, s1 * s1) + (1.0 - w) * normal_pdf(x, m2, s2 * s2);
  });
}

double GridDensity::at(double x) const {
  if (x < lo_ || x > hi_) return 0.0;
  const double pos = (x - lo_) / step_;
  const auto i = static_cast<std::size_t>(pos);
  if (i + 1 >= values_.size()) return values_.back();
  const double t = pos - static_cast<double>(i);
  return (1.0 - t) * values_[i] + t * values_[i + 1];
}

double GridDensity::mass() const { return trapezoid(values_, step_); }

double GridDensity::mean() const {
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) s += weight(i) * x(i) * values_[i];
  return s * step_;
}

double GridDensity::variance() const {
  const double m = mean();
  double s = 0.0;
  for (std::size_t i = 0; i < size(); ++i) {
    const double z = x(i) - m;
    s += weight(i) * z * z * values_[i];
  }
  return s * step_;
}

EntropyEstimate entropy_quadrature(const GridDensity& d) {
  const std::vector<double>& v = d.values();
  const std::size_t n = v.size();
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    integrand[i] = v[i] > 0.0 ? -v[i] * std::log(std::max(v[i], kLogFloor)) : 0.0;
  }
  const double fine = trapezoid(integrand, d.step());

  // Every other node; an even point count drops the last node.
  std::vector<double> coarse_pts;
  coarse_pts.reserve(n / 2 + 1);
  for (std::size_t i = 0; i < n; i += 2) coarse_pts.push_back(integrand[i]);
  const double coarse = trapezoid(coarse_pts, 2.0 * d.step());
  return {fine + 0.0, std::abs(fine - coarse) / 3.0};  // + 0.0 drops a -0
}

GridDensity convolve_density(const GridDensity& d, double sigma2) {
  if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
    throw Error(ErrorCode::kInvalidArgument, "noise variance must be positive");
  }
  const double sd = std::sqrt(sigma2);
  const double h = d.step();
  if (h > sd / 4.0) {
    std::ostringstream msg;
    msg << "grid step " << h << " exceeds sd/4 = " << sd / 4.0;
    throw Error(ErrorCode::kGridTooCoarse, msg.str());
  }
  const auto ext = static_cast<std::size_t>(std::ceil(8.0 * sd / h));
  const auto reach = static_cast<std::ptrdiff_t>(std::ceil(12.0 * sd / h));
  std::vector<double> kernel(static_cast<std::size_t>(2 * reach + 1));
  for (std::ptrdiff_t m = -reach; m <= reach; ++m) {
    kernel[static_cast<std::size_t>(m + reach)] =
        normal_pdf(static_cast<double>(m) * h, 0.0, sigma2);
  }

  const std::size_t n = d.size();
  const auto out_n = static_cast<std::ptrdiff_t>(n + 2 * ext);
  std::vector<double> out(static_cast<std::size_t>(out_n), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double a = d.weight(i) * h * d[i];
    if (a == 0.0) continue;
    const auto centre = static_cast<std::ptrdiff_t>(i + ext);
    const std::ptrdiff_t k0 = std::max<std::ptrdiff_t>(0, centre - reach);
    const std::ptrdiff_t k1 = std::min<std::ptrdiff_t>(out_n - 1, centre + reach);
    for (std::ptrdiff_t k = k0; k <= k1; ++k) {
      out[static_cast<std::size_t>(k)] +=
          a * kernel[static_cast<std::size_t>(k - centre + reach)];
    }
  }
  const double lo = d.lo() - static_cast<double>(ext) * h;
  const double hi = lo + static_cast<double>(out_n - 1) * h;
  return GridDensity(lo, hi, std::move(out));
}

GridDensity convolve_densities(const GridDensity& a, const GridDensity& b) {
  const double h = a.step();
  const std::size_t na = a.size();
  const double lo = a.lo() + b.lo();

  if (std::abs(a.step() - b.step()) <= 1e-12 * h) {
    const std::size_t nb = b.size();
    std::vector<double> out(na + nb - 1, 0.0);
    for (std::size_t i = 0; i < na; ++i) {
      const double ai = a.weight(i) * a[i];
      if (ai == 0.0) continue;
      for (std::size_t j = 0; j < nb; ++j) out[i + j] += ai * b.weight(j) * b[j];
    }
    for (double& v : out) v *= h;
    const double hi = lo + static_cast<double>(out.size() - 1) * h;
    return GridDensity(lo, hi, std::move(out));
  }

  const auto out_n = static_cast<std::size_t>(
      std::ceil((a.hi() + b.hi() - lo) / h)) + 1;
  std::vector<double> out(out_n, 0.0);
  for (std::size_t k = 0; k < out_n; ++k) {
    const double y = lo + static_cast<double>(k) * h;
    double s = 0.0;
    for (std::size_t i = 0; i < na; ++i) s += a.weight(i) * a[i] * b.at(y - a.x(i));
    out[k] = s * h;
  }
  const double hi = lo + static_cast<double>(out_n - 1) * h;
  return GridDensity::from_unnormalized(lo, hi, std::move(out));
}

}  // namespace eei
