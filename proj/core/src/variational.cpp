#include "eei/variational.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "eei/oracle.hpp"

namespace eei {

namespace {

constexpr double kFloor = 1e-300;

double safe_log(double v) { return std::log(std::max(v, kFloor)); }

// Access to fV(y_j - x_i) for the x grid of fx and the y grid of fy.
class PairKernel {
 public:
  PairKernel(const GridDensity& fx, const GridDensity& fy, const GridDensity& fv)
      : fx_(fx), fy_(fy), fv_(fv) {
    const double h = fx.step();
    const bool same_step = std::abs(fy.step() - h) <= 1e-12 * h &&
                           std::abs(fv.step() - h) <= 1e-12 * h;
    if (same_step) {
      const double pos = (fy.lo() - fx.lo() - fv.lo()) / h;
      const double rounded = std::round(pos);
      if (std::abs(pos - rounded) <= 1e-6) {
        aligned_ = true;
        offset_ = static_cast<std::ptrdiff_t>(rounded);
        log_fv_.resize(fv.size());
        for (std::size_t m = 0; m < fv.size(); ++m) log_fv_[m] = safe_log(fv[m]);
      }
    }
  }

  bool aligned() const { return aligned_; }

  /// Half-open range of j for which fV(y_j - x_i) can be nonzero.
  std::pair<std::size_t, std::size_t> range(std::size_t i) const {
    const auto ny = static_cast<std::ptrdiff_t>(fy_.size());
    const auto ii = static_cast<std::ptrdiff_t>(i);
    std::ptrdiff_t lo = 0;
    std::ptrdiff_t hi = 0;
    if (aligned_) {
      lo = ii - offset_;
      hi = ii - offset_ + static_cast<std::ptrdiff_t>(fv_.size());
    } else {
      const double x = fx_.x(i);
      lo = static_cast<std::ptrdiff_t>(std::ceil((x + fv_.lo() - fy_.lo()) / fy_.step()));
      hi = static_cast<std::ptrdiff_t>(std::floor((x + fv_.hi() - fy_.lo()) / fy_.step())) + 1;
    }
    lo = std::clamp<std::ptrdiff_t>(lo, 0, ny);
    hi = std::clamp<std::ptrdiff_t>(hi, lo, ny);
    return {static_cast<std::size_t>(lo), static_cast<std::size_t>(hi)};
  }

  /// ln fV(y_j - x_i), floored.
  double log_at(std::size_t i, std::size_t j) const {
    if (aligned_) return log_fv_[index(i, j)];
    return safe_log((*this)(i, j));
  }

  double operator()(std::size_t i, std::size_t j) const {
    if (aligned_) return fv_[index(i, j)];
    return fv_.at(fy_.x(j) - fx_.x(i));
  }

 private:
  std::size_t index(std::size_t i, std::size_t j) const {
    return static_cast<std::size_t>(offset_ + static_cast<std::ptrdiff_t>(j) -
                                    static_cast<std::ptrdiff_t>(i));
  }

  const GridDensity& fx_;
  const GridDensity& fy_;
  const GridDensity& fv_;
  bool aligned_ = false;
  std::ptrdiff_t offset_ = 0;
  std::vector<double> log_fv_;
};

// Σ_i w_i h fX(x_i) fV(y_j - x_i) on the fy grid.
std::vector<double> convolution_on_y(const GridDensity& fx, const GridDensity& fy,
                                     const PairKernel& k) {
  std::vector<double> out(fy.size(), 0.0);
  for (std::size_t i = 0; i < fx.size(); ++i) {
    const double a = fx.weight(i) * fx.step() * fx[i];
    if (a == 0.0) continue;
    const auto [j0, j1] = k.range(i);
    for (std::size_t j = j0; j < j1; ++j) out[j] += a * k(i, j);
  }
  return out;
}

void require_mu(double mu) {
  if (!(mu > 1.0)) throw Error(ErrorCode::kBadMu, "mu must exceed 1");
}

}  // namespace

FirstVariationFit variational_first_fit(const GridDensity& fx,
                                        const GridDensity& fy,
                                        const GridDensity& fv, double mu) {
  require_mu(mu);
  const PairKernel k(fx, fy, fv);
  const std::vector<double> conv = convolution_on_y(fx, fy, k);

  double worst = 0.0;
  for (std::size_t j = 0; j < fy.size(); ++j) {
    worst = std::max(worst, std::abs(conv[j] - fy[j]));
  }
  if (worst > 1e-4) {
    std::ostringstream msg;
    msg << "f_Y differs from f_X * f_V by " << worst;
    throw Error(ErrorCode::kInconsistentDensity, msg.str());
  }

  // Stationarity in f_X, with lambda(y) = -mu (f_X * f_V)(y) / f_Y(y) from
  // the f_Y equation:
  //   b(x, y) + c0 - beta ln fX + 2 gamma x(y - x) + theta x^2 + phi y^2 = 0,
  //   b = mu ln fY - mu (mu - 1) ln fV + mu conv / fY,
  // with beta = 1 + alpha1 and c0 = alpha0 - beta. Coordinates are centred
  // on the means so the quadratic features stay well conditioned.
  const double mx = fx.mean();
  const double my = fy.mean();
  std::vector<double> log_fy(fy.size()), base_y(fy.size());
  for (std::size_t j = 0; j < fy.size(); ++j) {
    log_fy[j] = safe_log(fy[j]);
    base_y[j] = mu * log_fy[j] + mu * conv[j] / std::max(fy[j], kFloor);
  }
  std::vector<double> neg_log_fx(fx.size());
  for (std::size_t i = 0; i < fx.size(); ++i) neg_log_fx[i] = -safe_log(fx[i]);
  const double c_v = mu * (mu - 1.0);
  const double hh = fx.step() * fy.step();

  auto features = [&](std::size_t i, std::size_t j, double* phi) {
    const double x = fx.x(i) - mx;
    const double y = fy.x(j) - my;
    phi[0] = 1.0;
    phi[1] = neg_log_fx[i];
    phi[2] = 2.0 * x * (y - x);
    phi[3] = x * x;
    phi[4] = y * y;
  };

  Eigen::Matrix<double, 5, 5> normal = Eigen::Matrix<double, 5, 5>::Zero();
  Eigen::Matrix<double, 5, 1> rhs = Eigen::Matrix<double, 5, 1>::Zero();
  double total_w = 0.0;
  double phi[5];
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (fx[i] == 0.0) continue;
    const double wi = fx.weight(i) * fx[i];
    const auto [j0, j1] = k.range(i);
    for (std::size_t j = j0; j < j1; ++j) {
      const double v = k(i, j);
      if (v == 0.0) continue;
      const double w = wi * fy.weight(j) * v * hh;
      const double b = base_y[j] - c_v * k.log_at(i, j);
      features(i, j, phi);
      for (int r = 0; r < 5; ++r) {
        rhs(r) -= w * phi[r] * b;
        for (int c = r; c < 5; ++c) normal(r, c) += w * phi[r] * phi[c];
      }
      total_w += w;
    }
  }
  normal = normal.selfadjointView<Eigen::Upper>();
  const Eigen::Matrix<double, 5, 1> coef =
      Eigen::CompleteOrthogonalDecomposition<Eigen::Matrix<double, 5, 5>>(normal).solve(rhs);

  // Second pass for the residual itself, avoiding cancellation.
  double sum_sq = 0.0;
  for (std::size_t i = 0; i < fx.size(); ++i) {
    if (fx[i] == 0.0) continue;
    const double wi = fx.weight(i) * fx[i];
    const auto [j0, j1] = k.range(i);
    for (std::size_t j = j0; j < j1; ++j) {
      const double v = k(i, j);
      if (v == 0.0) continue;
      const double w = wi * fy.weight(j) * v * hh;
      features(i, j, phi);
      double r = base_y[j] - c_v * k.log_at(i, j);
      for (int c = 0; c < 5; ++c) r += coef(c) * phi[c];
      sum_sq += w * r * r;
    }
  }

  FirstVariationFit fit{};
  fit.residual_rms = total_w > 0.0 ? std::sqrt(sum_sq / total_w) : 0.0;
  const double beta = coef(1);
  fit.alpha1 = beta - 1.0;
  fit.alpha0 = coef(0) + beta;
  fit.gamma = coef(2);
  fit.theta = coef(3);
  fit.phi = coef(4);
  fit.entropy_constraint = entropy_quadrature(fx).value;
  fit.max_inconsistency = worst;
  return fit;
}

double variational_first_residual(const GridDensity& fx, const GridDensity& fy,
                                  const GridDensity& fv, double mu) {
  return variational_first_fit(fx, fy, fv, mu).residual_rms;
}

SecondVariation::SecondVariation(const GridDensity& fx, const GridDensity& fy,
                                 const GridDensity& fv, double mu)
    : fx_(fx), fy_(fy), fv_(fv), mu_(mu) {
  require_mu(mu);
  const PairKernel k(fx_, fy_, fv_);
  aligned_ = k.aligned();
  if (aligned_) {
    offset_ = static_cast<std::ptrdiff_t>(std::round((fy_.lo() - fx_.lo() - fv_.lo()) / fx_.step()));
  }
  row_mass_.assign(fx_.size(), 0.0);
  for (std::size_t i = 0; i < fx_.size(); ++i) {
    const auto [j0, j1] = k.range(i);
    double s = 0.0;
    for (std::size_t j = j0; j < j1; ++j) s += fy_.weight(j) * k(i, j);
    row_mass_[i] = s * fy_.step();
  }
  col_mass_ = convolution_on_y(fx_, fy_, k);
}

double SecondVariation::kernel(std::size_t i, std::size_t j) const {
  if (aligned_) {
    const std::ptrdiff_t m = offset_ + static_cast<std::ptrdiff_t>(j) -
                             static_cast<std::ptrdiff_t>(i);
    if (m < 0 || m >= static_cast<std::ptrdiff_t>(fv_.size())) return 0.0;
    return fv_[static_cast<std::size_t>(m)];
  }
  return fv_.at(fy_.x(j) - fx_.x(i));
}

double SecondVariation::evaluate(const std::vector<double>& hx,
                                 const std::vector<double>& hy,
                                 double alpha1) const {
  if (alpha1 < 1.0 - mu_) {
    throw Error(ErrorCode::kInvalidArgument, "alpha1 must be at least 1 - mu");
  }
  if (hx.size() != fx_.size() || hy.size() != fy_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "perturbations must match the density grids");
  }
  const double hxs = fx_.step();
  const double hys = fy_.step();

  double t_x = 0.0;
  for (std::size_t i = 0; i < fx_.size(); ++i) {
    if (hx[i] == 0.0) continue;
    t_x += fx_.weight(i) * hx[i] * hx[i] / std::max(fx_[i], kFloor) * row_mass_[i];
  }
  t_x *= hxs;

  std::vector<double> q(fy_.size());
  double t_y = 0.0;
  for (std::size_t j = 0; j < fy_.size(); ++j) {
    const double f = std::max(fy_[j], kFloor);
    q[j] = hy[j] == 0.0 ? 0.0 : fy_.weight(j) * hy[j] / f;
    t_y += hy[j] == 0.0 ? 0.0 : fy_.weight(j) * hy[j] * hy[j] / (f * f) * col_mass_[j];
  }
  t_y *= hys;

  double cross = 0.0;
  const PairKernel k(fx_, fy_, fv_);
  for (std::size_t i = 0; i < fx_.size(); ++i) {
    if (hx[i] == 0.0) continue;
    const auto [j0, j1] = k.range(i);
    double s = 0.0;
    for (std::size_t j = j0; j < j1; ++j) s += kernel(i, j) * q[j];
    cross += fx_.weight(i) * hx[i] * s;
  }
  cross *= hxs * hys;

  return -(1.0 - alpha1) * t_x + 2.0 * mu_ * cross - mu_ * t_y;
}

double variational_second_form(const GridDensity& fx, const GridDensity& fy,
                               const GridDensity& fv, double mu,
                               const std::vector<double>& hx,
                               const std::vector<double>& hy, double alpha1) {
  return SecondVariation(fx, fy, fv, mu).evaluate(hx, hy, alpha1);
}

std::vector<double> admissible_perturbation(const GridDensity& f,
                                            std::uint64_t seed,
                                            std::uint64_t index) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  double amp[4], shift[4];
  for (int m = 0; m < 4; ++m) {
    amp[m] = normal(rng);
    shift[m] = phase(rng);
  }
  const double mean = f.mean();
  const double sd = std::sqrt(f.variance());
  std::vector<double> h(f.size());
  double total = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double z = (f.x(i) - mean) / sd;
    double p = 0.0;
    for (int m = 0; m < 4; ++m) p += amp[m] * std::cos((m + 1) * 0.5 * z + shift[m]);
    h[i] = f[i] * p;
    total += f.weight(i) * h[i];
  }
  total *= f.step();
  for (std::size_t i = 0; i < f.size(); ++i) h[i] -= f[i] * total;
  return h;
}

double second_variation_alpha1_max(double var_x, double var_v, double mu) {
  return 1.0 - mu * var_x / (var_x + var_v);
}

}  // namespace eei
