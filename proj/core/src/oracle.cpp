#include "eei/oracle.hpp"

#include <chrono>
#include <cmath>
#include <numbers>
#include <sstream>

namespace eei {

namespace {

using Clock = std::chrono::steady_clock;

double since_ms(Clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

double gaussian_h(double var) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * var);
}

}  // namespace

VerificationReport check_epi(const GridDensity& d1, const GridDensity& d2,
                             double tol) {
  const auto t0 = Clock::now();
  const EntropyEstimate h1 = entropy_quadrature(d1);
  const EntropyEstimate h2 = entropy_quadrature(d2);
  const EntropyEstimate h12 = entropy_quadrature(convolve_densities(d1, d2));

  VerificationReport rep;
  rep.check = "epi";
  rep.parameters = {{"h1", h1.value}, {"h2", h2.value}};
  rep.lhs = h12.value;
  // Matched-entropy Gaussians add their variances e^{2h} / (2 pi e).
  rep.rhs = 0.5 * std::log(std::exp(2.0 * h1.value) + std::exp(2.0 * h2.value));
  rep.margin = rep.lhs - rep.rhs;
  rep.tol = tol;
  rep.quadrature_error = h1.error + h2.error + h12.error;
  rep.elapsed_ms = since_ms(t0);
  return rep;
}

VerificationReport check_worst_noise(const GridDensity& d_x, double s2_wt,
                                     double s2_wp, double tol) {
  if (!(s2_wt > 0.0) || !(s2_wp > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "noise variances must be positive");
  }
  const auto t0 = Clock::now();
  const EntropyEstimate h_full = entropy_quadrature(convolve_density(d_x, s2_wt + s2_wp));
  const EntropyEstimate h_part = entropy_quadrature(convolve_density(d_x, s2_wt));
  const double var = d_x.variance();

  VerificationReport rep;
  rep.check = "worst-noise";
  rep.parameters = {{"s2_wt", s2_wt}, {"s2_wp", s2_wp}, {"var_x", var}};
  rep.lhs = h_full.value - h_part.value;
  rep.rhs = gaussian_h(var + s2_wt + s2_wp) - gaussian_h(var + s2_wt);
  rep.margin = rep.lhs - rep.rhs;
  rep.tol = tol;
  rep.quadrature_error = h_full.error + h_part.error;
  rep.elapsed_ms = since_ms(t0);
  return rep;
}

VerificationReport check_eei(const GridDensity& d_x, const ScalarEEI& inst,
                             double tol) {
  const auto t0 = Clock::now();
  const double var = d_x.variance();
  if (var > inst.r + 1e-6 * std::max(1.0, inst.r)) {
    std::ostringstream msg;
    msg << "density variance " << var << " exceeds the constraint " << inst.r;
    throw Error(ErrorCode::kInfeasibleDensity, msg.str());
  }
  const EEIInstance instance(
      inst.mu, CovMatrix::scalar(inst.s2_w),
      inst.s2_v ? std::optional<CovMatrix>(CovMatrix::scalar(*inst.s2_v)) : std::nullopt,
      CovMatrix::scalar(inst.r));

  VerificationReport rep;
  rep.mu = inst.mu;
  rep.tol = tol;
  rep.parameters = {{"s2_w", inst.s2_w}, {"r", inst.r}, {"var_x", var}};
  if (inst.s2_v) {
    rep.check = "eei-thm4";
    rep.parameters.emplace_back("s2_v", *inst.s2_v);
    const EntropyEstimate hw = entropy_quadrature(convolve_density(d_x, inst.s2_w));
    const EntropyEstimate hv = entropy_quadrature(convolve_density(d_x, *inst.s2_v));
    rep.lhs = hw.value - inst.mu * hv.value;
    rep.quadrature_error = hw.error + inst.mu * hv.error;
    const Optimum opt = eei_optimum_thm4(instance);
    rep.rhs = opt.objective;
    rep.parameters.emplace_back("s2_x_star", opt.s_x_star(0, 0));
  } else {
    rep.check = "eei-thm3";
    const EntropyEstimate hx = entropy_quadrature(d_x);
    const EntropyEstimate hw = entropy_quadrature(convolve_density(d_x, inst.s2_w));
    rep.lhs = hx.value - inst.mu * hw.value;
    rep.quadrature_error = hx.error + inst.mu * hw.error;
    const CovMatrix s_x = CovMatrix::scalar(var);
    const Domination dom = dominating_gaussian_thm3(s_x, instance.s_w, inst.mu);
    rep.rhs = objective_thm3(dom.s_x_star, instance.s_w, inst.mu);
    rep.parameters.emplace_back("s2_x_star", dom.s_x_star(0, 0));
  }
  rep.margin = rep.rhs - rep.lhs;
  rep.elapsed_ms = since_ms(t0);
  return rep;
}

double golden_section_max(const std::function<double(double)>& f, double lo,
                          double hi, double tol, int max_iter) {
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol * std::max(1.0, std::abs(c)); ++it) {
    if (fc >= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

}  // namespace eei
