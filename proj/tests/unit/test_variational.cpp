#include <gtest/gtest.h>

#include <cmath>

#include "eei/variational.hpp"
#include "support.hpp"

using namespace eei;

namespace {

struct Triple {
  GridDensity fx, fv, fy;
};

// fV = N(0, 1) on fX's step, fY = fX * fV.
Triple triple(GridDensity fx) {
  GridDensity fv = GridDensity::tabulate_step(-8, 8, fx.step(), [](double t) {
    return normal_pdf(t, 0, 1);
  });
  GridDensity fy = convolve_densities(fx, fv);
  return {std::move(fx), std::move(fv), std::move(fy)};
}

}  // namespace

TEST(FirstVariation, GaussianIsStationary) {
  const Triple t = triple(GridDensity::gaussian(0, 1, 801));
  const FirstVariationFit fit = variational_first_fit(t.fx, t.fy, t.fv, 2.0);
  EXPECT_LE(fit.residual_rms, 1e-3);
  EXPECT_LT(fit.max_inconsistency, 1e-6);
  EXPECT_NEAR(fit.entropy_constraint, eei::testing::gauss_entropy_1d(1), 1e-4);
  EXPECT_EQ(variational_first_residual(t.fx, t.fy, t.fv, 2.0), fit.residual_rms);
}

TEST(FirstVariation, UniformIsNot) {
  const Triple g = triple(GridDensity::gaussian(0, 1, 801));
  const double step = g.fx.step();
  const double a = std::sqrt(3.0);
  const auto n = static_cast<std::size_t>(std::llround(2 * a / step)) + 1;
  const Triple u = triple(GridDensity::uniform(-a, a, n));
  const double rg = variational_first_residual(g.fx, g.fy, g.fv, 2.0);
  const double ru = variational_first_residual(u.fx, u.fy, u.fv, 2.0);
  EXPECT_GE(ru, 10 * rg);
}

TEST(FirstVariation, Errors) {
  const Triple t = triple(GridDensity::gaussian(0, 1, 401));
  EXPECT_THROW(variational_first_fit(t.fx, t.fy, t.fv, 1.0), Error);
  const GridDensity wrong = GridDensity::gaussian(0, 3, 801);
  try {
    variational_first_fit(t.fx, wrong, t.fv, 2.0);
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInconsistentDensity);
  }
}

TEST(SecondVariation, SingleNegativeTerm) {
  const Triple t = triple(GridDensity::gaussian(0, 1, 401));
  const SecondVariation form(t.fx, t.fy, t.fv, 2.0);
  const std::vector<double> hx = admissible_perturbation(t.fx, 1, 0);
  const std::vector<double> zero(t.fy.size(), 0.0);
  // With hY = 0 only -(1 - a1) ∫ hX^2 / fX (∫ fV) survives; ∫ fV = 1.
  double ref = 0;
  for (std::size_t i = 0; i < t.fx.size(); ++i) {
    if (t.fx[i] > 1e-280) ref += t.fx.weight(i) * hx[i] * hx[i] / t.fx[i];
  }
  ref *= -t.fx.step();
  const double v = form.evaluate(hx, zero, 0.0);
  EXPECT_LE(v, 0.0);
  EXPECT_NEAR(v, ref, 1e-6 * std::abs(ref));
}

TEST(SecondVariation, NullDirectionOfTheSquare) {
  // At a1 = 1 - mu the form is -mu ∬ fX fV (hX/fX - hY/fY)^2.
  const Triple t = triple(GridDensity::gaussian(0, 1, 401));
  const double mu = 2.5;
  std::vector<double> hx(t.fx.values()), hy(t.fy.values());
  for (double& v : hx) v *= 0.7;
  for (double& v : hy) v *= 0.7;
  EXPECT_NEAR(variational_second_form(t.fx, t.fy, t.fv, mu, hx, hy, 1 - mu), 0.0, 1e-8);
}

TEST(SecondVariation, NotNegativeWithoutAdmissibility) {
  // hX = fX, hY = fY (mass-changing) at a1 = 0, mu = 2: -1 + 2 mu - mu = 1.
  const Triple t = triple(GridDensity::gaussian(0, 1, 401));
  const double v = variational_second_form(t.fx, t.fy, t.fv, 2.0, t.fx.values(), t.fy.values(), 0);
  EXPECT_NEAR(v, 1.0, 1e-6);
}

TEST(SecondVariation, RandomAdmissiblePairsAreNonPositive) {
  const Triple t = triple(GridDensity::gaussian(0, 1, 401));
  for (double mu : {1.5, 2.0, 4.0}) {
    const SecondVariation form(t.fx, t.fy, t.fv, mu);
    const double lo = 1 - mu;
    const double hi = second_variation_alpha1_max(t.fx.variance(), 1.0, mu);
    EXPECT_NEAR(hi, 1 - mu / 2, 1e-6);
    for (std::uint64_t k = 0; k < 30; ++k) {
      const double a1 = lo + (hi - lo) * static_cast<double>(k % 10) / 9.0;
      const double v = form.evaluate(admissible_perturbation(t.fx, 5, 2 * k),
                                     admissible_perturbation(t.fy, 5, 2 * k + 1), a1);
      EXPECT_LE(v, 1e-10) << mu << ' ' << a1;
    }
  }
}

TEST(SecondVariation, Validation) {
  const Triple t = triple(GridDensity::gaussian(0, 1, 201));
  const SecondVariation form(t.fx, t.fy, t.fv, 2.0);
  const std::vector<double> hx(t.fx.size(), 0.0), hy(t.fy.size(), 0.0);
  EXPECT_THROW(form.evaluate(hx, hy, -1.5), Error);
  EXPECT_THROW(form.evaluate(hy, hy, 0.0), Error);
  EXPECT_EQ(form.evaluate(hx, hy, 0.0), 0.0);
}

TEST(AdmissiblePerturbation, ZeroMassAndDeterministic) {
  const GridDensity f = GridDensity::gaussian(0, 2, 801);
  const std::vector<double> h = admissible_perturbation(f, 3, 4);
  double mass = 0;
  for (std::size_t i = 0; i < f.size(); ++i) mass += f.weight(i) * h[i];
  EXPECT_NEAR(mass * f.step(), 0.0, 1e-14);
  EXPECT_EQ(h, admissible_perturbation(f, 3, 4));
  EXPECT_NE(h, admissible_perturbation(f, 3, 5));
}
