#include <gtest/gtest.h>

#include <cmath>

#include "eei/construct.hpp"
#include "eei/oracle.hpp"
#include "support.hpp"

using namespace eei;
using eei::testing::random_pd;
using eei::testing::scan_argmax;
using eei::testing::uniform;

namespace {

EEIInstance thm4(double mu, double w, double v, double r) {
  return EEIInstance(mu, CovMatrix::scalar(w), CovMatrix::scalar(v), CovMatrix::scalar(r));
}

double scalar_f4(double s, double w, double v, double mu) {
  return eei::testing::gauss_entropy_1d(s + w) - mu * eei::testing::gauss_entropy_1d(s + v);
}

}  // namespace

TEST(OptimumThm3, IsLConstructionAtR) {
  const EEIInstance in(2, CovMatrix::scalar(3), std::nullopt, CovMatrix::scalar(1));
  const Optimum o = eei_optimum_thm3(in);
  EXPECT_NEAR(o.s_x_star(0, 0), 1.0, 1e-14);
  EXPECT_NEAR(o.objective, objective_thm3(CovMatrix::scalar(1), CovMatrix::scalar(3), 2), 1e-14);
  EXPECT_NEAR(o.certificate.multiplier(0, 0), 0.25, 1e-15);
}

TEST(OptimumThm3, ScalarMatchesCalculus) {
  // F3(s) = h(s) - mu h(s + w) on (0, r]: maximizer min(r, w / (mu - 1)).
  std::mt19937_64 rng(17);
  for (int t = 0; t < 50; ++t) {
    const double mu = uniform(rng, 1.1, 5), w = uniform(rng, 0.1, 4), r = uniform(rng, 0.1, 4);
    const Optimum o = eei_optimum_thm3(EEIInstance(mu, CovMatrix::scalar(w), std::nullopt,
                                                   CovMatrix::scalar(r)));
    const double ref = scan_argmax(
        [&](double s) {
          return eei::testing::gauss_entropy_1d(s) - mu * eei::testing::gauss_entropy_1d(s + w);
        },
        1e-9, r);
    EXPECT_NEAR(o.s_x_star(0, 0), ref, 1e-6);
  }
}

TEST(OptimumThm4, BoundaryExample) {
  const Optimum o = eei_optimum_thm4(thm4(2, 1, 2, 10));
  EXPECT_NEAR(o.s_x_star(0, 0), 0.0, 1e-8);
  EXPECT_NEAR(o.objective, scalar_f4(0, 1, 2, 2), 1e-10);
  EXPECT_NEAR(o.objective, -2.112086, 1e-6);
  EXPECT_LE(o.certificate.markov_residual, 1e-6);
}

TEST(OptimumThm4, InteriorExample) {
  // 1/2/(s + 1) = 1/(s + 4)  =>  s = 2
  const Optimum o = eei_optimum_thm4(thm4(2, 1, 4, 10));
  EXPECT_NEAR(o.s_x_star(0, 0), 2.0, 1e-6);
  EXPECT_NEAR(o.objective, scalar_f4(2, 1, 4, 2), 1e-10);
  EXPECT_TRUE(o.certificate.holds(1e-6));
}

TEST(OptimumThm4, SwappedNoisesStayOnBoundary) {
  const Optimum o = eei_optimum_thm4(thm4(2, 4, 1, 10));
  EXPECT_NEAR(o.s_x_star(0, 0), 0.0, 1e-8);
}

TEST(OptimumThm4, EqualNoisesGiveZero) {
  const CovMatrix w(Matrix{{2.0, 0.5}, {0.5, 1.0}});
  const Optimum o = eei_optimum_thm4(EEIInstance(1.5, w, w, CovMatrix::identity(2)));
  EXPECT_LT(o.s_x_star.matrix().norm(), 1e-8);
}

TEST(OptimumThm4, ConstraintBinds) {
  // Interior stationary point 2 lies outside [0, 1]: optimum is R.
  const Optimum o = eei_optimum_thm4(thm4(2, 1, 4, 1));
  EXPECT_NEAR(o.s_x_star(0, 0), 1.0, 1e-8);
}

TEST(OptimumThm4, ScalarMatchesCalculus) {
  std::mt19937_64 rng(23);
  for (int t = 0; t < 60; ++t) {
    const double mu = uniform(rng, 1.05, 5), w = uniform(rng, 0.1, 4), v = uniform(rng, 0.1, 8),
                 r = uniform(rng, 0.1, 6);
    const Optimum o = eei_optimum_thm4(thm4(mu, w, v, r));
    const double ref = scan_argmax([&](double s) { return scalar_f4(s, w, v, mu); }, 0, r);
    EXPECT_NEAR(o.objective, scalar_f4(ref, w, v, mu), 1e-9) << mu << ' ' << w << ' ' << v;
    EXPECT_NEAR(o.s_x_star(0, 0), ref, 1e-4);
  }
}

TEST(OptimumThm4, DominatesSampledGaussians) {
  std::mt19937_64 rng(29);
  for (int t = 0; t < 20; ++t) {
    const auto n = static_cast<Eigen::Index>(2 + t % 3);
    const double mu = uniform(rng, 1.05, 5);
    const EEIInstance in(mu, random_pd(rng, n), random_pd(rng, n), random_pd(rng, n));
    const Optimum o = eei_optimum_thm4(in);
    EXPECT_TRUE(psd_leq(o.s_x_star, in.r, 1e-8));
    EXPECT_GE(o.s_x_star.min_eigenvalue(), -1e-10);
    EXPECT_LE(o.certificate.markov_residual, 1e-6 * o.certificate.scale);
    for (std::uint64_t k = 0; k < 300; ++k) {
      const CovMatrix s = sample_feasible(in.r, 99, k);
      EXPECT_LE(objective_thm4(s, in.s_w, *in.s_v, mu), o.objective + 1e-6);
    }
  }
}

TEST(OptimumThm4, RequiresSecondNoise) {
  EXPECT_THROW(eei_optimum_thm4(EEIInstance(2, CovMatrix::scalar(1), std::nullopt,
                                            CovMatrix::scalar(1))),
               Error);
}
