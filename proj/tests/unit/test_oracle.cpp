#include <gtest/gtest.h>

#include <cmath>

#include "eei/oracle.hpp"
#include "support.hpp"

using namespace eei;
using eei::testing::random_pd;

namespace {

GridDensity mixture(std::size_t points = 4001) {
  return GridDensity::mixture(0.5, -1.0, 0.4, 1.0, 0.4, points);
}

}  // namespace

TEST(CheckEpi, GaussianEquality) {
  const VerificationReport r =
      check_epi(GridDensity::gaussian(0, 1), GridDensity::gaussian(0, 1));
  EXPECT_NEAR(r.margin, 0.0, 1e-5);
  EXPECT_NEAR(r.lhs, eei::testing::gauss_entropy_1d(2), 1e-5);
  EXPECT_TRUE(r.passed());
}

TEST(CheckEpi, UniformPairIsStrict) {
  const GridDensity u = GridDensity::uniform(0, 1, 2001);
  const VerificationReport r = check_epi(u, u);
  // Triangular density on [0, 2]: h = 1/2.
  EXPECT_NEAR(r.lhs, 0.5, 1e-5);
  EXPECT_NEAR(r.rhs, 0.5 * std::log(2.0), 1e-9);
  EXPECT_GT(r.margin, 0.0);
}

TEST(CheckEpi, MixturePlusGaussian) {
  const GridDensity m = mixture();
  const GridDensity g = GridDensity::tabulate_step(-6, 6, m.step(), [](double x) {
    return normal_pdf(x, 0, 0.5);
  });
  EXPECT_GE(check_epi(m, g).margin, -1e-4);
}

TEST(CheckWorstNoise, GaussianEquality) {
  EXPECT_NEAR(check_worst_noise(GridDensity::gaussian(0, 1), 1.0, 0.5).margin, 0.0, 1e-5);
}

TEST(CheckWorstNoise, NonGaussianInputs) {
  EXPECT_GT(check_worst_noise(GridDensity::uniform(-1, 1), 0.3, 0.5).margin, 0.0);
  EXPECT_GT(check_worst_noise(GridDensity::mixture(0.5, -2, 0.05, 2, 0.05, 8001), 0.2, 1.0).margin,
            0.0);
  EXPECT_THROW(check_worst_noise(GridDensity::gaussian(0, 1), 0.0, 1.0), Error);
}

TEST(CheckEei, UniformThm3) {
  const VerificationReport r = check_eei(GridDensity::uniform(0, 1), {2, 1, std::nullopt, 1});
  EXPECT_GT(r.margin, 0.0);
  EXPECT_EQ(r.check, "eei-thm3");
}

TEST(CheckEei, GaussianAtOptimumThm3) {
  // mu = 2, W = 3, R = 1: optimum Sigma_X* = R = 1
  const VerificationReport r = check_eei(GridDensity::gaussian(0, 1), {2, 3, std::nullopt, 1});
  EXPECT_NEAR(r.margin, 0.0, 1e-4);
}

TEST(CheckEei, Thm4Instances) {
  const ScalarEEI inst{2, 1, 4, 10};
  EXPECT_NEAR(check_eei(GridDensity::gaussian(0, 2), inst).margin, 0.0, 1e-4);
  const VerificationReport r = check_eei(GridDensity::mixture(0.5, -1, 0.5, 1, 0.5), inst);
  EXPECT_GT(r.margin, 0.0);
  EXPECT_EQ(r.check, "eei-thm4");
}

TEST(CheckEei, InfeasibleDensity) {
  try {
    check_eei(GridDensity::gaussian(0, 4), {2, 1, std::nullopt, 1});
    ADD_FAILURE();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInfeasibleDensity);
  }
}

TEST(GoldenSection, FindsArgmaxOfFAlpha) {
  for (double mu : {1.1, 1.5, 2.0, 3.0, 10.0}) {
    const EEIInstance in(mu, CovMatrix::scalar(1), std::nullopt, CovMatrix::scalar(1));
    const double a = golden_section_max([&](double t) { return f_alpha(t, in); }, 1e-6, 100);
    EXPECT_NEAR(a, 1 / (mu - 1), 1e-6) << mu;
  }
  EXPECT_NEAR(golden_section_max([](double x) { return -(x - 0.3) * (x - 0.3); }, -5, 5), 0.3,
              1e-7);
}

TEST(SampleFeasible, StaysInsideConstraint) {
  std::mt19937_64 rng(31);
  for (int t = 0; t < 20; ++t) {
    const CovMatrix r = random_pd(rng, 1 + t % 4);
    for (std::uint64_t k = 0; k < 100; ++k) {
      const CovMatrix s = sample_feasible(r, 5, k);
      EXPECT_TRUE(psd_leq(s, r, 1e-9));
      EXPECT_GE(s.min_eigenvalue(), -1e-12);
    }
  }
  EXPECT_EQ(sample_feasible(CovMatrix::identity(3), 1, 2).matrix(),
            sample_feasible(CovMatrix::identity(3), 1, 2).matrix());
}

TEST(GaussianSearch, NeverBeatsOptimum) {
  const EEIInstance in(2, CovMatrix::scalar(1), CovMatrix::scalar(4), CovMatrix::scalar(10));
  const VerificationReport r = gaussian_search(in, 10000, 42);
  EXPECT_TRUE(r.passed());
  EXPECT_GE(r.margin, -1e-6);
  EXPECT_EQ(r.trials, 10000);
}

TEST(GaussianSearch, Thm3Instance) {
  const EEIInstance in(2.5, CovMatrix::diagonal({1, 2}), std::nullopt, CovMatrix::diagonal({2, 1}));
  EXPECT_GE(gaussian_search(in, 5000, 3).margin, -1e-6);
}

TEST(GaussianSearch, TinyConstraintPinsZero) {
  const CovMatrix w = CovMatrix::diagonal({1, 2});
  const CovMatrix v = CovMatrix::diagonal({3, 1});
  const EEIInstance in(2, w, v, CovMatrix::identity(2).scaled(1e-8));
  const VerificationReport r = gaussian_search(in, 2000, 9);
  EXPECT_NEAR(r.lhs, objective_thm4(CovMatrix::zero(2), w, v, 2), 1e-7);
}

TEST(GaussianSearch, DeterministicAcrossThreadCounts) {
  const EEIInstance in(3, CovMatrix::diagonal({1, 2}), CovMatrix::diagonal({2, 2}),
                       CovMatrix::identity(2));
  const VerificationReport a = gaussian_search(in, 3000, 77, 1);
  const VerificationReport b = gaussian_search(in, 3000, 77, 4);
  const VerificationReport c = gaussian_search(in, 3000, 77, 0);
  EXPECT_EQ(a.lhs, b.lhs);
  EXPECT_EQ(a.lhs, c.lhs);
  EXPECT_EQ(a.parameters, b.parameters);
  EXPECT_NE(a.lhs, gaussian_search(in, 3000, 78, 1).lhs);
  EXPECT_THROW(gaussian_search(in, 0, 1), Error);
}
