#include <algorithm>
#include <chrono>
#include <random>
#include <thread>

#include "eei/oracle.hpp"

namespace eei {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CovMatrix sample_feasible(const CovMatrix& r, std::uint64_t seed,
                          std::uint64_t index) {
  std::mt19937_64 rng(splitmix64(seed ^ splitmix64(index)));
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unit;

  const Eigen::Index n = r.dim();
  const auto rank = std::uniform_int_distribution<Eigen::Index>(1, n)(rng);
  Matrix g(n, rank);
  for (Eigen::Index j = 0; j < rank; ++j) {
    for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
  }
  const Matrix a = g * g.transpose();

  // Largest t with t A ⪯ R, in closed form.
  const Matrix r_is = spd_inv_sqrt(r.matrix());
  const double lam = sym_eig(r_is * a * r_is).values.maxCoeff();
  const double t_max = lam > 0.0 ? 1.0 / lam : 0.0;
  // A quarter of the draws sit on the boundary of the feasible set.
  const double u = unit(rng) < 0.25 ? 1.0 : 1.0 - unit(rng);
  return CovMatrix::project(u * t_max * a);
}

VerificationReport gaussian_search(const EEIInstance& instance,
                                   std::int64_t trials, std::uint64_t seed,
                                   unsigned threads, double tol) {
  if (trials < 1) {
    throw Error(ErrorCode::kInvalidArgument, "trials must be at least 1");
  }
  const auto t0 = std::chrono::steady_clock::now();
  const bool thm4 = instance.s_v.has_value();
  const double target = thm4 ? eei_optimum_thm4(instance).objective
                             : eei_optimum_thm3(instance).objective;

  auto objective = [&](const CovMatrix& s) {
    return thm4 ? objective_thm4(s, instance.s_w, *instance.s_v, instance.mu)
                : objective_thm3(s, instance.s_w, instance.mu);
  };

  const auto count = static_cast<std::size_t>(trials);
  std::vector<double> values(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(
      std::min<std::size_t>(threads, count / 256 + 1));
  auto work = [&](unsigned id) {
    for (std::size_t i = id; i < count; i += threads) {
      values[i] = objective(sample_feasible(instance.r, seed, i));
    }
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned id = 0; id < threads; ++id) pool.emplace_back(work, id);
  }

  // First index wins ties, so the result does not depend on the thread count.
  std::size_t best = 0;
  for (std::size_t i = 1; i < count; ++i) {
    if (values[i] > values[best]) best = i;
  }

  VerificationReport rep;
  rep.check = thm4 ? "search-thm4" : "search-thm3";
  rep.n = instance.dim();
  rep.mu = instance.mu;
  rep.lhs = values[best];
  rep.rhs = target;
  rep.margin = rep.rhs - rep.lhs;
  rep.tol = tol;
  rep.trials = trials;
  rep.seed = seed;
  rep.parameters = {{"best_trial", static_cast<double>(best)}};
  rep.elapsed_ms = std::chrono::duration<double, std::milli>(
                       std::chrono::steady_clock::now() - t0).count();
  return rep;
}

}  // namespace eei
