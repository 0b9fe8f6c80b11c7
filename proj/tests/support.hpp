#pragma once

// Random instances and closed-form references shared by the test binaries.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "eei/gaussmat.hpp"

namespace eei::testing {

inline Matrix random_matrix(std::mt19937_64& rng, Eigen::Index rows, Eigen::Index cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Matrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) m(i, j) = n(rng);
  return m;
}

// G G^T / n + floor I, eigenvalues roughly in [floor, few].
inline CovMatrix random_pd(std::mt19937_64& rng, Eigen::Index n, double floor = 0.1) {
  const Matrix g = random_matrix(rng, n, n);
  return CovMatrix(g * g.transpose() / static_cast<double>(n) +
                   floor * Matrix::Identity(n, n));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

inline double gauss_entropy_1d(double var) {
  return 0.5 * std::log(2.0 * std::numbers::pi * std::numbers::e * var);
}

// Brute-force maximizer of a 1-D function on [lo, hi]: dense scan followed by
// ternary refinement around the best node. Used as a calculus oracle.
template <class F>
double scan_argmax(F f, double lo, double hi, int nodes = 20001) {
  double best_x = lo, best = f(lo);
  const double h = (hi - lo) / (nodes - 1);
  for (int i = 1; i < nodes; ++i) {
    const double x = lo + i * h;
    const double v = f(x);
    if (v > best) best = v, best_x = x;
  }
  double a = std::max(lo, best_x - h), b = std::min(hi, best_x + h);
  for (int it = 0; it < 200; ++it) {
    const double m1 = a + (b - a) / 3, m2 = b - (b - a) / 3;
    if (f(m1) < f(m2)) a = m1; else b = m2;
  }
  return 0.5 * (a + b);
}

}  // namespace eei::testing
