// Two-noise optimum: damped split iteration followed by projected ascent.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

#include "eei/construct.hpp"

namespace eei {

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kNullEig = 1e-8;

// F4 in R-whitened coordinates up to an additive constant.
class WhitenedObjective {
 public:
  WhitenedObjective(const Matrix& w_s, const Matrix& v_s, double mu)
      : w_s_(w_s), v_s_(v_s), mu_(mu) {
    // Hessian of ln det(S + A) is bounded by lambda_min(A)^-2 on S ⪰ 0.
    const double lw = min_eigenvalue(w_s_), lv = min_eigenvalue(v_s_);
    lipschitz_ = 0.5 / (lw * lw) + 0.5 * mu_ / (lv * lv);
  }

  double lipschitz() const { return lipschitz_; }

  double value(const Matrix& s) const {
    return 0.5 * log_det(s + w_s_) - 0.5 * mu_ * log_det(s + v_s_);
  }

  Matrix gradient(const Matrix& s) const {
    const Eigen::Index n = s.rows();
    const Matrix id = Matrix::Identity(n, n);
    const Matrix a = Eigen::LLT<Matrix>(s + w_s_).solve(id);
    const Matrix b = Eigen::LLT<Matrix>(s + v_s_).solve(id);
    return symmetrize(0.5 * a - 0.5 * mu_ * b);
  }

 private:
  static double log_det(const Matrix& m) {
    Eigen::LLT<Matrix> llt(m);
    if (llt.info() != Eigen::Success) {
      return -std::numeric_limits<double>::infinity();
    }
    return 2.0 * llt.matrixL().toDenseMatrix().diagonal().array().log().sum();
  }

  Matrix w_s_;
  Matrix v_s_;
  double mu_;
  double lipschitz_;
};

// Projection onto {0 ⪯ S ⪯ I}.
Matrix clip_unit(const Matrix& m) {
  const SymEig e = sym_eig(m);
  const Vector v = e.values.cwiseMax(0.0).cwiseMin(1.0);
  return symmetrize(e.vectors * v.asDiagonal() * e.vectors.transpose());
}

double inner(const Matrix& a, const Matrix& b) {
  return (a.array() * b.array()).sum();
}

struct AscentResult {
  Matrix s;
  double value;
  double pg_norm;
  int iterations;
};

AscentResult ascend(const WhitenedObjective& f, const Matrix& start,
                    const OptimumOptions& opt) {
  Matrix s = clip_unit(start);
  double fs = f.value(s);
  Matrix g = f.gradient(s);
  double step = 1.0;
  double pg = (clip_unit(s + g) - s).norm();
  int it = 0;
  int flat = 0;
  for (; it < opt.ascent_iters && pg > opt.ascent_tol; ++it) {
    Matrix s_new;
    double f_new = 0.0;
    bool accepted = false;
    for (double a = step; a > 1e-20; a *= 0.5) {
      s_new = clip_unit(s + a * g);
      f_new = f.value(s_new);
      if (f_new >= fs + kArmijo * inner(g, s_new - s)) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no ascent possible at double precision

    const Matrix g_new = f.gradient(s_new);
    const Matrix ds = s_new - s;
    const double sy = inner(ds, g_new - g);
    const double ss = inner(ds, ds);
    // Barzilai-Borwein step for ascent: curvature along ds is sy / ss < 0.
    step = (sy < 0.0 && ss > 0.0) ? std::clamp(-ss / sy, 1e-10, 1e10)
                                  : std::min(2.0 * step, 1e10);
    flat = f_new > fs + 1e-15 * std::max(1.0, std::abs(fs)) ? 0 : flat + 1;
    s = s_new;
    fs = f_new;
    g = g_new;
    pg = (clip_unit(s + g) - s).norm();
    if (flat >= 10) break;  // values no longer resolve the progress
  }

  // Near the optimum F is flat to double precision, so finish with the
  // gradient map at the safe step 1/L, which needs no value comparisons.
  const double a = 1.0 / f.lipschitz();
  for (; it < opt.ascent_iters && pg > opt.ascent_tol; ++it) {
    const Matrix s_new = clip_unit(s + a * g);
    const Matrix g_new = f.gradient(s_new);
    const double pg_new = (clip_unit(s_new + g_new) - s_new).norm();
    if (!(pg_new < pg) && (s_new - s).norm() <= 1e-16) break;
    s = s_new;
    g = g_new;
    pg = pg_new;
  }
  return {s, f.value(s), pg, it};
}

// Lexicographic order on the vectorized matrix, for deterministic ties.
bool lex_less(const Matrix& a, const Matrix& b) {
  return std::lexicographical_compare(a.data(), a.data() + a.size(), b.data(),
                                      b.data() + b.size());
}

}  // namespace

Optimum eei_optimum_thm4(const EEIInstance& instance,
                         const OptimumOptions& opt) {
  if (!instance.s_v) {
    throw Error(ErrorCode::kInvalidArgument,
                "two-noise optimum needs Sigma_V");
  }
  const double mu = instance.mu;
  const Matrix& w = instance.s_w.matrix();
  const Matrix& v = instance.s_v->matrix();
  const Matrix& r = instance.r.matrix();
  const Eigen::Index n = instance.dim();

  // Stage 1: split V = W~ + V~ with W~ from the K construction.
  const double beta = (mu - 1.0) / mu;
  CovMatrix v_tilde = *instance.s_v;
  ConstructionCertificate split = construct_k(instance.s_w, v_tilde, mu);
  int fp_iters = 0;
  bool fp_converged = false;
  while (fp_iters < opt.fixed_point_iters) {
    ++fp_iters;
    const Matrix next =
        (1.0 - beta) * v_tilde.matrix() + beta * (v - split.s_w_tilde.matrix());
    const double change = (next - v_tilde.matrix()).norm();
    v_tilde = CovMatrix::project(next);
    split = construct_k(instance.s_w, v_tilde, mu);
    if (change <= opt.fixed_point_tol) {
      fp_converged = true;
      break;
    }
  }

  // Stage 2: projected ascent in R-whitened coordinates.
  const Matrix r_is = spd_inv_sqrt(r);
  const Matrix r_s = spd_sqrt(r);
  const WhitenedObjective f(symmetrize(r_is * w * r_is),
                            symmetrize(r_is * v * r_is), mu);
  const Matrix id = Matrix::Identity(n, n);
  const std::array<Matrix, 4> starts = {
      symmetrize(r_is * split.s_x_star.matrix() * r_is), Matrix::Zero(n, n),
      0.5 * id, id};

  std::vector<AscentResult> runs;
  runs.reserve(starts.size());
  for (const Matrix& s0 : starts) runs.push_back(ascend(f, s0, opt));

  const AscentResult* best = &runs.front();
  for (const AscentResult& run : runs) {
    const double diff = run.value - best->value;
    if (diff > 1e-13 || (std::abs(diff) <= 1e-13 && lex_less(run.s, best->s))) {
      best = &run;
    }
  }
  int total_iters = 0;
  for (const AscentResult& run : runs) total_iters += run.iterations;

  if (!fp_converged && best->pg_norm > 1e3 * opt.ascent_tol) {
    std::ostringstream msg;
    msg << "split iteration and projected ascent both stalled (projected "
           "gradient "
        << best->pg_norm << ")";
    throw Error(ErrorCode::kNoConvergence, msg.str());
  }

  // Snap numerically null directions to exact zeros so K S = 0 holds.
  const SymEig es = sym_eig(best->s);
  Vector sv = es.values;
  Matrix p0 = Matrix::Zero(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (sv(i) <= kNullEig) {
      sv(i) = 0.0;
      p0 += es.vectors.col(i) * es.vectors.col(i).transpose();
    }
  }
  const Matrix s_star = symmetrize(es.vectors * sv.asDiagonal() * es.vectors.transpose());

  // Multiplier of S ⪰ 0: 2 Lambda_0 = -P0 grad(2 F) P0 on the null space.
  const Matrix g2 = 2.0 * f.gradient(s_star);
  const Matrix m0 = project_psd(-p0 * g2 * p0);
  const Matrix k = symmetrize(r_is * m0 * r_is);
  const Matrix sigma = symmetrize(r_s * s_star * r_s);
  const Matrix w_tilde = spd_inverse(spd_inverse(w) + k);
  const Matrix v_tilde_final = v - w_tilde;

  CovMatrix s_x_star = CovMatrix::project(sigma);
  ConstructionCertificate cert{CovMatrix::project(k), CovMatrix::project(w_tilde),
                               s_x_star, CovMatrix::project(v_tilde_final)};
  cert.scale = std::max({1.0, instance.s_w.max_eigenvalue(),
                         instance.s_v->max_eigenvalue(), instance.r.max_eigenvalue()});
  cert.zero_product_residual = std::max((k * sigma).norm(), (sigma * k).norm());
  const double split_gap = min_eigenvalue(v_tilde_final);
  cert.order_residual =
      std::min({min_eigenvalue(w - w_tilde), split_gap, min_eigenvalue(k),
                min_eigenvalue(r - sigma)});
  if (split_gap < -1e-6 * cert.scale) {
    std::ostringstream msg;
    msg << "no split W~ ⪯ V at the optimum (gap " << split_gap << ")";
    throw Error(ErrorCode::kSplitInfeasible, msg.str());
  }
  cert.markov_residual = markov_residual(MarkovTriple(
      s_x_star, CovMatrix(sigma + w_tilde, 1e-8), CovMatrix(sigma + w, 1e-8)));

  Optimum out{s_x_star, objective_thm4(s_x_star, instance.s_w, *instance.s_v, mu),
              std::move(cert)};
  out.stationarity = best->pg_norm;
  out.fixed_point_iterations = fp_iters;
  out.fixed_point_converged = fp_converged;
  out.ascent_iterations = total_iters;
  return out;
}

}  // namespace eei
