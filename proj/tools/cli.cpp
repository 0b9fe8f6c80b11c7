#include "cli.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "eei/applications.hpp"
#include "eei/construct.hpp"
#include "eei/grid_density.hpp"
#include "eei/matrix_io.hpp"
#include "eei/oracle.hpp"
#include "eei/variational.hpp"
#include "eei/version.hpp"
#include "json.hpp"

namespace eei::cli {

namespace {

using ojson = nlohmann::ordered_json;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Summary {
  Eigen::Index n = 1;
  double mu = kNaN;
  double lhs = 0.0;
  double rhs = 0.0;
  double margin = 0.0;
  double tol = 0.0;
  std::int64_t trials = 0;
  double elapsed_ms = 0.0;
  bool passed = true;
};

struct Outcome {
  Summary summary;
  ojson result = ojson::object();
};

// Resolved parameters shared by the command handlers.
struct Context {
  const RunConfig& cfg;
  double tol;
  std::int64_t trials;
};

ojson num(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v + 0.0;  // no -0 in reports
}

std::string fmt_double(double v) {
  if (std::isnan(v)) return "";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v + 0.0);
  return buf;
}

ojson matrix_json(const Matrix& m) {
  ojson rows = ojson::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(num(m(i, j)));
    rows.push_back(std::move(row));
  }
  return ojson{{"dim", m.rows()}, {"rows", std::move(rows)}};
}

ojson matrix_json(const CovMatrix& m) { return matrix_json(m.matrix()); }

bool parse_number(const std::string& s, double& out) {
  if (s.empty()) return false;
  char* end = nullptr;
  out = std::strtod(s.c_str(), &end);
  return end == s.c_str() + s.size();
}

CovMatrix load_matrix(const std::string& arg, const std::string& flag,
                      const std::string& command) {
  if (arg.empty()) {
    throw UsageError(command + " needs " + flag);
  }
  double value = 0.0;
  if (parse_number(arg, value)) {
    return CovMatrix(Matrix::Constant(1, 1, value));
  }
  return read_matrix_json(arg);
}

std::optional<CovMatrix> load_optional(const std::string& arg,
                                       const std::string& flag,
                                       const std::string& command) {
  if (arg.empty()) return std::nullopt;
  return load_matrix(arg, flag, command);
}

double load_scalar(const std::string& arg, const std::string& flag,
                   const std::string& command) {
  const CovMatrix m = load_matrix(arg, flag, command);
  if (m.dim() != 1) {
    throw UsageError(command + " needs a scalar " + flag);
  }
  return m(0, 0);
}

double require_mu(const RunConfig& cfg) {
  if (!cfg.mu) throw UsageError(cfg.command + " needs --mu");
  if (!(*cfg.mu > 1.0)) throw UsageError("mu must exceed 1");
  return *cfg.mu;
}

std::vector<double> parse_params(const std::string& text, const std::string& desc) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double v = 0.0;
    if (!parse_number(item, v)) throw UsageError("bad density parameters in " + desc);
    out.push_back(v);
  }
  return out;
}

// gaussian[:var] | uniform[:a,b] | mixture:w,m1,s1,m2,s2. With a step the
// grid is laid out on that step so that two densities can be convolved
// exactly.
GridDensity make_density(const std::string& desc, std::size_t points,
                         std::optional<double> step = std::nullopt) {
  const auto colon = desc.find(':');
  const std::string name = desc.substr(0, colon);
  const std::vector<double> p =
      colon == std::string::npos ? std::vector<double>{}
                                 : parse_params(desc.substr(colon + 1), desc);
  if (name == "gaussian") {
    if (p.size() > 1) throw UsageError("gaussian takes one parameter (variance)");
    const double var = p.empty() ? 1.0 : p[0];
    if (!(var > 0.0)) throw UsageError("gaussian variance must be positive");
    if (!step) return GridDensity::gaussian(0.0, var, points);
    const double half = 8.0 * std::sqrt(var);
    return GridDensity::tabulate_step(-half, half, *step,
                                      [=](double x) { return normal_pdf(x, 0.0, var); });
  }
  if (name == "uniform") {
    if (!p.empty() && p.size() != 2) throw UsageError("uniform takes two parameters (a,b)");
    const double a = p.empty() ? 0.0 : p[0];
    const double b = p.empty() ? 1.0 : p[1];
    if (!(b > a)) throw UsageError("uniform needs a < b");
    if (!step) return GridDensity::uniform(a, b, points);
    const auto n = static_cast<std::size_t>(std::llround((b - a) / *step)) + 1;
    return GridDensity::uniform(a, b, std::max<std::size_t>(n, 3));
  }
  if (name == "mixture") {
    if (p.size() != 5) throw UsageError("mixture takes five parameters (w,m1,s1,m2,s2)");
    const GridDensity d = GridDensity::mixture(p[0], p[1], p[2], p[3], p[4], points);
    if (!step) return d;
    const double w = p[0], m1 = p[1], s1 = p[2], m2 = p[3], s2 = p[4];
    return GridDensity::tabulate_step(d.lo(), d.hi(), *step, [=](double x) {
      return w * normal_pdf(x, m1, s1 * s1) + (1.0 - w) * normal_pdf(x, m2, s2 * s2);
    });
  }
  throw UsageError("unknown density '" + desc + "'");
}

std::string density_name(const std::optional<std::string>& d) {
  return d.value_or("gaussian");
}

double worst_residual(const ConstructionCertificate& c) {
  return std::max({c.zero_product_residual, c.markov_residual, -c.order_residual}) /
         c.scale;
}

ojson certificate_json(const ConstructionCertificate& c, const char* multiplier,
                       const char* complement) {
  return ojson{{multiplier, matrix_json(c.multiplier)},
               {"s_w_tilde", matrix_json(c.s_w_tilde)},
               {"s_x_star", matrix_json(c.s_x_star)},
               {complement, matrix_json(c.s_complement)},
               {"zero_product_residual", num(c.zero_product_residual)},
               {"order_residual", num(c.order_residual)},
               {"markov_residual", num(c.markov_residual)},
               {"scale", num(c.scale)}};
}

Summary from_certificate(const ConstructionCertificate& c, Eigen::Index n,
                         double mu, double tol) {
  Summary s;
  s.n = n;
  s.mu = mu;
  s.lhs = worst_residual(c);
  s.rhs = 0.0;
  s.margin = -s.lhs;
  s.tol = tol;
  s.passed = s.margin >= -tol;
  return s;
}

Summary from_report(const VerificationReport& rep) {
  Summary s;
  s.n = rep.n;
  s.mu = rep.mu;
  s.lhs = rep.lhs;
  s.rhs = rep.rhs;
  s.margin = rep.margin;
  s.tol = rep.tol;
  s.trials = rep.trials;
  s.passed = rep.passed();
  return s;
}

ojson report_json(const VerificationReport& rep) {
  ojson params = ojson::object();
  for (const auto& [k, v] : rep.parameters) params[k] = num(v);
  return ojson{{"check", rep.check},
               {"parameters", std::move(params)},
               {"lhs", num(rep.lhs)},
               {"rhs", num(rep.rhs)},
               {"margin", num(rep.margin)},
               {"quadrature_error", num(rep.quadrature_error)}};
}

// --- command handlers -------------------------------------------------------

Outcome cmd_construct_l(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  const CovMatrix x = load_matrix(c.x, "--x", c.command);
  const CovMatrix w = load_matrix(c.w, "--w", c.command);
  const Domination dom = dominating_gaussian_thm3(x, w, mu);
  Outcome out;
  out.summary = from_certificate(dom.certificate, x.dim(), mu, ctx.tol);
  out.result = {{"certificate", certificate_json(dom.certificate, "L", "s_x_prime")},
                {"objective_input", num(objective_thm3(x, w, mu))},
                {"objective_star", num(objective_thm3(dom.s_x_star, w, mu))},
                {"domination_gap", num(dom.gap)}};
  return out;
}

Outcome cmd_construct_k(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  const CovMatrix w = load_matrix(c.w, "--w", c.command);
  const CovMatrix v = load_matrix(c.v, "--v", c.command);
  const ConstructionCertificate cert = construct_k(w, v, mu);
  Outcome out;
  out.summary = from_certificate(cert, w.dim(), mu, ctx.tol);
  out.result = {{"certificate", certificate_json(cert, "K", "s_v_tilde")}};
  return out;
}

Outcome cmd_optimum(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  const EEIInstance inst(mu, load_matrix(c.w, "--w", c.command),
                         load_optional(c.v, "--v", c.command),
                         load_matrix(c.r, "--r", c.command));
  Outcome out;
  if (inst.s_v) {
    const Optimum opt = eei_optimum_thm4(inst);
    out.summary = from_certificate(opt.certificate, inst.dim(), mu, ctx.tol);
    out.result = {{"problem", "two-noise"},
                  {"s_x_star", matrix_json(opt.s_x_star)},
                  {"objective", num(opt.objective)},
                  {"stationarity", num(opt.stationarity)},
                  {"fixed_point_iterations", opt.fixed_point_iterations},
                  {"fixed_point_converged", opt.fixed_point_converged},
                  {"ascent_iterations", opt.ascent_iterations},
                  {"certificate", certificate_json(opt.certificate, "K", "s_v_tilde")}};
  } else {
    const Optimum opt = eei_optimum_thm3(inst);
    out.summary = from_certificate(opt.certificate, inst.dim(), mu, ctx.tol);
    out.result = {{"problem", "single-noise"},
                  {"s_x_star", matrix_json(opt.s_x_star)},
                  {"objective", num(opt.objective)},
                  {"certificate", certificate_json(opt.certificate, "L", "s_x_prime")}};
  }
  return out;
}

Outcome cmd_verify_eei(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  ScalarEEI inst{mu, load_scalar(c.w, "--w", c.command), std::nullopt,
                 load_scalar(c.r, "--r", c.command)};
  if (!c.v.empty()) inst.s2_v = load_scalar(c.v, "--v", c.command);
  const GridDensity d = make_density(density_name(c.density), c.grid_points);
  const VerificationReport rep = check_eei(d, inst, ctx.tol);
  return {from_report(rep), report_json(rep)};
}

Outcome cmd_verify_epi(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const GridDensity d1 = make_density(density_name(c.density), c.grid_points);
  const GridDensity d2 = make_density(density_name(c.density2), c.grid_points, d1.step());
  const VerificationReport rep = check_epi(d1, d2, ctx.tol);
  return {from_report(rep), report_json(rep)};
}

Outcome cmd_verify_worst_noise(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const GridDensity d = make_density(density_name(c.density), c.grid_points);
  const VerificationReport rep =
      check_worst_noise(d, load_scalar(c.w, "--w", c.command),
                        load_scalar(c.wp, "--wp", c.command), ctx.tol);
  return {from_report(rep), report_json(rep)};
}

Outcome cmd_search(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  const EEIInstance inst(mu, load_matrix(c.w, "--w", c.command),
                         load_optional(c.v, "--v", c.command),
                         load_matrix(c.r, "--r", c.command));
  const VerificationReport rep = gaussian_search(inst, ctx.trials, c.seed, 0, ctx.tol);
  return {from_report(rep), report_json(rep)};
}

Outcome cmd_broadcast(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const BroadcastInstance inst(load_matrix(c.z1, "--z1", c.command),
                               load_matrix(c.z2, "--z2", c.command),
                               load_matrix(c.r, "--r", c.command),
                               load_optional(c.direction, "--direction", c.command));
  const BroadcastDesign d = design_private_message(inst);
  const double tr_r = inst.r.matrix().trace();
  Outcome out;
  out.summary.n = inst.r.dim();
  out.summary.lhs = d.trace_mse_rx1;
  out.summary.rhs = tr_r;
  out.summary.margin = tr_r - d.trace_mse_rx1;
  out.summary.tol = ctx.tol;
  out.summary.passed = out.summary.margin >= -ctx.tol;
  out.result = {{"s_x_star", matrix_json(d.s_x_star)},
                {"t_star", num(d.t_star)},
                {"alpha", num(d.alpha)},
                {"trace_r", num(tr_r)},
                {"trace_mse_rx1", num(d.trace_mse_rx1)},
                {"trace_mse_rx2", num(d.trace_mse_rx2)},
                {"bisection_steps", d.bisection_steps},
                {"k_multiplier", matrix_json(d.k_multiplier)},
                {"s_z1_tilde", matrix_json(d.s_z1_tilde)},
                {"trace_mse_rx1_tilde", num(d.trace_mse_rx1_tilde)},
                {"order_residual", num(d.order_residual)},
                {"markov_residual", num(d.markov_residual)}};
  return out;
}

Outcome cmd_lmmse(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const CovMatrix x = load_matrix(c.x, "--x", c.command);
  const CovMatrix r = load_matrix(c.r, "--r", c.command);
  const double bound = mi_lower_bound(x, r);
  const double mi = gaussian_mutual_information(x, r);
  Outcome out;
  out.summary.n = x.dim();
  out.summary.lhs = bound;
  out.summary.tol = ctx.tol;
  out.result = {{"lmmse", matrix_json(lmmse_matrix(x, r))},
                {"mi_lower_bound", num(bound)},
                {"gaussian_mi", num(mi)}};
  if (c.density) {
    // Non-Gaussian noise of variance at most r: the bound must stay below
    // the quadrature mutual information.
    if (x.dim() != 1) throw UsageError("lmmse-bound with --density needs scalar --x and --r");
    const GridDensity noise = make_density(*c.density, c.grid_points);
    if (noise.variance() > r(0, 0) + 1e-6 * std::max(1.0, r(0, 0))) {
      throw Error(ErrorCode::kInfeasibleDensity, "noise variance exceeds --r");
    }
    const double h_y = entropy_quadrature(convolve_density(noise, x(0, 0))).value;
    const double mi_q = h_y - entropy_quadrature(noise).value;
    out.summary.rhs = mi_q;
    out.summary.margin = mi_q - bound;
    out.result["quadrature_mi"] = num(mi_q);
  } else {
    out.summary.rhs = mi;
    out.summary.margin = -std::abs(mi - bound);
  }
  out.summary.passed = out.summary.margin >= -ctx.tol;
  return out;
}

Outcome cmd_variational(const Context& ctx) {
  const RunConfig& c = ctx.cfg;
  const double mu = require_mu(c);
  const double var_v = c.v.empty() ? 1.0 : load_scalar(c.v, "--v", c.command);
  if (!(var_v > 0.0)) throw UsageError("--v must be positive");
  const GridDensity fx = make_density(density_name(c.density), c.grid_points);
  const double half = 8.0 * std::sqrt(var_v);
  const GridDensity fv = GridDensity::tabulate_step(
      -half, half, fx.step(), [=](double t) { return normal_pdf(t, 0.0, var_v); });
  const GridDensity fy = convolve_densities(fx, fv);

  const FirstVariationFit fit = variational_first_fit(fx, fy, fv, mu);
  const SecondVariation form(fx, fy, fv, mu);
  const double lo = 1.0 - mu;
  const double hi = lo + 0.9 * (second_variation_alpha1_max(fx.variance(), var_v, mu) - lo);
  double worst = -std::numeric_limits<double>::infinity();
  for (std::int64_t t = 0; t < ctx.trials; ++t) {
    const auto idx = static_cast<std::uint64_t>(t);
    const double u =
        static_cast<double>(splitmix64(c.seed ^ splitmix64(~idx)) >> 11) * 0x1.0p-53;
    const double alpha1 = lo + u * (hi - lo);
    worst = std::max(worst, form.evaluate(admissible_perturbation(fx, c.seed, 2 * idx),
                                          admissible_perturbation(fy, c.seed, 2 * idx + 1),
                                          alpha1));
  }

  Outcome out;
  out.summary.mu = mu;
  out.summary.lhs = worst;
  out.summary.rhs = 0.0;
  out.summary.margin = -worst;
  out.summary.tol = ctx.tol;
  out.summary.trials = ctx.trials;
  out.summary.passed = out.summary.margin >= -ctx.tol;
  out.result = {{"first_variation",
                 {{"residual", num(fit.residual_rms)},
                  {"stationary", fit.residual_rms <= 1e-3},
                  {"alpha0", num(fit.alpha0)},
                  {"alpha1", num(fit.alpha1)},
                  {"gamma", num(fit.gamma)},
                  {"theta", num(fit.theta)},
                  {"phi", num(fit.phi)},
                  {"entropy_constraint", num(fit.entropy_constraint)},
                  {"max_inconsistency", num(fit.max_inconsistency)}}},
                {"second_variation",
                 {{"pairs", ctx.trials},
                  {"alpha1_min", num(lo)},
                  {"alpha1_max", num(hi)},
                  {"max_value", num(worst)}}}};
  return out;
}

struct CommandInfo {
  const char* name;
  Outcome (*handler)(const Context&);
  double default_tol;
  std::int64_t default_trials;
};

const CommandInfo kCommands[] = {
    {"construct-l", cmd_construct_l, 1e-8, 0},
    {"construct-k", cmd_construct_k, 1e-8, 0},
    {"optimum", cmd_optimum, 1e-6, 0},
    {"verify-eei", cmd_verify_eei, 1e-3, 0},
    {"verify-epi", cmd_verify_epi, 1e-4, 0},
    {"verify-worst-noise", cmd_verify_worst_noise, 1e-4, 0},
    {"search", cmd_search, 1e-6, 10000},
    {"broadcast-design", cmd_broadcast, 1e-9, 0},
    {"lmmse-bound", cmd_lmmse, 1e-10, 0},
    {"variational-check", cmd_variational, 1e-10, 100},
};

const CommandInfo* find_command(const std::string& name) {
  for (const CommandInfo& c : kCommands) {
    if (name == c.name) return &c;
  }
  return nullptr;
}

ojson config_json(const RunConfig& c, double tol, std::int64_t trials) {
  ojson j = {{"command", c.command}, {"mu", c.mu ? num(*c.mu) : ojson(nullptr)}};
  const std::pair<const char*, const std::string*> mats[] = {
      {"x", &c.x}, {"w", &c.w}, {"v", &c.v}, {"r", &c.r}, {"direction", &c.direction},
      {"wp", &c.wp}, {"z1", &c.z1}, {"z2", &c.z2}};
  for (const auto& [key, value] : mats) {
    if (!value->empty()) j[key] = *value;
  }
  j["density"] = density_name(c.density);
  j["density2"] = density_name(c.density2);
  j["tol"] = num(tol);
  j["trials"] = trials;
  j["seed"] = c.seed;
  j["grid_points"] = c.grid_points;
  j["format"] = c.format;
  return j;
}

void write_report(std::ostream& os, const RunConfig& c, const Outcome& o,
                  double tol, std::int64_t trials) {
  const Summary& s = o.summary;
  const std::string elapsed = c.timing ? fmt_double(s.elapsed_ms) : "";
  if (c.format == "csv") {
    os << "command,n,mu,lhs,rhs,margin,tol,trials,seed,elapsed_ms\n"
       << c.command << ',' << s.n << ',' << fmt_double(s.mu) << ','
       << fmt_double(s.lhs) << ',' << fmt_double(s.rhs) << ','
       << fmt_double(s.margin) << ',' << fmt_double(s.tol) << ',' << s.trials
       << ',' << c.seed << ',' << elapsed << '\n';
    return;
  }
  if (c.format == "text") {
    os << "eeikit " << kVersion << "  " << c.command << "  seed " << c.seed << '\n'
       << "config   " << config_json(c, tol, trials).dump() << '\n'
       << "n        " << s.n << '\n'
       << "mu       " << fmt_double(s.mu) << '\n'
       << "lhs      " << fmt_double(s.lhs) << '\n'
       << "rhs      " << fmt_double(s.rhs) << '\n'
       << "margin   " << fmt_double(s.margin) << '\n'
       << "tol      " << fmt_double(s.tol) << '\n'
       << "trials   " << s.trials << '\n';
    if (c.timing) os << "elapsed  " << elapsed << " ms\n";
    os << "result   " << (s.passed ? "PASS" : "FAIL") << '\n';
    return;
  }
  ojson summary = {{"n", s.n},          {"mu", num(s.mu)},       {"lhs", num(s.lhs)},
                   {"rhs", num(s.rhs)}, {"margin", num(s.margin)}, {"tol", num(s.tol)},
                   {"trials", s.trials}, {"passed", s.passed}};
  if (c.timing) summary["elapsed_ms"] = num(s.elapsed_ms);
  const ojson doc = {{"command", c.command},
                     {"version", kVersion},
                     {"seed", c.seed},
                     {"config", config_json(c, tol, trials)},
                     {"summary", std::move(summary)},
                     {"result", o.result}};
  os << doc.dump() << '\n';
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kDominationFailed:
    case ErrorCode::kSplitInfeasible:
    case ErrorCode::kNoConvergence:
    case ErrorCode::kSeparationFailed:
      return kCheckFailed;
    default:
      return kUsage;
  }
}

}  // namespace

const std::vector<std::string>& commands() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const CommandInfo& c : kCommands) v.emplace_back(c.name);
    return v;
  }();
  return names;
}

int run(const RunConfig& config, std::ostream& out, std::ostream& err) {
  const CommandInfo* info = find_command(config.command);
  if (info == nullptr) {
    err << "eeikit: unknown command '" << config.command << "'\n";
    return kUsage;
  }
  if (config.format != "json" && config.format != "csv" && config.format != "text") {
    err << "eeikit: unknown format '" << config.format << "'\n";
    return kUsage;
  }
  double default_tol = info->default_tol;
  if (info->handler == cmd_lmmse && config.density) default_tol = 1e-3;  // quadrature budget
  if (info->handler == cmd_optimum && config.v.empty()) default_tol = 1e-8;  // closed form
  const double tol = config.tol.value_or(default_tol);
  const std::int64_t trials = config.trials.value_or(info->default_trials);
  if (config.trials && *config.trials < 1) {
    err << "eeikit: --trials must be at least 1\n";
    return kUsage;
  }

  Outcome outcome;
  try {
    const auto t0 = std::chrono::steady_clock::now();
    outcome = info->handler(Context{config, tol, trials});
    outcome.summary.elapsed_ms = std::chrono::duration<double, std::milli>(
                                     std::chrono::steady_clock::now() - t0).count();
  } catch (const UsageError& e) {
    err << "eeikit: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "eeikit: " << to_string(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "eeikit: " << e.what() << '\n';
    return kUsage;
  }

  if (config.output.empty()) {
    write_report(out, config, outcome, tol, trials);
  } else {
    std::ofstream file(config.output);
    if (!file) {
      err << "eeikit: cannot write " << config.output << '\n';
      return kUsage;
    }
    write_report(file, config, outcome, tol, trials);
  }
  return outcome.summary.passed ? kPass : kCheckFailed;
}

int main_entry(int argc, const char* const* argv, std::ostream& out,
               std::ostream& err) {
  CLI::App app{"Constructions and numerical checks for the extremal entropy inequality",
               "eeikit"};
  app.set_version_flag("--version", std::string(kVersion));

  RunConfig cfg;
  double mu = 0.0;
  double tol = 0.0;
  std::int64_t trials = 0;
  std::string density, density2;

  app.add_option("command", cfg.command, "Command to run")
      ->required()
      ->check(CLI::IsMember(commands()));
  auto* mu_opt = app.add_option("--mu", mu, "Weight mu (> 1)");
  app.add_option("--x", cfg.x, "Sigma_X: matrix JSON file or number");
  app.add_option("--w", cfg.w, "Sigma_W (or W~ variance for verify-worst-noise)");
  app.add_option("--v", cfg.v, "Sigma_V (Sigma_V~ for construct-k)");
  app.add_option("--r", cfg.r, "Constraint R");
  app.add_option("--direction", cfg.direction, "Search direction for broadcast-design");
  app.add_option("--wp", cfg.wp, "W' variance for verify-worst-noise");
  app.add_option("--z1", cfg.z1, "Receiver-1 noise covariance");
  app.add_option("--z2", cfg.z2, "Receiver-2 noise covariance");
  auto* d1_opt = app.add_option(
      "--density", density,
      "gaussian[:var] | uniform[:a,b] | mixture:w,m1,s1,m2,s2");
  auto* d2_opt = app.add_option("--density2", density2, "Second density for verify-epi");
  auto* tol_opt = app.add_option("--tol", tol, "Tolerance (default depends on the command)");
  auto* trials_opt = app.add_option("--trials", trials, "Random trials");
  auto* seed_opt = app.add_option("--seed", cfg.seed, "Seed (default 42, or $EEI_SEED)");
  app.add_option("--grid-points", cfg.grid_points, "Grid points for 1-D densities")
      ->check(CLI::Range(std::size_t{3}, std::size_t{10000001}));
  app.add_option("--output", cfg.output, "Write the report to this file");
  app.add_option("--format", cfg.format, "json | csv | text")
      ->check(CLI::IsMember({"json", "csv", "text"}));
  app.add_flag("--timing", cfg.timing, "Include elapsed time in the report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kUsage;
  }

  if (mu_opt->count() > 0) cfg.mu = mu;
  if (tol_opt->count() > 0) cfg.tol = tol;
  if (trials_opt->count() > 0) cfg.trials = trials;
  if (d1_opt->count() > 0) cfg.density = density;
  if (d2_opt->count() > 0) cfg.density2 = density2;
  if (seed_opt->count() == 0) {
    if (const char* env = std::getenv("EEI_SEED")) {
      char* end = nullptr;
      const unsigned long long s = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') {
        err << "eeikit: EEI_SEED must be an unsigned integer\n";
        return kUsage;
      }
      cfg.seed = s;
    }
  }
  return run(cfg, out, err);
}

}  // namespace eei::cli
