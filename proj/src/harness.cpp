#include "hdelm/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <variant>

#include "hdelm/assembly.hpp"
#include "hdelm/errors.hpp"
#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/rng.hpp"

namespace hdelm {

const char* method_name(Method m) { return m == Method::elm ? "elm" : "elm-atfc"; }

Method parse_method(const std::string& name) {
  if (name == "elm") return Method::elm;
  if (name == "elm-atfc") return Method::elm_atfc;
  throw InvalidArgument("unknown method '" + name + "' (expected elm or elm-atfc)");
}

SeedPolicy SeedPolicy::from(std::uint64_t seed) {
  return {derive_seed(seed, 1), derive_seed(seed, 2), derive_seed(seed, 3), derive_seed(seed, 4)};
}

void RateConfig::validate() const {
  if (d < 1) throw InvalidArgument("rate: d must be >= 1");
  if (widths.size() < 3) throw InvalidArgument("rate: at least 3 widths are needed to fit a slope");
  if (seeds.size() < 3) throw InvalidArgument("rate: at least 3 seeds are needed");
  for (int w : widths)
    if (w < 1) throw InvalidArgument("rate: widths must be >= 1");
  if (samples < 1 || test_samples < 1) throw InvalidArgument("rate: sample counts must be >= 1");
  if (!(r_m > 0)) throw InvalidArgument("rate: r_m must be > 0");
}

void RunConfig::validate() const {
  if (d < 1) throw InvalidArgument("d must be >= 1");
  if (width < 1) throw InvalidArgument("width must be >= 1");
  if (n_in < 0 || n_bc < 0 || n_t0 < 0) throw InvalidArgument("point counts must be >= 0");
  if (!(r_m > 0)) throw InvalidArgument("r_m must be > 0");
  for (double c : r_m_candidates)
    if (!(c > 0)) throw InvalidArgument("r_m candidates must be > 0");
  if (continuity_order < 0 || continuity_order > 1) throw InvalidArgument("continuity_order must be 0 or 1");
  if (test_n_bc < 0 || test_n_in < 0 || test_n_bc + test_n_in == 0) throw InvalidArgument("empty test set");
  if (decomposition) {
    if (method == Method::elm_atfc)
      throw InvalidArgument("elm-atfc cannot be combined with a domain decomposition");
    if (problem == "kdv") throw InvalidArgument("kdv cannot be combined with a domain decomposition");
  }
  solver.validate();
}

namespace {

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

SolveReport run_solve(const RunConfig& config) {
  config.validate();
  return run_solve(config, make_problem(config.problem, config.d));
}

SolveReport run_solve(const RunConfig& config, const PdeProblem& problem) {
  config.validate();
  problem.validate();
  const auto t_start = Clock::now();
  const BoxDomain& domain = problem.domain;
  if (!domain.time_dependent() && config.n_t0 > 0)
    throw InvalidArgument("n_t0 > 0 requires a time-dependent problem");

  SolveReport report;
  report.config = config;
  report.seeds = SeedPolicy::from(config.seed);
  report.nonlinear = problem.nonlinear.has_value();

  AssembleOptions aopt;
  aopt.continuity_order = config.continuity_order;

  const auto t_asm = Clock::now();
  std::variant<std::monostate, LinearSystem, NonlinearSystem> system;
  std::vector<FeatureLayer> layers;
  std::optional<Decomposition> dec;
  if (config.method == Method::elm_atfc) {
    layers.push_back(init_layer(domain.dim_total(), config.width, config.r_m, report.seeds.layer));
    const CollocationSet colloc =
        sample_collocation(domain, config.n_in, config.n_bc, config.n_t0, report.seeds.collocation);
    std::visit([&](auto&& s) { system = std::move(s); }, assemble_atfc(problem, layers[0], colloc, aopt));
  } else {
    dec = config.decomposition ? decompose(domain, config.decomposition->dirs, config.decomposition->counts)
                               : decompose(domain, {}, {});
    const int n = dec->size();
    for (int i = 0; i < n; ++i)
      layers.push_back(init_layer(domain.dim_total(), config.width, config.r_m,
                                  subdomain_seed(report.seeds.layer, i, n)));
    const auto colloc = sample_decomposed(*dec, config.n_in, config.n_bc, config.n_t0, report.seeds.collocation);
    std::visit([&](auto&& s) { system = std::move(s); }, assemble_elm(problem, *dec, layers, colloc, aopt));
  }
  report.time_assemble = seconds_since(t_asm);

  const auto t_solve = Clock::now();
  if (auto* lin = std::get_if<LinearSystem>(&system)) {
    report.system_rows = lin->rows();
    report.system_cols = lin->cols();
    report.result = min_norm_lsq(lin->matrix, lin->rhs);
  } else {
    auto& nl = std::get<NonlinearSystem>(system);
    report.system_rows = nl.rows();
    report.system_cols = nl.cols();
    NllsqOptions opt = config.solver;
    opt.seed = report.seeds.solver;
    report.result = nllsq_perturb([&nl](const Vector& p) { return nl.residual(p); },
                                  [&nl](const Vector& p) { return nl.jacobian(p); }, nl.cols(), opt);
  }
  report.time_solve = seconds_since(t_solve);
  system = std::monostate{};

  report.solution = config.method == Method::elm_atfc
                        ? SolutionField::atfc(problem, layers[0], report.result.phi)
                        : SolutionField::elm(*dec, layers, report.result.phi);
  if (problem.exact) {
    const PointBlock test = sample_test_set(domain, config.test_n_bc, config.test_n_in, report.seeds.test);
    report.error = errors(report.solution->evaluate(test), field_values(*problem.exact, test));
    report.has_exact = true;
  }
  report.time_total = seconds_since(t_start);
  return report;
}

std::size_t select_candidate(const std::vector<double>& candidates, const std::vector<double>& metric) {
  if (candidates.empty() || candidates.size() != metric.size())
    throw InvalidArgument("select_candidate: need one metric per candidate");
  std::size_t best = 0;
  for (std::size_t i = 1; i < candidates.size(); ++i) {
    if (metric[i] < metric[best] || (metric[i] == metric[best] && candidates[i] < candidates[best])) best = i;
  }
  return best;
}

SelectionResult run_select_rm(const RunConfig& config) {
  const std::vector<double> candidates =
      config.r_m_candidates.empty() ? std::vector<double>{config.r_m} : config.r_m_candidates;
  SelectionResult out;
  std::vector<double> metric;
  for (double c : candidates) {
    RunConfig cfg = config;
    cfg.r_m = c;
    out.reports.push_back(run_solve(cfg));
  }
  out.by_error = std::all_of(out.reports.begin(), out.reports.end(), [](const auto& r) { return r.has_exact; });
  for (const auto& r : out.reports) metric.push_back(out.by_error ? r.error.e_rms : r.result.residual_norm);
  out.r_m0 = candidates[select_candidate(candidates, metric)];
  return out;
}

std::vector<SolveReport> run_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values) {
  if (axis != "width" && axis != "n_bc" && axis != "n_in")
    throw InvalidArgument("sweep axis must be width, n_bc or n_in");
  if (values.size() < 2) throw InvalidArgument("sweep needs at least 2 values");
  std::vector<SolveReport> out;
  for (double v : values) {
    if (!(v >= 1) || v != std::floor(v)) throw InvalidArgument("sweep values must be positive integers");
    RunConfig cfg = config;
    if (axis == "width") cfg.width = static_cast<int>(v);
    else if (axis == "n_bc") cfg.n_bc = static_cast<Index>(v);
    else cfg.n_in = static_cast<Index>(v);
    out.push_back(run_solve(cfg));
    out.back().solution.reset();
  }
  return out;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw InvalidArgument("loglog_slope: need >= 2 matching points");
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0 && y[i] > 0)) throw InvalidArgument("loglog_slope: values must be positive");
    mx += std::log(x[i]) / n;
    my += std::log(y[i]) / n;
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = std::log(x[i]) - mx;
    sxy += dx * (std::log(y[i]) - my);
    sxx += dx * dx;
  }
  if (sxx == 0) throw InvalidArgument("loglog_slope: all x values are equal");
  return sxy / sxx;
}

RateResult run_rate_study(const RateConfig& config) {
  config.validate();
  const int d = config.d;
  const auto target = config.target ? config.target : [d](std::span<const double> x) {
    double s = 0;
    for (double v : x) s += v;
    s /= d;
    return std::abs(s) + std::sin(s);
  };
  const BoxDomain cube = BoxDomain::cube(d, -1.0, 1.0);
  RateResult out;
  std::vector<double> ns, ms;
  for (int n : config.widths) {
    std::vector<double> mse;
    for (std::uint64_t seed : config.seeds) {
      const FeatureLayer layer = init_layer(d, n, config.r_m, derive_seed(seed, 1));
      const PointBlock train = sample_interior(cube, config.samples, derive_seed(seed, 2));
      const PointBlock test = sample_interior(cube, config.test_samples, derive_seed(seed, 3));
      const ScalarField f(target);
      const SolveResult fit = min_norm_lsq(eval_values(layer, train), field_values(f, train));
      const Vector diff = eval_values(layer, test) * fit.phi - field_values(f, test);
      mse.push_back(diff.squaredNorm() / static_cast<double>(diff.size()));
    }
    RateRow row;
    row.n = n;
    for (double m : mse) row.mse_mean += m / static_cast<double>(mse.size());
    for (double m : mse) row.mse_std += (m - row.mse_mean) * (m - row.mse_mean);
    row.mse_std = mse.size() > 1 ? std::sqrt(row.mse_std / static_cast<double>(mse.size() - 1)) : 0.0;
    out.rows.push_back(row);
    ns.push_back(n);
    ms.push_back(row.mse_mean);
  }
  const bool all_positive = std::all_of(ms.begin(), ms.end(), [](double m) { return m > 0; });
  out.slope = all_positive ? loglog_slope(ns, ms) : 0.0;
  return out;
}

namespace {
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}
}  // namespace

void write_runs_header(std::ostream& out) {
  out << "problem,d,method,M,n_in,n_bc,n_t0,r_m,seed,e_inf,e_rms,residual,iters,time_s\n";
}

void write_runs_row(std::ostream& out, const SolveReport& r) {
  const auto& c = r.config;
  char t[32];
  std::snprintf(t, sizeof t, "%.3f", r.time_total);
  out << c.problem << ',' << c.d << ',' << method_name(c.method) << ',' << c.width << ',' << c.n_in << ','
      << c.n_bc << ',' << c.n_t0 << ',' << fmt(c.r_m) << ',' << c.seed << ',' << fmt(r.error.e_inf) << ','
      << fmt(r.error.e_rms) << ',' << fmt(r.result.residual_norm) << ',' << r.result.iterations << ',' << t
      << '\n';
}

void write_runs_csv(std::ostream& out, const std::vector<SolveReport>& reports, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  write_runs_header(out);
  for (const auto& r : reports) write_runs_row(out, r);
}

void write_rate_csv(std::ostream& out, const RateResult& result, const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "# slope=" << fmt(result.slope) << '\n';
  out << "n,mse_mean,mse_std\n";
  for (const auto& r : result.rows) out << r.n << ',' << fmt(r.mse_mean) << ',' << fmt(r.mse_std) << '\n';
}

}  // namespace hdelm
