#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "hdelm/errors.hpp"
#include "hdelm/harness.hpp"

namespace {

using namespace hdelm;

constexpr int kExitInvalidConfig = 2;
constexpr int kExitNotConverged = 3;

struct CommonArgs {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out;
};

RunConfig load(const CommonArgs& a) {
  RunConfig c = a.config_path.empty() ? RunConfig{} : load_config(a.config_path);
  if (a.seed) c.seed = *a.seed;
  if (!a.out.empty()) c.out_dir = a.out;
  c.validate();
  return c;
}

std::ofstream open_out(const RunConfig& c, const std::string& name) {
  std::filesystem::create_directories(c.out_dir);
  const auto path = std::filesystem::path(c.out_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  std::cout << "wrote " << path.string() << "\n";
  return out;
}

std::vector<std::string> seed_comments(const RunConfig& c) {
  const SeedPolicy s = SeedPolicy::from(c.seed);
  return {"seed=" + std::to_string(c.seed) + " layer_seed=" + std::to_string(s.layer) +
              " collocation_seed=" + std::to_string(s.collocation) + " test_seed=" + std::to_string(s.test),
          "seed policy: layer and collocation seeds fixed across all rows"};
}

void print_report(const SolveReport& r) {
  std::printf("%s d=%d %s M=%d rows=%lld cols=%lld r_m=%g  e_inf=%.3e e_rms=%.3e residual=%.3e iters=%d restarts=%d "
              "converged=%s time=%.2fs\n",
              r.config.problem.c_str(), r.config.d, method_name(r.config.method), r.config.width,
              static_cast<long long>(r.system_rows), static_cast<long long>(r.system_cols), r.config.r_m,
              r.error.e_inf, r.error.e_rms, r.result.residual_norm, r.result.iterations, r.result.restarts,
              r.result.converged ? "yes" : "no", r.time_total);
}

int status_of(const std::vector<SolveReport>& reports) {
  for (const auto& r : reports)
    if (!r.result.converged) return kExitNotConverged;
  return 0;
}

void add_common(CLI::App* sub, CommonArgs& a, bool config_required) {
  auto* opt = sub->add_option("--config", a.config_path, "JSON run configuration");
  if (config_required) opt->required();
  sub->add_option("--seed", a.seed, "override the configuration seed");
  sub->add_option("--out", a.out, "output directory (overrides output.dir)");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Randomized-feature least-squares PDE solver"};
  app.require_subcommand(1);
  CommonArgs args;

  auto* solve = app.add_subcommand("solve", "solve one configuration and write runs.csv");
  add_common(solve, args, true);

  auto* sweep = app.add_subcommand("sweep", "sweep width, n_bc or n_in and write runs.csv");
  add_common(sweep, args, true);
  std::string axis;
  std::vector<double> values;
  sweep->add_option("--axis", axis, "width | n_bc | n_in (overrides sweep.axis)");
  sweep->add_option("--values", values, "swept values (override sweep.values)");

  auto* select = app.add_subcommand("select-rm", "pick r_m from r_m_candidates and write runs.csv");
  add_common(select, args, true);

  auto* slice = app.add_subcommand("slice", "solve, then write slice.csv on a 2-D cross-section");
  add_common(slice, args, true);

  auto* rate = app.add_subcommand("rate-study", "random-feature approximation rate study, writes rate.csv");
  add_common(rate, args, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitInvalidConfig;
  }

  try {
    RunConfig cfg = load(args);
    if (solve->parsed()) {
      const SolveReport r = run_solve(cfg);
      print_report(r);
      auto out = open_out(cfg, "runs.csv");
      write_runs_csv(out, {r}, seed_comments(cfg));
      return status_of({r});
    }
    if (sweep->parsed()) {
      if (!axis.empty()) cfg.sweep_axis = axis;
      if (!values.empty()) cfg.sweep_values = values;
      const auto reports = run_sweep(cfg, cfg.sweep_axis, cfg.sweep_values);
      for (const auto& r : reports) print_report(r);
      auto comments = seed_comments(cfg);
      comments.push_back("sweep axis=" + cfg.sweep_axis);
      auto out = open_out(cfg, "runs.csv");
      write_runs_csv(out, reports, comments);
      return status_of(reports);
    }
    if (select->parsed()) {
      const SelectionResult sel = run_select_rm(cfg);
      for (const auto& r : sel.reports) print_report(r);
      std::printf("selected r_m0=%g (by %s)\n", sel.r_m0, sel.by_error ? "e_rms" : "residual norm");
      auto comments = seed_comments(cfg);
      char buf[64];
      std::snprintf(buf, sizeof buf, "selected r_m0=%.17g by=%s", sel.r_m0, sel.by_error ? "e_rms" : "residual");
      comments.emplace_back(buf);
      auto out = open_out(cfg, "runs.csv");
      write_runs_csv(out, sel.reports, comments);
      return status_of(sel.reports);
    }
    if (slice->parsed()) {
      const PdeProblem problem = make_problem(cfg.problem, cfg.d);
      if (!problem.exact) throw InvalidArgument("slice needs a problem with an exact solution");
      const SolveReport r = run_solve(cfg, problem);
      print_report(r);
      const auto fixed = cfg.slice.fixed.value_or(default_slice_point(problem.domain));
      auto out = open_out(cfg, "slice.csv");
      write_slice_csv(out, *r.solution, *problem.exact, problem.domain, cfg.slice.i, cfg.slice.j, fixed, cfg.slice.q);
      return status_of({r});
    }
    if (rate->parsed()) {
      const RateResult res = run_rate_study(cfg.rate);
      for (const auto& row : res.rows) std::printf("n=%d mse_mean=%.4e mse_std=%.4e\n", row.n, row.mse_mean, row.mse_std);
      std::printf("slope=%.4f\n", res.slope);
      auto out = open_out(cfg, "rate.csv");
      char buf[96];
      std::snprintf(buf, sizeof buf, "d=%d samples=%lld test_samples=%lld r_m=%.17g", cfg.rate.d,
                    static_cast<long long>(cfg.rate.samples), static_cast<long long>(cfg.rate.test_samples),
                    cfg.rate.r_m);
      write_rate_csv(out, res, {buf});
      return 0;
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const NotFound& e) {
    std::cerr << "invalid configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const UnsupportedConfiguration& e) {
    std::cerr << "unsupported configuration: " << e.what() << "\n";
    return kExitInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
