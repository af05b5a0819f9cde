#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "hdelm/eval.hpp"
#include "hdelm/lsq.hpp"
#include "hdelm/problems.hpp"
#include "hdelm/solution.hpp"

namespace hdelm {

enum class Method { elm, elm_atfc };
const char* method_name(Method m);
Method parse_method(const std::string& name);

struct DecompositionSpec {
  std::vector<int> dirs;
  std::vector<int> counts;
};

struct SliceSpec {
  int i = 0;
  int j = 1;
  Index q = 800;
  std::optional<std::vector<double>> fixed;  // default: default_slice_point
};

struct RateConfig {
  int d = 8;
  std::vector<int> widths{64, 128, 256, 512, 1024};
  Index samples = 4000;       // training points per fit
  Index test_samples = 4000;  // held-out points
  std::vector<std::uint64_t> seeds{1, 2, 3, 4, 5};
  double r_m = 1.0;
  /// Target on [-1, 1]^d; default |s| + sin s with s the coordinate mean.
  std::function<double(std::span<const double>)> target;

  void validate() const;
};

struct RunConfig {
  std::string problem = "poisson";
  int d = 2;
  Method method = Method::elm;
  int width = 100;
  Index n_in = 100;
  Index n_bc = 10;
  Index n_t0 = 0;
  double r_m = 0.5;
  std::vector<double> r_m_candidates;
  std::uint64_t seed = 1;
  std::optional<DecompositionSpec> decomposition;
  int continuity_order = 1;
  NllsqOptions solver;
  Index test_n_bc = 100;
  Index test_n_in = 7000;

  // Subcommand inputs.
  std::string sweep_axis;  // width | n_bc | n_in
  std::vector<double> sweep_values;
  SliceSpec slice;
  RateConfig rate;

  std::string out_dir = ".";

  void validate() const;
};

/// Seeds derived from RunConfig::seed for each random stream.
struct SeedPolicy {
  std::uint64_t layer = 0;
  std::uint64_t collocation = 0;
  std::uint64_t test = 0;
  std::uint64_t solver = 0;
  static SeedPolicy from(std::uint64_t seed);
};

struct SolveReport {
  RunConfig config;
  SeedPolicy seeds;
  bool nonlinear = false;
  SolveResult result;
  ErrorPair error;             // on the test set (zero when no exact solution)
  bool has_exact = false;
  Index system_rows = 0;
  Index system_cols = 0;
  double time_assemble = 0.0;
  double time_solve = 0.0;
  double time_total = 0.0;
  std::optional<SolutionField> solution;
};

/// Sample, assemble, solve and evaluate one configuration on a catalog problem.
SolveReport run_solve(const RunConfig& config);
/// Same with a caller-supplied problem (config.problem and config.d only label the report).
SolveReport run_solve(const RunConfig& config, const PdeProblem& problem);

struct SelectionResult {
  double r_m0 = 0.0;
  bool by_error = true;  // false: selected by residual norm
  std::vector<SolveReport> reports;
};

/// Index of the smallest metric; ties go to the smaller candidate value.
std::size_t select_candidate(const std::vector<double>& candidates, const std::vector<double>& metric);

SelectionResult run_select_rm(const RunConfig& config);

/// One run_solve per value of axis (width | n_bc | n_in) with every seed held fixed.
std::vector<SolveReport> run_sweep(const RunConfig& config, const std::string& axis, const std::vector<double>& values);

struct RateRow {
  int n = 0;
  double mse_mean = 0.0;
  double mse_std = 0.0;
};
struct RateResult {
  std::vector<RateRow> rows;
  double slope = 0.0;  // least-squares slope of log(mse_mean) against log(n)
};
RateResult run_rate_study(const RateConfig& config);

/// Least-squares slope of log(y) against log(x).
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

// CSV emission. Lines starting with '#' are comments carrying run metadata.
void write_runs_header(std::ostream& out);
void write_runs_row(std::ostream& out, const SolveReport& report);
void write_runs_csv(std::ostream& out, const std::vector<SolveReport>& reports,
                    const std::vector<std::string>& comments = {});
void write_rate_csv(std::ostream& out, const RateResult& result, const std::vector<std::string>& comments = {});

/// Parses a JSON configuration; unknown keys and bad values throw InvalidArgument.
RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);

}  // namespace hdelm
