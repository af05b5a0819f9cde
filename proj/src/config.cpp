#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "hdelm/errors.hpp"
#include "hdelm/harness.hpp"

namespace hdelm {

namespace {

using json = nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  if (!obj.is_object()) throw InvalidArgument(where + ": expected an object");
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key())) throw InvalidArgument(where + ": unknown key '" + it.key() + "'");
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw InvalidArgument(where + "." + key + ": " + e.what());
  }
}

void read_solver(const json& j, NllsqOptions& s) {
  const std::string w = "solver";
  reject_unknown(j, {"max_iterations", "step_tol", "residual_tol", "cost_tol", "initial_radius", "shrink", "expand",
                     "eta_low", "eta_high", "perturb", "restart_threshold", "max_restarts"},
                 w);
  read(j, "max_iterations", s.max_iterations, w);
  read(j, "step_tol", s.step_tol, w);
  read(j, "residual_tol", s.residual_tol, w);
  read(j, "cost_tol", s.cost_tol, w);
  read(j, "initial_radius", s.initial_radius, w);
  read(j, "shrink", s.shrink, w);
  read(j, "expand", s.expand, w);
  read(j, "eta_low", s.eta_low, w);
  read(j, "eta_high", s.eta_high, w);
  read(j, "perturb", s.perturb, w);
  read(j, "restart_threshold", s.restart_threshold, w);
  read(j, "max_restarts", s.max_restarts, w);
}

}  // namespace

RunConfig parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidArgument(std::string("config is not valid JSON: ") + e.what());
  }
  const std::string w = "config";
  reject_unknown(root, {"problem", "d", "method", "width", "n_in", "n_bc", "n_t0", "r_m", "r_m_candidates", "seed",
                        "decomposition", "continuity_order", "solver", "test", "output", "sweep", "slice", "rate"},
                 w);
  RunConfig c;
  read(root, "problem", c.problem, w);
  read(root, "d", c.d, w);
  if (root.contains("method")) {
    std::string m;
    read(root, "method", m, w);
    c.method = parse_method(m);
  }
  read(root, "width", c.width, w);
  read(root, "n_in", c.n_in, w);
  read(root, "n_bc", c.n_bc, w);
  read(root, "n_t0", c.n_t0, w);
  read(root, "r_m", c.r_m, w);
  read(root, "r_m_candidates", c.r_m_candidates, w);
  read(root, "seed", c.seed, w);
  read(root, "continuity_order", c.continuity_order, w);
  if (root.contains("decomposition")) {
    const auto& j = root["decomposition"];
    reject_unknown(j, {"dirs", "counts"}, "decomposition");
    DecompositionSpec spec;
    read(j, "dirs", spec.dirs, "decomposition");
    read(j, "counts", spec.counts, "decomposition");
    if (spec.dirs.size() != spec.counts.size()) throw InvalidArgument("decomposition: dirs/counts length mismatch");
    c.decomposition = spec;
  }
  if (root.contains("solver")) read_solver(root["solver"], c.solver);
  if (root.contains("test")) {
    const auto& j = root["test"];
    reject_unknown(j, {"n_bc", "n_in"}, "test");
    read(j, "n_bc", c.test_n_bc, "test");
    read(j, "n_in", c.test_n_in, "test");
  }
  if (root.contains("output")) {
    const auto& j = root["output"];
    reject_unknown(j, {"dir"}, "output");
    read(j, "dir", c.out_dir, "output");
  }
  if (root.contains("sweep")) {
    const auto& j = root["sweep"];
    reject_unknown(j, {"axis", "values"}, "sweep");
    read(j, "axis", c.sweep_axis, "sweep");
    read(j, "values", c.sweep_values, "sweep");
  }
  if (root.contains("slice")) {
    const auto& j = root["slice"];
    reject_unknown(j, {"plane", "q", "fixed"}, "slice");
    if (j.contains("plane")) {
      std::vector<int> plane;
      read(j, "plane", plane, "slice");
      if (plane.size() != 2) throw InvalidArgument("slice.plane: expected two coordinate indices");
      c.slice.i = plane[0];
      c.slice.j = plane[1];
    }
    read(j, "q", c.slice.q, "slice");
    if (j.contains("fixed")) {
      std::vector<double> fixed;
      read(j, "fixed", fixed, "slice");
      c.slice.fixed = fixed;
    }
  }
  if (root.contains("rate")) {
    const auto& j = root["rate"];
    reject_unknown(j, {"d", "widths", "samples", "test_samples", "seeds", "r_m"}, "rate");
    read(j, "d", c.rate.d, "rate");
    read(j, "widths", c.rate.widths, "rate");
    read(j, "samples", c.rate.samples, "rate");
    read(j, "test_samples", c.rate.test_samples, "rate");
    read(j, "seeds", c.rate.seeds, "rate");
    read(j, "r_m", c.rate.r_m, "rate");
  }
  c.validate();
  return c;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace hdelm
