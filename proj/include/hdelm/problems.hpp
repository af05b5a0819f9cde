#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/types.hpp"

namespace hdelm {

/// Scalar function on the closure of a domain, with optional analytic pure
/// partials. Without them, partial() falls back to central differences
/// (h = 1e-4 for orders 1-2, h = 1e-2 for order 3).
class ScalarField {
 public:
  using ValueFn = std::function<double(std::span<const double>)>;
  /// (x, coordinate k, order in 0..3) -> d^order f / dx_k^order
  using PartialFn = std::function<double(std::span<const double>, int, int)>;

  ScalarField() = default;
  explicit ScalarField(ValueFn value, PartialFn partial = {})
      : value_(std::move(value)), partial_(std::move(partial)) {}

  double operator()(std::span<const double> x) const { return value_(x); }
  double partial(std::span<const double> x, int k, int order) const;
  bool has_analytic_partials() const { return static_cast<bool>(partial_); }
  explicit operator bool() const { return static_cast<bool>(value_); }

 private:
  ValueFn value_;
  PartialFn partial_;
};

/// Evaluates a scalar field and its pure partials on a point block, as a one-column FeatureEval.
FeatureEval eval_field(const ScalarField& f, const PointBlock& points, int max_order);

/// Central-difference pure partial of order 1..3 with step h (test oracles and fallbacks).
double fd_partial(const ScalarField::ValueFn& f, std::span<const double> x, int k, int order, double h);

/// L = c_time d/dt + c_lap Laplacian + sum_k advection_k d/dx_k + c_third sum_k d3/dx_k3 + c_id I.
/// Laplacian and third-order sums run over the spatial_dim spatial coordinates only.
struct LinearOperatorSpec {
  int spatial_dim = 1;
  double c_time = 0.0;
  double c_lap = 0.0;
  std::vector<double> advection;  // empty or spatial_dim entries
  double c_third = 0.0;
  double c_id = 0.0;

  /// Highest feature derivative order this operator reads.
  int max_order() const;
};

/// Arguments of a nonlinear term at one point: u, its spatial gradient and Laplacian.
struct NonlinearState {
  std::span<const double> x;
  double u = 0.0;
  std::span<const double> grad;
  double lap = 0.0;
};

struct NonlinearPartials {
  double d_u = 0.0;
  std::vector<double> d_grad;  // spatial_dim entries (may be empty when N ignores grad u)
  double d_lap = 0.0;
};

/// mu * N(x, u, grad u, lap u).
struct NonlinearTerm {
  double mu = 1.0;
  std::function<double(const NonlinearState&)> value;
  std::function<NonlinearPartials(const NonlinearState&)> partials;
};

/// L u + mu N(u) = Q in the domain, u = H on the spatial faces and at t = 0.
struct PdeProblem {
  std::string name;
  BoxDomain domain;
  LinearOperatorSpec linear;
  std::optional<NonlinearTerm> nonlinear;
  std::function<double(std::span<const double>)> forcing;
  ScalarField boundary;
  std::optional<ScalarField> exact;

  /// Feature derivative order needed to assemble the residual.
  int required_order() const;
  /// Checks operator/domain consistency; throws InvalidArgument.
  void validate() const;
};

/// Catalog names accepted by make_problem.
const std::vector<std::string>& problem_names();

/// poisson | nonlinear-poisson | heat | advection-diffusion | kdv on [-1, 1]^d
/// (times [0, 1] for the dynamic ones), with manufactured solutions in
/// s = (1/d) sum x_i. Unknown names throw NotFound.
PdeProblem make_problem(const std::string& name, int d);

/// (L V_j)(x_i) for every point i and feature j.
Matrix apply_linear(const LinearOperatorSpec& spec, const FeatureEval& feval);

/// Max |L u_ex + mu N(u_ex) - Q| over points, with every derivative of u_ex
/// taken by central differences (independent of the analytic partials).
double verify_manufactured(const PdeProblem& problem, const PointBlock& points);

}  // namespace hdelm
