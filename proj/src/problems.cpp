#include "hdelm/problems.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "hdelm/errors.hpp"

namespace hdelm {

double fd_partial(const ScalarField::ValueFn& f, std::span<const double> x, int k, int order, double h) {
  std::vector<double> y(x.begin(), x.end());
  auto at = [&](double offset) {
    y[k] = x[k] + offset;
    return f(y);
  };
  switch (order) {
    case 0: return f(x);
    case 1: return (at(h) - at(-h)) / (2.0 * h);
    case 2: return (at(h) - 2.0 * f(x) + at(-h)) / (h * h);
    case 3: return (at(2.0 * h) - 2.0 * at(h) + 2.0 * at(-h) - at(-2.0 * h)) / (2.0 * h * h * h);
    default: throw InvalidArgument("fd_partial: order must be in 0..3");
  }
}

double ScalarField::partial(std::span<const double> x, int k, int order) const {
  if (partial_) return partial_(x, k, order);
  if (order == 0) return value_(x);
  return fd_partial(value_, x, k, order, order == 3 ? 1e-2 : 1e-4);
}

FeatureEval eval_field(const ScalarField& f, const PointBlock& points, int max_order) {
  const int dims = static_cast<int>(points.cols());
  FeatureEval out = FeatureEval::zeros(points.rows(), 1, dims, max_order);
  for (Index r = 0; r < points.rows(); ++r) {
    std::span<const double> x(points.row(r).data(), dims);
    out.values(r, 0) = f(x);
    for (int order = 1; order <= max_order; ++order)
      for (int k = 0; k < dims; ++k) out.derivative(k, order)(r, 0) = f.partial(x, k, order);
  }
  return out;
}

int LinearOperatorSpec::max_order() const {
  int order = 0;
  if (c_time != 0.0) order = std::max(order, 1);
  if (std::any_of(advection.begin(), advection.end(), [](double a) { return a != 0.0; })) order = std::max(order, 1);
  if (c_lap != 0.0) order = std::max(order, 2);
  if (c_third != 0.0) order = 3;
  return order;
}

int PdeProblem::required_order() const {
  return std::max(linear.max_order(), nonlinear ? 2 : 0);
}

void PdeProblem::validate() const {
  if (linear.spatial_dim != domain.d()) throw InvalidArgument("PdeProblem: operator dimension differs from domain");
  if (!linear.advection.empty() && static_cast<int>(linear.advection.size()) != domain.d())
    throw InvalidArgument("PdeProblem: advection vector needs d entries");
  if (linear.c_time != 0.0 && !domain.time_dependent())
    throw InvalidArgument("PdeProblem: time derivative on a stationary domain");
  if (!forcing || !boundary) throw InvalidArgument("PdeProblem: forcing and boundary data are required");
  if (nonlinear && !nonlinear->value) throw InvalidArgument("PdeProblem: nonlinear term without value function");
}

Matrix apply_linear(const LinearOperatorSpec& spec, const FeatureEval& feval) {
  const int d = spec.spatial_dim;
  if (spec.max_order() > feval.max_order)
    throw InvalidArgument("apply_linear: operator needs derivative order " + std::to_string(spec.max_order()) +
                          ", evaluation provides " + std::to_string(feval.max_order));
  if (feval.dim_total() < d) throw InvalidArgument("apply_linear: evaluation has fewer coordinates than spatial_dim");
  if (spec.c_time != 0.0 && feval.dim_total() != d + 1)
    throw InvalidArgument("apply_linear: time derivative requested without a time coordinate");
  if (!spec.advection.empty() && static_cast<int>(spec.advection.size()) != d)
    throw InvalidArgument("apply_linear: advection vector size differs from spatial_dim");

  Matrix out = Matrix::Zero(feval.rows(), feval.cols());
  if (spec.c_id != 0.0) out += spec.c_id * feval.values;
  if (spec.c_time != 0.0) out += spec.c_time * feval.grad[d];
  for (int k = 0; k < d; ++k) {
    if (!spec.advection.empty() && spec.advection[k] != 0.0) out += spec.advection[k] * feval.grad[k];
    if (spec.c_lap != 0.0) out += spec.c_lap * feval.diag2[k];
    if (spec.c_third != 0.0) out += spec.c_third * feval.diag3[k];
  }
  return out;
}

namespace {

// Ridge fields p(s) * q(t) with s = (1/d) sum x_i; p and q given with three derivatives.
using Derivs = std::function<std::array<double, 4>(double)>;

ScalarField ridge_field(int d, bool dynamic, Derivs profile, Derivs decay) {
  auto mean = [d](std::span<const double> x) {
    double s = 0.0;
    for (int i = 0; i < d; ++i) s += x[i];
    return s / d;
  };
  auto time_of = [d, dynamic](std::span<const double> x) { return dynamic ? x[d] : 0.0; };
  auto value = [=](std::span<const double> x) { return profile(mean(x))[0] * decay(time_of(x))[0]; };
  auto partial = [=](std::span<const double> x, int k, int order) {
    const auto p = profile(mean(x));
    const auto q = decay(time_of(x));
    if (k < d) return std::pow(1.0 / d, order) * p[order] * q[0];
    return p[0] * q[order];
  };
  return ScalarField(value, partial);
}

std::array<double, 4> constant_one(double) { return {1.0, 0.0, 0.0, 0.0}; }

Derivs exp_decay(double rate) {
  return [rate](double t) {
    const double e = std::exp(-rate * t);
    return std::array<double, 4>{e, -rate * e, rate * rate * e, -rate * rate * rate * e};
  };
}

std::array<double, 4> sine(double s) { return {std::sin(s), std::cos(s), -std::sin(s), -std::cos(s)}; }
std::array<double, 4> cosine(double s) { return {std::cos(s), -std::sin(s), -std::cos(s), std::sin(s)}; }

double mean_of(std::span<const double> x, int d) {
  double s = 0.0;
  for (int i = 0; i < d; ++i) s += x[i];
  return s / d;
}

PdeProblem base_problem(const std::string& name, int d, bool dynamic) {
  PdeProblem p{name, BoxDomain::cube(d, -1.0, 1.0, dynamic ? std::optional<double>(1.0) : std::nullopt),
               LinearOperatorSpec{}, std::nullopt, {}, {}, std::nullopt};
  p.linear.spatial_dim = d;
  return p;
}

}  // namespace

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names{"poisson", "nonlinear-poisson", "heat", "advection-diffusion", "kdv"};
  return names;
}

PdeProblem make_problem(const std::string& name, int d) {
  if (d < 1) throw InvalidArgument("make_problem: d must be >= 1");
  const double dd = d;

  if (name == "poisson") {
    // -Lap u = Q, u = s^2 + sin s
    auto p = base_problem(name, d, false);
    p.linear.c_lap = -1.0;
    p.exact = ridge_field(d, false,
                          [](double s) {
                            return std::array<double, 4>{s * s + std::sin(s), 2.0 * s + std::cos(s),
                                                         2.0 - std::sin(s), -std::cos(s)};
                          },
                          constant_one);
    p.forcing = [d, dd](std::span<const double> x) { return (std::sin(mean_of(x, d)) - 2.0) / dd; };
    p.boundary = *p.exact;
    return p;
  }
  if (name == "nonlinear-poisson") {
    // -div(a(u) grad u) = Q with a(u) = u^2 - u, expanded as
    // N = -a'(u) |grad u|^2 - a(u) Lap u; u = exp(-s)
    auto p = base_problem(name, d, false);
    NonlinearTerm term;
    term.mu = 1.0;
    term.value = [](const NonlinearState& st) {
      double g2 = 0.0;
      for (double g : st.grad) g2 += g * g;
      return -(2.0 * st.u - 1.0) * g2 - (st.u * st.u - st.u) * st.lap;
    };
    term.partials = [](const NonlinearState& st) {
      NonlinearPartials out;
      double g2 = 0.0;
      for (double g : st.grad) g2 += g * g;
      out.d_u = -2.0 * g2 - (2.0 * st.u - 1.0) * st.lap;
      out.d_grad.resize(st.grad.size());
      for (std::size_t k = 0; k < st.grad.size(); ++k) out.d_grad[k] = -2.0 * (2.0 * st.u - 1.0) * st.grad[k];
      out.d_lap = -(st.u * st.u - st.u);
      return out;
    };
    p.nonlinear = term;
    p.exact = ridge_field(d, false,
                          [](double s) {
                            const double e = std::exp(-s);
                            return std::array<double, 4>{e, -e, e, -e};
                          },
                          constant_one);
    p.forcing = [d, dd](std::span<const double> x) {
      const double s = mean_of(x, d);
      return (-3.0 * std::exp(-3.0 * s) + 2.0 * std::exp(-2.0 * s)) / dd;
    };
    p.boundary = *p.exact;
    return p;
  }
  if (name == "heat") {
    // u_t - Lap u = Q, u = cos(s) e^{-t}
    auto p = base_problem(name, d, true);
    p.linear.c_time = 1.0;
    p.linear.c_lap = -1.0;
    p.exact = ridge_field(d, true, cosine, exp_decay(1.0));
    p.forcing = [d, dd](std::span<const double> x) {
      return (1.0 / dd - 1.0) * std::cos(mean_of(x, d)) * std::exp(-x[d]);
    };
    p.boundary = *p.exact;
    return p;
  }
  if (name == "advection-diffusion") {
    // u_t - Lap u + R . grad u = Q, R = (1/d) 1, u = sin(s) e^{-t/d}
    auto p = base_problem(name, d, true);
    p.linear.c_time = 1.0;
    p.linear.c_lap = -1.0;
    p.linear.advection.assign(d, 1.0 / dd);
    p.exact = ridge_field(d, true, sine, exp_decay(1.0 / dd));
    p.forcing = [d, dd](std::span<const double> x) {
      return std::cos(mean_of(x, d)) * std::exp(-x[d] / dd) / dd;
    };
    p.boundary = *p.exact;
    return p;
  }
  if (name == "kdv") {
    // u_t + sum_i u_{x_i x_i x_i} = Q, u = sin(s) e^{-t/d^2}
    auto p = base_problem(name, d, true);
    p.linear.c_time = 1.0;
    p.linear.c_third = 1.0;
    p.exact = ridge_field(d, true, sine, exp_decay(1.0 / (dd * dd)));
    p.forcing = [d, dd](std::span<const double> x) {
      const double s = mean_of(x, d);
      return -(std::sin(s) + std::cos(s)) * std::exp(-x[d] / (dd * dd)) / (dd * dd);
    };
    p.boundary = *p.exact;
    return p;
  }
  throw NotFound("make_problem: unknown problem '" + name + "'");
}

double verify_manufactured(const PdeProblem& problem, const PointBlock& points) {
  if (!problem.exact) throw InvalidArgument("verify_manufactured: problem has no exact solution");
  const auto& u = *problem.exact;
  const ScalarField::ValueFn fn = [&u](std::span<const double> x) { return u(x); };
  const auto& L = problem.linear;
  const int d = L.spatial_dim;
  const int dims = static_cast<int>(points.cols());
  constexpr double h1 = 1e-5, h2 = 1e-4, h3 = 1e-2;

  double worst = 0.0;
  std::vector<double> grad(d);
  for (Index r = 0; r < points.rows(); ++r) {
    std::span<const double> x(points.row(r).data(), dims);
    const double value = u(x);
    double lap = 0.0, third = 0.0, adv = 0.0;
    for (int k = 0; k < d; ++k) {
      grad[k] = fd_partial(fn, x, k, 1, h1);
      lap += fd_partial(fn, x, k, 2, h2);
      if (L.c_third != 0.0) third += fd_partial(fn, x, k, 3, h3);
      if (!L.advection.empty()) adv += L.advection[k] * grad[k];
    }
    double lhs = L.c_id * value + L.c_lap * lap + adv + L.c_third * third;
    if (L.c_time != 0.0) lhs += L.c_time * fd_partial(fn, x, d, 1, h1);
    if (problem.nonlinear) {
      NonlinearState st{x, value, grad, lap};
      lhs += problem.nonlinear->mu * problem.nonlinear->value(st);
    }
    worst = std::max(worst, std::abs(lhs - problem.forcing(x)));
  }
  return worst;
}

}  // namespace hdelm
