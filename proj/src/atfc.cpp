#include "hdelm/atfc.hpp"

#include <cmath>

#include "hdelm/errors.hpp"

namespace hdelm {

ProjectedStencil make_stencil(const BoxDomain& domain, std::span<const double> x) {
  if (static_cast<int>(x.size()) != domain.dim_total()) throw InvalidArgument("make_stencil: point dimension mismatch");
  ProjectedStencil st;
  const int d = domain.d();
  for (int i = 0; i < d; ++i) {
    const double a = domain.lo(i), b = domain.hi(i), len = b - a;
    StencilEntry low{i, Side::low, (b - x[i]) / len, -1.0 / len, {x.begin(), x.end()}};
    low.point[i] = a;
    StencilEntry high{i, Side::high, (x[i] - a) / len, 1.0 / len, {x.begin(), x.end()}};
    high.point[i] = b;
    st.entries.push_back(std::move(low));
    st.entries.push_back(std::move(high));
  }
  if (domain.time_dependent()) {
    const double T = domain.time_extent();
    StencilEntry initial{d, Side::low, (T - x[d]) / T, -1.0 / T, {x.begin(), x.end()}};
    initial.point[d] = 0.0;
    st.entries.push_back(std::move(initial));
  }
  return st;
}

FeatureEval apply_A(const BlockEvaluator& f, const BoxDomain& domain, const PointBlock& points, int max_order) {
  const int dims = domain.dim_total();
  if (points.cols() != dims) throw InvalidArgument("apply_A: point dimension mismatch");
  const Index n = points.rows();
  const int n_entries = 2 * domain.d() + (domain.time_dependent() ? 1 : 0);

  FeatureEval out;
  bool first = true;
  for (int e = 0; e < n_entries; ++e) {
    const bool time_entry = e == 2 * domain.d();
    const int coord = time_entry ? domain.d() : e / 2;
    const Side side = (!time_entry && e % 2 == 1) ? Side::high : Side::low;

    PointBlock projected = points;
    Vector weight(n);
    double slope = 0.0;
    if (time_entry) {
      const double T = domain.time_extent();
      projected.col(coord).setZero();
      weight = (T - points.col(coord).array()) / T;
      slope = -1.0 / T;
    } else {
      const double a = domain.lo(coord), b = domain.hi(coord), len = b - a;
      projected.col(coord).setConstant(side == Side::low ? a : b);
      if (side == Side::low) {
        weight = (b - points.col(coord).array()) / len;
        slope = -1.0 / len;
      } else {
        weight = (points.col(coord).array() - a) / len;
        slope = 1.0 / len;
      }
    }

    const FeatureEval fe = f(projected, max_order);
    if (fe.rows() != n || fe.max_order < max_order) throw InvalidArgument("apply_A: evaluator returned wrong shape/order");
    if (first) {
      out = FeatureEval::zeros(n, fe.cols(), dims, max_order);
      first = false;
    }
    out.values.noalias() += weight.asDiagonal() * fe.values;
    for (int order = 1; order <= max_order; ++order) {
      for (int k = 0; k < dims; ++k) {
        if (k == coord) {
          if (order == 1) out.grad[k] += slope * fe.values;
        } else {
          out.derivative(k, order).noalias() += weight.asDiagonal() * fe.derivative(k, order);
        }
      }
    }
  }
  if (first) throw InvalidArgument("apply_A: domain has no faces");
  return out;
}

double PointProjection::laplacian(int spatial_dim) const {
  double s = 0.0;
  for (int k = 0; k < spatial_dim; ++k) s += diag2.at(k);
  return s;
}

PointProjection apply_A(const ScalarField& f, const BoxDomain& domain, std::span<const double> x, int max_order) {
  PointBlock p(1, static_cast<Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) p(0, static_cast<Index>(k)) = x[k];
  const auto fe = apply_A([&f](const PointBlock& pts, int order) { return eval_field(f, pts, order); }, domain, p,
                          max_order);
  PointProjection out;
  out.value = fe.values(0, 0);
  const int dims = fe.dim_total();
  auto copy = [&](std::vector<double>& dst, int order) {
    if (order > max_order) return;
    dst.resize(dims);
    for (int k = 0; k < dims; ++k) dst[k] = fe.derivative(k, order)(0, 0);
  };
  copy(out.grad, 1);
  copy(out.diag2, 2);
  copy(out.diag3, 3);
  return out;
}

FeatureEval constrained_features(const FeatureLayer& layer, const BoxDomain& domain, const PointBlock& points,
                                 int max_order) {
  FeatureEval direct = eval_features(layer, points, max_order);
  const FeatureEval projected = apply_A(
      [&layer](const PointBlock& pts, int order) { return eval_features(layer, pts, order); }, domain, points,
      max_order);
  direct.values -= projected.values;
  for (int order = 1; order <= max_order; ++order)
    for (int k = 0; k < direct.dim_total(); ++k) direct.derivative(k, order) -= projected.derivative(k, order);
  return direct;
}

FeatureEval project_boundary_data(const PdeProblem& problem, const PointBlock& points, int max_order) {
  return apply_A([&problem](const PointBlock& pts, int order) { return eval_field(problem.boundary, pts, order); },
                 problem.domain, points, max_order);
}

bool on_condition_face(const BoxDomain& domain, std::span<const double> x, double tol) {
  if (!domain.contains(x, tol)) return false;
  for (int i = 0; i < domain.d(); ++i)
    if (std::abs(x[i] - domain.lo(i)) <= tol || std::abs(x[i] - domain.hi(i)) <= tol) return true;
  return domain.time_dependent() && std::abs(x[domain.d()]) <= tol;
}

MismatchRows mismatch_rows(const FeatureLayer& layer, const PdeProblem& problem, const PointBlock& y) {
  const auto& domain = problem.domain;
  if (y.cols() != domain.dim_total()) throw InvalidArgument("mismatch_rows: point dimension mismatch");
  for (Index r = 0; r < y.rows(); ++r) {
    if (!on_condition_face(domain, std::span<const double>(y.row(r).data(), y.cols())))
      throw InvalidArgument("mismatch_rows: point " + std::to_string(r) + " is not on a boundary face");
  }
  MismatchRows out;
  out.rows = constrained_features(layer, domain, y, 0).values;
  const Vector h = eval_field(problem.boundary, y, 0).values.col(0);
  out.rhs = h - project_boundary_data(problem, y, 0).values.col(0);
  return out;
}

TfcExpansion full_tfc_oracle(const ScalarField::ValueFn& f, const BoxDomain& domain, std::span<const double> x) {
  const int d = domain.d();
  if (d > kMaxFullTfcDimension || domain.time_dependent())
    throw UnsupportedConfiguration("full_tfc_oracle: enumeration limited to stationary domains with d <= 3");
  if (static_cast<int>(x.size()) != d) throw InvalidArgument("full_tfc_oracle: point dimension mismatch");

  TfcExpansion out;
  out.levels.assign(d, 0.0);
  std::vector<double> y(x.begin(), x.end());
  for (unsigned mask = 1; mask < (1u << d); ++mask) {
    std::vector<int> p;
    for (int i = 0; i < d; ++i)
      if (mask & (1u << i)) p.push_back(i);
    const int level = static_cast<int>(p.size());
    for (unsigned corner = 0; corner < (1u << level); ++corner) {
      double weight = 1.0;
      y.assign(x.begin(), x.end());
      for (int q = 0; q < level; ++q) {
        const int i = p[q];
        const double a = domain.lo(i), b = domain.hi(i);
        if (corner & (1u << q)) {
          weight *= (x[i] - a) / (b - a);
          y[i] = b;
        } else {
          weight *= (b - x[i]) / (b - a);
          y[i] = a;
        }
      }
      out.levels[level - 1] += weight * f(y);
      ++out.terms;
    }
  }
  for (int i = 0; i < d; ++i) out.value += (i % 2 == 0 ? 1.0 : -1.0) * out.levels[i];
  return out;
}

}  // namespace hdelm
