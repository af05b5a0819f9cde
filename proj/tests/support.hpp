#pragma once

// Independent oracles shared by the unit tests and the acceptance binary.

#include <cmath>
#include <functional>
#include <vector>

#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/rng.hpp"
#include "hdelm/types.hpp"

namespace hdelm::testing {

inline PointBlock random_points(Index n, const std::vector<double>& lo, const std::vector<double>& hi,
                                std::uint64_t seed) {
  UniformSource rng(seed);
  PointBlock p(n, static_cast<Index>(lo.size()));
  for (Index r = 0; r < n; ++r)
    for (std::size_t k = 0; k < lo.size(); ++k) p(r, static_cast<Index>(k)) = rng.closed(lo[k], hi[k]);
  return p;
}

inline PointBlock random_cube_points(Index n, int dims, double a, double b, std::uint64_t seed) {
  return random_points(n, std::vector<double>(dims, a), std::vector<double>(dims, b), seed);
}

/// Feature j at x evaluated in extended precision, straight from the definition.
inline long double feature_ld(const FeatureLayer& layer, int j, const std::vector<long double>& x) {
  long double z = layer.biases()(j);
  for (int k = 0; k < layer.dim_total(); ++k) z += static_cast<long double>(layer.weights()(j, k)) * x[k];
  return std::tanh(z);
}

/// Central difference of order 1..3 along coordinate k, in extended precision.
inline double fd_ld(const std::function<long double(const std::vector<long double>&)>& f,
                    const std::vector<long double>& x, int k, int order, long double h) {
  auto at = [&](long double s) {
    auto y = x;
    y[k] += s * h;
    return f(y);
  };
  switch (order) {
    case 1: return static_cast<double>((at(1) - at(-1)) / (2 * h));
    case 2: return static_cast<double>((at(1) - 2 * at(0) + at(-1)) / (h * h));
    default: return static_cast<double>((at(2) - 2 * at(1) + 2 * at(-1) - at(-2)) / (2 * h * h * h));
  }
}

/// Max |a - b| / max(max|b|, floor).
inline double rel_max_diff(const Matrix& a, const Matrix& b, double floor = 1e-300) {
  return (a - b).lpNorm<Eigen::Infinity>() / std::max(b.lpNorm<Eigen::Infinity>(), floor);
}

/// Column-wise central-difference Jacobian of a vector residual.
inline Matrix fd_jacobian(const std::function<Vector(const Vector&)>& r, const Vector& phi, double h = 1e-6) {
  const Vector r0 = r(phi);
  Matrix j(r0.size(), phi.size());
  for (Index c = 0; c < phi.size(); ++c) {
    const double step = h * std::max(1.0, std::abs(phi(c)));
    Vector p = phi, m = phi;
    p(c) += step;
    m(c) -= step;
    j.col(c) = (r(p) - r(m)) / (2 * step);
  }
  return j;
}

/// Face blending operator evaluated pointwise from its definition (stationary box).
inline double blend_faces(const std::function<double(const std::vector<double>&)>& f, const BoxDomain& box,
                          const std::vector<double>& x) {
  double sum = 0.0;
  for (int i = 0; i < box.d(); ++i) {
    const double a = box.lo(i), b = box.hi(i);
    auto y = x;
    y[i] = a;
    sum += (b - x[i]) / (b - a) * f(y);
    y[i] = b;
    sum += (x[i] - a) / (b - a) * f(y);
  }
  if (box.time_dependent()) {
    const double T = box.time_extent();
    auto y = x;
    y[box.d()] = 0.0;
    sum += (T - x[box.d()]) / T * f(y);
  }
  return sum;
}

/// g(x) = sum_j phi_j tanh(w_j . x + b_j), evaluated directly.
inline double network_value(const FeatureLayer& layer, const Vector& phi, const std::vector<double>& x) {
  double s = 0.0;
  for (int j = 0; j < layer.width(); ++j) {
    double z = layer.biases()(j);
    for (int k = 0; k < layer.dim_total(); ++k) z += layer.weights()(j, k) * x[k];
    s += phi(j) * std::tanh(z);
  }
  return s;
}

inline std::vector<double> row_vec(const PointBlock& p, Index r) {
  return std::vector<double>(p.row(r).data(), p.row(r).data() + p.cols());
}

}  // namespace hdelm::testing
