#include "hdelm/features.hpp"

#include <cmath>
#include <string>

#include "hdelm/errors.hpp"
#include "hdelm/rng.hpp"

namespace hdelm {

namespace {

// Returns sigma and its derivatives up to max_order as N x M arrays, given the
// pre-activation z.
struct ActivationBlocks {
  Eigen::ArrayXXd s0, s1, s2, s3;
};

ActivationBlocks activation_derivatives(Activation act, const Eigen::ArrayXXd& z, int max_order) {
  ActivationBlocks out;
  switch (act) {
    case Activation::tanh: {
      out.s0 = z.tanh();
      if (max_order >= 1) out.s1 = 1.0 - out.s0.square();
      if (max_order >= 2) out.s2 = -2.0 * out.s0 * out.s1;
      if (max_order >= 3) out.s3 = out.s1 * (6.0 * out.s0.square() - 2.0);
      break;
    }
  }
  return out;
}

Eigen::ArrayXXd pre_activation(const FeatureLayer& layer, const PointBlock& points) {
  if (points.cols() != layer.dim_total()) {
    throw InvalidArgument("eval_features: points have " + std::to_string(points.cols()) +
                          " columns, layer expects " + std::to_string(layer.dim_total()));
  }
  Matrix z = points * layer.weights().transpose();
  z.rowwise() += layer.biases().transpose();
  return z.array();
}

}  // namespace

FeatureEval FeatureEval::zeros(Index n, Index m, int dims, int max_order) {
  FeatureEval out;
  out.max_order = max_order;
  out.values = Matrix::Zero(n, m);
  auto fill = [&](std::vector<Matrix>& blocks, int order) {
    blocks.assign(dims, Matrix());
    if (max_order >= order)
      for (auto& b : blocks) b = Matrix::Zero(n, m);
  };
  fill(out.grad, 1);
  fill(out.diag2, 2);
  fill(out.diag3, 3);
  return out;
}

const Matrix& FeatureEval::derivative(int k, int order) const {
  return const_cast<FeatureEval*>(this)->derivative(k, order);
}

Matrix& FeatureEval::derivative(int k, int order) {
  if (order > max_order || order < 0) {
    throw InvalidArgument("FeatureEval: derivative order " + std::to_string(order) +
                          " not available (max_order " + std::to_string(max_order) + ")");
  }
  switch (order) {
    case 0: return values;
    case 1: return grad.at(k);
    case 2: return diag2.at(k);
    default: return diag3.at(k);
  }
}

FeatureLayer FeatureLayer::from_parameters(Matrix weights, Vector biases, double r_m,
                                           std::uint64_t seed, Activation activation) {
  if (weights.rows() < 1 || weights.cols() < 1) throw InvalidArgument("FeatureLayer: empty weight matrix");
  if (biases.size() != weights.rows()) throw InvalidArgument("FeatureLayer: bias/weight row mismatch");
  if (!(r_m > 0.0)) throw InvalidArgument("FeatureLayer: r_m must be positive");
  if (weights.cwiseAbs().maxCoeff() > r_m || biases.cwiseAbs().maxCoeff() > r_m) {
    throw InvalidArgument("FeatureLayer: parameter outside [-r_m, r_m]");
  }
  return FeatureLayer(std::move(weights), std::move(biases), r_m, seed, activation);
}

FeatureLayer init_layer(int dim_total, int width, double r_m, std::uint64_t seed, Activation activation) {
  if (dim_total < 1) throw InvalidArgument("init_layer: dim_total must be >= 1");
  if (width < 1) throw InvalidArgument("init_layer: width must be >= 1");
  if (!(r_m > 0.0) || !std::isfinite(r_m)) throw InvalidArgument("init_layer: r_m must be positive and finite");

  UniformSource rng(seed);
  Matrix w(width, dim_total);
  for (int j = 0; j < width; ++j)
    for (int k = 0; k < dim_total; ++k) w(j, k) = rng.closed(-r_m, r_m);
  Vector b(width);
  for (int j = 0; j < width; ++j) b(j) = rng.closed(-r_m, r_m);
  return FeatureLayer::from_parameters(std::move(w), std::move(b), r_m, seed, activation);
}

Matrix eval_values(const FeatureLayer& layer, const PointBlock& points) {
  return activation_derivatives(layer.activation(), pre_activation(layer, points), 0).s0.matrix();
}

FeatureEval eval_features(const FeatureLayer& layer, const PointBlock& points, int max_order) {
  if (max_order < 0 || max_order > 3) throw InvalidArgument("eval_features: max_order must be in 0..3");
  const auto z = pre_activation(layer, points);
  const auto act = activation_derivatives(layer.activation(), z, max_order);
  const int dims = layer.dim_total();

  FeatureEval out;
  out.max_order = max_order;
  out.values = act.s0.matrix();
  out.grad.assign(dims, Matrix());
  out.diag2.assign(dims, Matrix());
  out.diag3.assign(dims, Matrix());
  const auto& w = layer.weights();
  for (int k = 0; k < dims; ++k) {
    const Eigen::ArrayXd wk = w.col(k).array();
    if (max_order >= 1) out.grad[k] = (act.s1.rowwise() * wk.transpose()).matrix();
    if (max_order >= 2) out.diag2[k] = (act.s2.rowwise() * wk.square().transpose()).matrix();
    if (max_order >= 3) out.diag3[k] = (act.s3.rowwise() * wk.cube().transpose()).matrix();
  }
  return out;
}

}  // namespace hdelm
