#pragma once

#include <cstdint>
#include <vector>

#include "hdelm/types.hpp"

namespace hdelm {

/// Hidden-layer activation. Closed set; each entry must supply derivatives
/// up to third order (see activation_derivatives in features.cpp).
enum class Activation { tanh };

/// Frozen random hidden layer: V_j(x) = sigma(w_j . x + b_j), j = 0..width-1.
///
/// Weights and biases are i.i.d. uniform on [-r_m, r_m], drawn from
/// UniformSource(seed) in the order w(0,0..dim-1), ..., w(width-1, ...), then
/// b(0..width-1). The output layer has zero bias, so a trained field is V(x) * phi.
class FeatureLayer {
 public:
  /// Builds a layer from explicit parameters (tests and deserialization).
  /// Every entry must lie in [-r_m, r_m].
  static FeatureLayer from_parameters(Matrix weights, Vector biases, double r_m,
                                      std::uint64_t seed = 0,
                                      Activation activation = Activation::tanh);

  int dim_total() const { return static_cast<int>(weights_.cols()); }
  int width() const { return static_cast<int>(weights_.rows()); }
  double r_m() const { return r_m_; }
  std::uint64_t seed() const { return seed_; }
  Activation activation() const { return activation_; }

  /// width x dim_total
  const Matrix& weights() const { return weights_; }
  const Vector& biases() const { return biases_; }

 private:
  FeatureLayer(Matrix weights, Vector biases, double r_m, std::uint64_t seed, Activation activation)
      : weights_(std::move(weights)), biases_(std::move(biases)), r_m_(r_m), seed_(seed),
        activation_(activation) {}

  Matrix weights_;
  Vector biases_;
  double r_m_;
  std::uint64_t seed_;
  Activation activation_;
};

/// Feature values and pure partial derivatives on a block of N points.
///
/// grad[k], diag2[k], diag3[k] hold dV/dx_k, d2V/dx_k2, d3V/dx_k3 as N x M
/// matrices. Blocks above max_order are left empty. The same container is used
/// for scalar fields (M = 1), e.g. boundary data and A-TFC projections.
struct FeatureEval {
  int max_order = 0;
  Matrix values;
  std::vector<Matrix> grad;
  std::vector<Matrix> diag2;
  std::vector<Matrix> diag3;

  Index rows() const { return values.rows(); }
  Index cols() const { return values.cols(); }
  int dim_total() const { return static_cast<int>(grad.size()); }

  /// Allocates zero blocks for n points, m columns, `dims` coordinates.
  static FeatureEval zeros(Index n, Index m, int dims, int max_order);

  /// Block of pure derivatives of the given order (0..3) along coordinate k.
  const Matrix& derivative(int k, int order) const;
  Matrix& derivative(int k, int order);
};

FeatureLayer init_layer(int dim_total, int width, double r_m, std::uint64_t seed,
                        Activation activation = Activation::tanh);

/// Evaluates the basis and its analytic derivatives up to max_order at the rows of points.
FeatureEval eval_features(const FeatureLayer& layer, const PointBlock& points, int max_order);

/// Values only: N x M.
Matrix eval_values(const FeatureLayer& layer, const PointBlock& points);

}  // namespace hdelm
