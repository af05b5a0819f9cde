#pragma once

#include <functional>
#include <span>
#include <vector>

#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/problems.hpp"

namespace hdelm {

/// One term of the face-blending operator A: weight(x) * f(projection of x).
///
/// For spatial direction i the two entries project x_i onto a_i (weight
/// (b_i - x_i)/(b_i - a_i)) and b_i (weight (x_i - a_i)/(b_i - a_i)). On a
/// time-dependent domain one more entry projects t onto 0 with weight (T - t)/T.
/// `coordinate` is the replaced coordinate (d for the time entry); the weight
/// is linear in that coordinate with derivative `slope`.
struct StencilEntry {
  int coordinate = 0;
  Side side = Side::low;
  double weight = 0.0;
  double slope = 0.0;
  std::vector<double> point;
};

struct ProjectedStencil {
  std::vector<StencilEntry> entries;
};

ProjectedStencil make_stencil(const BoxDomain& domain, std::span<const double> x);

/// Evaluates some field (feature basis or scalar data) and its pure partials on a point block.
using BlockEvaluator = std::function<FeatureEval(const PointBlock&, int max_order)>;

/// A f and its pure partials up to max_order at every row of points.
///
/// Derivative of order n along coordinate k of entry e: weight * d^n f/dx_k^n
/// at the projected point when k is not the replaced coordinate; slope * f for
/// n = 1 and 0 for n >= 2 when it is.
FeatureEval apply_A(const BlockEvaluator& f, const BoxDomain& domain, const PointBlock& points, int max_order);

/// Pointwise convenience form: value and pure partials of A f at one point.
struct PointProjection {
  double value = 0.0;
  std::vector<double> grad, diag2, diag3;  // dim_total entries (empty above max_order)
  double laplacian(int spatial_dim) const;
};
PointProjection apply_A(const ScalarField& f, const BoxDomain& domain, std::span<const double> x, int max_order);

/// Basis of the constrained expression: V - A V with derivatives.
FeatureEval constrained_features(const FeatureLayer& layer, const BoxDomain& domain, const PointBlock& points,
                                 int max_order);

/// A H with derivatives for the problem's boundary data (one column).
FeatureEval project_boundary_data(const PdeProblem& problem, const PointBlock& points, int max_order);

/// Boundary rows of the A-TFC system at face points y:
///   row_j = V_j(y) - A V_j(y),  rhs = H(y) - A H(y),
/// so that row . phi - rhs equals u(y) - H(y) for u = g - A g + A H with g = V phi.
struct MismatchRows {
  Matrix rows;
  Vector rhs;
};
MismatchRows mismatch_rows(const FeatureLayer& layer, const PdeProblem& problem, const PointBlock& y);

/// True when x lies on a spatial face or the initial-time face (tolerance tol).
bool on_condition_face(const BoxDomain& domain, std::span<const double> x, double tol = 1e-14);

/// Full TFC interpolant T f = sum_i (-1)^{i-1} T^i f by enumeration of every
/// face, edge and corner term (3^d - 1 terms). Stationary domains with d <= 3.
struct TfcExpansion {
  std::vector<double> levels;  // levels[i-1] = T^i f(x)
  double value = 0.0;
  int terms = 0;
};
TfcExpansion full_tfc_oracle(const ScalarField::ValueFn& f, const BoxDomain& domain, std::span<const double> x);

inline constexpr int kMaxFullTfcDimension = 3;

}  // namespace hdelm
