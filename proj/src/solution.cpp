#include "hdelm/solution.hpp"

#include <algorithm>

#include "hdelm/atfc.hpp"
#include "hdelm/errors.hpp"

namespace hdelm {

namespace {
constexpr Index kChunk = 2048;

FeatureEval combine(const FeatureEval& basis, const Vector& coeffs) {
  FeatureEval out = FeatureEval::zeros(basis.rows(), 1, basis.dim_total(), basis.max_order);
  out.values = basis.values * coeffs;
  for (int order = 1; order <= basis.max_order; ++order)
    for (int k = 0; k < basis.dim_total(); ++k) out.derivative(k, order) = basis.derivative(k, order) * coeffs;
  return out;
}
}  // namespace

SolutionField SolutionField::elm(Decomposition decomposition, std::vector<FeatureLayer> layers, Vector phi) {
  if (static_cast<int>(layers.size()) != decomposition.size())
    throw InvalidArgument("SolutionField: one layer per sub-domain required");
  SolutionField s;
  Index total = 0;
  for (const auto& l : layers) {
    s.offsets_.push_back(total);
    total += l.width();
  }
  if (phi.size() != total) throw InvalidArgument("SolutionField: coefficient length mismatch");
  s.decomposition_ = std::make_shared<const Decomposition>(std::move(decomposition));
  s.layers_ = std::move(layers);
  s.phi_ = std::move(phi);
  return s;
}

SolutionField SolutionField::atfc(PdeProblem problem, FeatureLayer layer, Vector phi) {
  if (phi.size() != layer.width()) throw InvalidArgument("SolutionField: coefficient length mismatch");
  SolutionField s;
  s.atfc_ = true;
  s.problem_ = std::make_shared<const PdeProblem>(std::move(problem));
  s.offsets_ = {0};
  s.layers_.push_back(std::move(layer));
  s.phi_ = std::move(phi);
  return s;
}

FeatureEval SolutionField::evaluate_local(int subdomain, const PointBlock& points, int max_order) const {
  if (subdomain < 0 || subdomain >= subdomains()) throw InvalidArgument("SolutionField: sub-domain out of range");
  const FeatureLayer& layer = layers_[static_cast<std::size_t>(subdomain)];
  const Vector coeffs = phi_.segment(offsets_[static_cast<std::size_t>(subdomain)], layer.width());
  if (!atfc_) return combine(eval_features(layer, points, max_order), coeffs);
  FeatureEval out = combine(constrained_features(layer, problem_->domain, points, max_order), coeffs);
  const FeatureEval h = project_boundary_data(*problem_, points, max_order);
  out.values += h.values;
  for (int order = 1; order <= max_order; ++order)
    for (int k = 0; k < out.dim_total(); ++k) out.derivative(k, order) += h.derivative(k, order);
  return out;
}

Vector SolutionField::evaluate(const PointBlock& points) const {
  Vector out(points.rows());
  if (subdomains() == 1) {
    for (Index b = 0; b < points.rows(); b += kChunk) {
      const Index cnt = std::min(kChunk, points.rows() - b);
      out.segment(b, cnt) = evaluate_local(0, points.middleRows(b, cnt), 0).values.col(0);
    }
    return out;
  }
  std::vector<std::vector<Index>> owned(static_cast<std::size_t>(subdomains()));
  for (Index r = 0; r < points.rows(); ++r)
    owned[static_cast<std::size_t>(decomposition_->locate(std::span<const double>(points.row(r).data(), points.cols())))]
        .push_back(r);
  for (int s = 0; s < subdomains(); ++s) {
    const auto& rows = owned[static_cast<std::size_t>(s)];
    for (std::size_t b = 0; b < rows.size(); b += static_cast<std::size_t>(kChunk)) {
      const std::size_t cnt = std::min<std::size_t>(static_cast<std::size_t>(kChunk), rows.size() - b);
      PointBlock p(static_cast<Index>(cnt), points.cols());
      for (std::size_t i = 0; i < cnt; ++i) p.row(static_cast<Index>(i)) = points.row(rows[b + i]);
      const Vector u = evaluate_local(s, p, 0).values.col(0);
      for (std::size_t i = 0; i < cnt; ++i) out(rows[b + i]) = u(static_cast<Index>(i));
    }
  }
  return out;
}

}  // namespace hdelm
