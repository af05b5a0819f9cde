#pragma once

#include <memory>
#include <vector>

#include "hdelm/features.hpp"
#include "hdelm/geometry.hpp"
#include "hdelm/problems.hpp"

namespace hdelm {

/// A trained field u(x), for plain ELM / locELM or for ELM with A-TFC
/// (u = g - A g + A H with g = V phi).
class SolutionField {
 public:
  static SolutionField elm(Decomposition decomposition, std::vector<FeatureLayer> layers, Vector phi);
  static SolutionField atfc(PdeProblem problem, FeatureLayer layer, Vector phi);

  bool is_atfc() const { return atfc_; }
  int subdomains() const { return static_cast<int>(layers_.size()); }
  const Vector& coefficients() const { return phi_; }

  /// u at every row; each point is evaluated by the sub-domain returned by Decomposition::locate.
  Vector evaluate(const PointBlock& points) const;

  /// u and its pure partials from the network of one sub-domain (one column).
  FeatureEval evaluate_local(int subdomain, const PointBlock& points, int max_order) const;

 private:
  SolutionField() = default;

  bool atfc_ = false;
  std::shared_ptr<const PdeProblem> problem_;
  std::shared_ptr<const Decomposition> decomposition_;
  std::vector<FeatureLayer> layers_;
  std::vector<Index> offsets_;
  Vector phi_;
};

}  // namespace hdelm
