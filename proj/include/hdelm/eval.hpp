#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "hdelm/geometry.hpp"
#include "hdelm/problems.hpp"
#include "hdelm/solution.hpp"

namespace hdelm {

struct ErrorPair {
  double e_inf = 0.0;
  double e_rms = 0.0;
  Index n_points = 0;
};

ErrorPair errors(const Vector& predicted, const Vector& exact);

/// Samples a ScalarField at every row.
Vector field_values(const ScalarField& f, const PointBlock& points);

/// Defaults for the pinned coordinates of a slice: box centre, t = T/2.
std::vector<double> default_slice_point(const BoxDomain& domain);

/// Uniform q x q grid over coordinates (i, j) (j may be the time coordinate),
/// with the other coordinates taken from `fixed` (dim_total entries; entries
/// i and j are ignored). Row r = a * q + b has x_i on grid index a, x_j on b.
PointBlock slice_grid(const BoxDomain& domain, int i, int j, const std::vector<double>& fixed, Index q);

/// Writes slice.csv rows (xi,xj,u_pred,u_exact,abs_err) in blocks of grid rows,
/// so memory stays O(q) for large q.
void write_slice_csv(std::ostream& out, const SolutionField& u, const ScalarField& exact, const BoxDomain& domain,
                     int i, int j, const std::vector<double>& fixed, Index q);

}  // namespace hdelm
