#include "hdelm/eval.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "hdelm/errors.hpp"

namespace hdelm {

ErrorPair errors(const Vector& predicted, const Vector& exact) {
  if (predicted.size() != exact.size()) throw InvalidArgument("errors: length mismatch");
  if (predicted.size() == 0) throw InvalidArgument("errors: no points");
  const Vector diff = predicted - exact;
  ErrorPair out;
  out.e_inf = diff.lpNorm<Eigen::Infinity>();
  out.e_rms = std::sqrt(diff.squaredNorm() / static_cast<double>(diff.size()));
  out.n_points = diff.size();
  return out;
}

Vector field_values(const ScalarField& f, const PointBlock& points) {
  Vector v(points.rows());
  for (Index r = 0; r < points.rows(); ++r) v(r) = f(std::span<const double>(points.row(r).data(), points.cols()));
  return v;
}

std::vector<double> default_slice_point(const BoxDomain& domain) {
  std::vector<double> p(static_cast<std::size_t>(domain.dim_total()));
  for (int k = 0; k < domain.d(); ++k) p[static_cast<std::size_t>(k)] = 0.5 * (domain.lo(k) + domain.hi(k));
  if (domain.time_dependent()) p.back() = 0.5 * domain.time_extent();
  return p;
}

namespace {

double coord_lo(const BoxDomain& d, int k) { return k < d.d() ? d.lo(k) : 0.0; }
double coord_hi(const BoxDomain& d, int k) { return k < d.d() ? d.hi(k) : d.time_extent(); }

void check_slice(const BoxDomain& domain, int i, int j, const std::vector<double>& fixed, Index q) {
  const int n = domain.dim_total();
  if (i < 0 || j < 0 || i >= n || j >= n || i == j) throw InvalidArgument("slice: invalid plane coordinates");
  if (static_cast<int>(fixed.size()) != n) throw InvalidArgument("slice: fixed point needs dim_total entries");
  if (q < 2) throw InvalidArgument("slice: q must be >= 2");
  for (int k = 0; k < n; ++k) {
    if (k == i || k == j) continue;
    const double v = fixed[static_cast<std::size_t>(k)];
    if (!(v >= coord_lo(domain, k) && v <= coord_hi(domain, k)))
      throw InvalidArgument("slice: fixed coordinate " + std::to_string(k) + " outside the domain");
  }
}

double grid_value(const BoxDomain& d, int k, Index idx, Index q) {
  if (idx == q - 1) return coord_hi(d, k);
  return coord_lo(d, k) + (coord_hi(d, k) - coord_lo(d, k)) * static_cast<double>(idx) / static_cast<double>(q - 1);
}

PointBlock grid_rows(const BoxDomain& domain, int i, int j, const std::vector<double>& fixed, Index q, Index a0,
                     Index na) {
  PointBlock p(na * q, domain.dim_total());
  for (Index a = 0; a < na; ++a)
    for (Index b = 0; b < q; ++b) {
      const Index r = a * q + b;
      for (int k = 0; k < domain.dim_total(); ++k) p(r, k) = fixed[static_cast<std::size_t>(k)];
      p(r, i) = grid_value(domain, i, a0 + a, q);
      p(r, j) = grid_value(domain, j, b, q);
    }
  return p;
}

}  // namespace

PointBlock slice_grid(const BoxDomain& domain, int i, int j, const std::vector<double>& fixed, Index q) {
  check_slice(domain, i, j, fixed, q);
  return grid_rows(domain, i, j, fixed, q, 0, q);
}

void write_slice_csv(std::ostream& out, const SolutionField& u, const ScalarField& exact, const BoxDomain& domain,
                     int i, int j, const std::vector<double>& fixed, Index q) {
  check_slice(domain, i, j, fixed, q);
  out << "xi,xj,u_pred,u_exact,abs_err\n";
  const Index rows_per_block = std::max<Index>(1, 8192 / q);
  char line[160];
  for (Index a0 = 0; a0 < q; a0 += rows_per_block) {
    const Index na = std::min(rows_per_block, q - a0);
    const PointBlock p = grid_rows(domain, i, j, fixed, q, a0, na);
    const Vector pred = u.evaluate(p);
    const Vector ex = field_values(exact, p);
    for (Index r = 0; r < p.rows(); ++r) {
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g,%.17g\n", p(r, i), p(r, j), pred(r), ex(r),
                    std::abs(pred(r) - ex(r)));
      out << line;
    }
  }
}

}  // namespace hdelm
