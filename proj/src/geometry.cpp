#include "hdelm/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <string>

#include "hdelm/errors.hpp"
#include "hdelm/rng.hpp"

namespace hdelm {

BoxDomain::BoxDomain(std::vector<double> lo, std::vector<double> hi, std::optional<double> time_extent)
    : lo_(std::move(lo)), hi_(std::move(hi)), time_extent_(time_extent) {
  if (lo_.empty() || lo_.size() != hi_.size()) throw InvalidArgument("BoxDomain: lo/hi must be non-empty and equal length");
  for (std::size_t i = 0; i < lo_.size(); ++i) {
    if (!(std::isfinite(lo_[i]) && std::isfinite(hi_[i]) && lo_[i] < hi_[i]))
      throw InvalidArgument("BoxDomain: need lo[i] < hi[i] in direction " + std::to_string(i));
  }
  if (time_extent_ && !(*time_extent_ > 0.0 && std::isfinite(*time_extent_)))
    throw InvalidArgument("BoxDomain: time extent must be positive");
}

BoxDomain BoxDomain::cube(int d, double a, double b, std::optional<double> time_extent) {
  if (d < 1) throw InvalidArgument("BoxDomain::cube: d must be >= 1");
  return BoxDomain(std::vector<double>(d, a), std::vector<double>(d, b), time_extent);
}

bool BoxDomain::contains(std::span<const double> x, double tol) const {
  if (static_cast<int>(x.size()) != dim_total()) return false;
  for (int i = 0; i < d(); ++i)
    if (x[i] < lo_[i] - tol || x[i] > hi_[i] + tol) return false;
  if (time_extent_) {
    const double t = x[d()];
    if (t < -tol || t > *time_extent_ + tol) return false;
  }
  return true;
}

double BoxDomain::volume() const {
  double v = time_extent_.value_or(1.0);
  for (int i = 0; i < d(); ++i) v *= hi_[i] - lo_[i];
  return v;
}

Index CollocationSet::n_bc_total() const {
  return static_cast<Index>(faces.size()) * n_bc() + n_t0();
}

PointBlock stack(std::span<const PointBlock> blocks) {
  Index rows = 0, cols = -1;
  for (const auto& b : blocks) {
    rows += b.rows();
    if (b.rows() > 0) {
      if (cols >= 0 && b.cols() != cols) throw InvalidArgument("stack: column mismatch");
      cols = b.cols();
    }
  }
  if (cols < 0) cols = blocks.empty() ? 0 : blocks.front().cols();
  PointBlock out(rows, cols);
  Index r = 0;
  for (const auto& b : blocks) {
    if (b.rows() == 0) continue;
    out.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  return out;
}

PointBlock CollocationSet::condition_points() const {
  std::vector<PointBlock> parts(faces.begin(), faces.end());
  parts.push_back(initial);
  return stack(parts);
}

PointBlock CollocationSet::all_points() const {
  std::vector<PointBlock> parts{interior, condition_points()};
  return stack(parts);
}

namespace {

void fill_open(UniformSource& rng, const BoxDomain& domain, PointBlock& block, Index row) {
  for (int i = 0; i < domain.d(); ++i) block(row, i) = rng.open(domain.lo(i), domain.hi(i));
  if (domain.time_dependent()) block(row, domain.d()) = rng.open(0.0, domain.time_extent());
}

PointBlock face_block(UniformSource& rng, const BoxDomain& domain, int direction, Side side, Index n,
                      std::optional<double> pinned_time) {
  PointBlock block(n, domain.dim_total());
  const double fixed = side == Side::low ? domain.lo(direction) : domain.hi(direction);
  for (Index r = 0; r < n; ++r) {
    fill_open(rng, domain, block, r);
    block(r, direction) = fixed;
    if (pinned_time) block(r, domain.d()) = *pinned_time;
  }
  return block;
}

}  // namespace

PointBlock sample_interior(const BoxDomain& domain, Index n, std::uint64_t seed) {
  if (n < 0) throw InvalidArgument("sample_interior: negative count");
  UniformSource rng(seed);
  PointBlock block(n, domain.dim_total());
  for (Index r = 0; r < n; ++r) fill_open(rng, domain, block, r);
  return block;
}

FaceSamples sample_faces(const BoxDomain& domain, Index n_bc, Index n_t0, std::uint64_t seed) {
  if (n_bc < 0 || n_t0 < 0) throw InvalidArgument("sample_faces: negative count");
  if (n_t0 > 0 && !domain.time_dependent())
    throw InvalidArgument("sample_faces: initial-time points requested on a stationary domain");
  UniformSource rng(seed);
  FaceSamples out;
  for (int j = 0; j < domain.d(); ++j)
    for (Side side : {Side::low, Side::high})
      out.faces.push_back(face_block(rng, domain, j, side, n_bc, std::nullopt));
  out.initial = PointBlock(n_t0, domain.dim_total());
  for (Index r = 0; r < n_t0; ++r) {
    fill_open(rng, domain, out.initial, r);
    out.initial(r, domain.d()) = 0.0;
  }
  return out;
}

CollocationSet sample_collocation(const BoxDomain& domain, Index n_in, Index n_bc, Index n_t0, std::uint64_t seed) {
  CollocationSet set;
  set.seed = seed;
  set.interior = sample_interior(domain, n_in, derive_seed(seed, 0));
  auto faces = sample_faces(domain, n_bc, n_t0, derive_seed(seed, 1));
  set.faces = std::move(faces.faces);
  set.initial = std::move(faces.initial);
  return set;
}

PointBlock sample_test_set(const BoxDomain& domain, Index n_bc_v, Index n_in_v, std::uint64_t seed) {
  if (n_bc_v < 0 || n_in_v < 0) throw InvalidArgument("sample_test_set: negative count");
  const std::optional<double> t_final =
      domain.time_dependent() ? std::optional<double>(domain.time_extent()) : std::nullopt;
  UniformSource rng(seed);
  std::vector<PointBlock> parts;
  PointBlock interior(n_in_v, domain.dim_total());
  for (Index r = 0; r < n_in_v; ++r) {
    fill_open(rng, domain, interior, r);
    if (t_final) interior(r, domain.d()) = *t_final;
  }
  parts.push_back(std::move(interior));
  for (int j = 0; j < domain.d(); ++j)
    for (Side side : {Side::low, Side::high}) parts.push_back(face_block(rng, domain, j, side, n_bc_v, t_final));
  return stack(parts);
}

int Decomposition::locate(std::span<const double> x) const {
  for (int id = 0; id < size(); ++id)
    if (boxes[id].contains(x, 1e-14)) return id;
  throw InvalidArgument("Decomposition::locate: point outside the domain");
}

Decomposition decompose(const BoxDomain& domain, const std::vector<int>& dirs, const std::vector<int>& counts) {
  if (dirs.size() > kMaxSplitDirections)
    throw UnsupportedConfiguration("decompose: at most " + std::to_string(kMaxSplitDirections) +
                                   " split directions are supported");
  if (dirs.size() != counts.size()) throw InvalidArgument("decompose: dirs/counts length mismatch");
  std::set<int> seen;
  for (std::size_t s = 0; s < dirs.size(); ++s) {
    if (dirs[s] < 0 || dirs[s] >= domain.d()) throw InvalidArgument("decompose: split direction out of range");
    if (!seen.insert(dirs[s]).second) throw InvalidArgument("decompose: repeated split direction");
    if (counts[s] < 1) throw InvalidArgument("decompose: counts must be >= 1");
  }

  Decomposition dec{domain, dirs, counts, {}, {}};
  // cut[s][i] is the i-th cut coordinate along dirs[s]; shared by both neighbors.
  std::vector<std::vector<double>> cuts(dirs.size());
  for (std::size_t s = 0; s < dirs.size(); ++s) {
    const double a = domain.lo(dirs[s]), b = domain.hi(dirs[s]);
    cuts[s].resize(counts[s] + 1);
    for (int i = 0; i <= counts[s]; ++i) cuts[s][i] = a + (b - a) * i / counts[s];
    cuts[s].front() = a;
    cuts[s].back() = b;
  }

  int total = 1;
  for (int c : counts) total *= c;
  for (int id = 0; id < total; ++id) {
    // lexicographic: id = i0 * counts[1] + i1
    std::vector<int> idx(dirs.size());
    int rem = id;
    for (int s = static_cast<int>(dirs.size()) - 1; s >= 0; --s) {
      idx[s] = rem % counts[s];
      rem /= counts[s];
    }
    auto lo = domain.lo(), hi = domain.hi();
    for (std::size_t s = 0; s < dirs.size(); ++s) {
      lo[dirs[s]] = cuts[s][idx[s]];
      hi[dirs[s]] = cuts[s][idx[s] + 1];
    }
    dec.boxes.emplace_back(lo, hi, domain.time_extent_opt());

    int stride = 1;
    for (int s = static_cast<int>(dirs.size()) - 1; s >= 0; --s) {
      if (idx[s] + 1 < counts[s]) dec.interfaces.push_back({id, id + stride, dirs[s]});
      stride *= counts[s];
    }
  }
  std::sort(dec.interfaces.begin(), dec.interfaces.end(), [](const Interface& x, const Interface& y) {
    return std::tie(x.lower, x.higher) < std::tie(y.lower, y.higher);
  });
  return dec;
}

std::uint64_t subdomain_seed(std::uint64_t parent, int id, int count) {
  return count == 1 ? parent : derive_seed(parent, 1000 + static_cast<std::uint64_t>(id));
}

std::vector<CollocationSet> sample_decomposed(const Decomposition& dec, Index n_in, Index n_bc, Index n_t0,
                                              std::uint64_t seed) {
  std::vector<CollocationSet> sets;
  sets.reserve(dec.size());
  for (int id = 0; id < dec.size(); ++id)
    sets.push_back(sample_collocation(dec.boxes[id], n_in, n_bc, n_t0, subdomain_seed(seed, id, dec.size())));
  return align_shared_faces(dec, std::move(sets));
}

std::vector<CollocationSet> align_shared_faces(const Decomposition& dec, std::vector<CollocationSet> sets) {
  if (static_cast<int>(sets.size()) != dec.size())
    throw InvalidArgument("align_shared_faces: need one collocation set per sub-domain");
  for (const auto& s : sets) {
    if (s.n_bc() != sets.front().n_bc() || s.faces.size() != sets.front().faces.size())
      throw InvalidArgument("align_shared_faces: sub-domains sampled with different n_bc");
  }
  for (const auto& itf : dec.interfaces) {
    sets[itf.higher].faces[face_index(itf.direction, Side::low)] =
        sets[itf.lower].faces[face_index(itf.direction, Side::high)];
  }
  return sets;
}

}  // namespace hdelm
