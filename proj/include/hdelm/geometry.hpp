#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "hdelm/types.hpp"

namespace hdelm {

/// Hyper-rectangle [lo_0, hi_0] x ... x [lo_{d-1}, hi_{d-1}], optionally times [0, T].
/// With a time extent, time is the last coordinate of every point (index d).
class BoxDomain {
 public:
  BoxDomain(std::vector<double> lo, std::vector<double> hi, std::optional<double> time_extent = std::nullopt);

  /// [a, b]^d, optionally x [0, T].
  static BoxDomain cube(int d, double a, double b, std::optional<double> time_extent = std::nullopt);

  int d() const { return static_cast<int>(lo_.size()); }
  int dim_total() const { return d() + (time_extent_ ? 1 : 0); }
  bool time_dependent() const { return time_extent_.has_value(); }
  double time_extent() const { return time_extent_.value_or(0.0); }
  const std::optional<double>& time_extent_opt() const { return time_extent_; }

  double lo(int i) const { return lo_.at(i); }
  double hi(int i) const { return hi_.at(i); }
  const std::vector<double>& lo() const { return lo_; }
  const std::vector<double>& hi() const { return hi_; }

  /// Closed-box membership of a point with dim_total() coordinates (tolerance tol).
  bool contains(std::span<const double> x, double tol = 0.0) const;
  double volume() const;

 private:
  std::vector<double> lo_, hi_;
  std::optional<double> time_extent_;
};

enum class Side { low = 0, high = 1 };

/// A face carrying a boundary condition. Spatial faces are (direction, side);
/// the initial-time face exists only for time-dependent domains. The terminal
/// face t = T never carries a condition and has no FaceId.
struct FaceId {
  enum class Kind { spatial, initial_time };
  Kind kind = Kind::spatial;
  int direction = 0;
  Side side = Side::low;

  static FaceId spatial(int direction, Side side) { return {Kind::spatial, direction, side}; }
  static FaceId initial_time() { return {Kind::initial_time, -1, Side::low}; }
  bool operator==(const FaceId&) const = default;
};

/// Position of spatial face (direction, side) in CollocationSet::faces.
/// Faces are stored low/high per direction: x_0 = a_0, x_0 = b_0, x_1 = a_1, ...
inline int face_index(int direction, Side side) { return 2 * direction + static_cast<int>(side); }

/// Training points for one (sub-)domain.
struct CollocationSet {
  PointBlock interior;
  std::vector<PointBlock> faces;  // 2d blocks of n_bc points, ordered by face_index
  PointBlock initial;             // n_t0 points with t = 0 (empty when stationary)
  std::uint64_t seed = 0;

  Index n_in() const { return interior.rows(); }
  Index n_bc() const { return faces.empty() ? 0 : faces.front().rows(); }
  Index n_t0() const { return initial.rows(); }
  /// 2 d n_bc (+ n_t0)
  Index n_bc_total() const;

  /// Spatial-face points in face order, followed by the initial points.
  PointBlock condition_points() const;
  /// interior, then condition_points(): every point where the PDE residual is enforced.
  PointBlock all_points() const;
};

struct FaceSamples {
  std::vector<PointBlock> faces;
  PointBlock initial;
};

PointBlock sample_interior(const BoxDomain& domain, Index n, std::uint64_t seed);

/// n_bc points per spatial face (fixed coordinate pinned exactly, the rest
/// uniform on open intervals, time in (0, T)) and n_t0 points on the t = 0 face.
FaceSamples sample_faces(const BoxDomain& domain, Index n_bc, Index n_t0, std::uint64_t seed);

/// Interior and face blocks from independent sub-streams of seed.
CollocationSet sample_collocation(const BoxDomain& domain, Index n_in, Index n_bc, Index n_t0,
                                  std::uint64_t seed);

/// Held-out evaluation points: n_in_v interior points followed by n_bc_v points
/// per spatial face. Time-dependent domains are evaluated on the slab t = T.
PointBlock sample_test_set(const BoxDomain& domain, Index n_bc_v, Index n_in_v, std::uint64_t seed);

/// Pair of adjacent sub-boxes: the high face of `lower` along `direction`
/// coincides with the low face of `higher`.
struct Interface {
  int lower = 0;
  int higher = 0;
  int direction = 0;
  bool operator==(const Interface&) const = default;
};

/// Uniform tiling of a box along at most two spatial directions.
/// Sub-domain IDs are lexicographic over the split grid, first split
/// direction most significant.
struct Decomposition {
  BoxDomain parent;
  std::vector<int> dirs;
  std::vector<int> counts;
  std::vector<BoxDomain> boxes;
  std::vector<Interface> interfaces;  // sorted by (lower, higher)

  int size() const { return static_cast<int>(boxes.size()); }
  /// Lowest ID whose closed box contains x.
  int locate(std::span<const double> x) const;
};

inline constexpr int kMaxSplitDirections = 2;

Decomposition decompose(const BoxDomain& domain, const std::vector<int>& dirs, const std::vector<int>& counts);

/// Per-sub-domain seed; identical to parent when there is a single sub-domain.
std::uint64_t subdomain_seed(std::uint64_t parent, int id, int count);

/// Sample one collocation set per sub-box with subdomain_seed streams, then align.
std::vector<CollocationSet> sample_decomposed(const Decomposition& dec, Index n_in, Index n_bc, Index n_t0,
                                              std::uint64_t seed);

/// For every interface, replaces the higher-ID box's low face block by the
/// lower-ID box's high face block, so both sides share identical points.
std::vector<CollocationSet> align_shared_faces(const Decomposition& dec, std::vector<CollocationSet> sets);

/// Vertically stacks point blocks with equal column counts.
PointBlock stack(std::span<const PointBlock> blocks);

}  // namespace hdelm
