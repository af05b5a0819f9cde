#pragma once

#include <cstdint>
#include <random>

namespace hdelm {

/// Mixes a parent seed with a stream tag (SplitMix64 finalizer). Used to derive
/// independent, reproducible sub-streams: layer vs. collocation vs. test points,
/// and one stream per sub-domain.
std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag);

/// Uniform draws on top of std::mt19937_64.
///
/// The bit-to-double mapping is done here instead of through
/// std::uniform_real_distribution, whose output is implementation-defined;
/// with this mapping a seed yields the same numbers with any conforming
/// standard library.
class UniformSource {
 public:
  explicit UniformSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform on the closed interval [lo, hi] (53-bit grid including both ends).
  double closed(double lo, double hi);

  /// Uniform on the open interval (lo, hi); never returns an endpoint.
  double open(double lo, double hi);

  std::uint64_t next_bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace hdelm
