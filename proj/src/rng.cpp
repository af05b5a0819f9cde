#include "hdelm/rng.hpp"

#include <cmath>

namespace hdelm {

std::uint64_t derive_seed(std::uint64_t parent, std::uint64_t tag) {
  std::uint64_t z = parent + 0x9e3779b97f4a7c15ULL * (tag + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double UniformSource::closed(double lo, double hi) {
  // k / (2^53 - 1), k in [0, 2^53 - 1]
  const double u = static_cast<double>(engine_() >> 11) * (1.0 / 9007199254740991.0);
  return lo + (hi - lo) * u;
}

double UniformSource::open(double lo, double hi) {
  // (k + 1/2) / 2^53 lies strictly inside (0, 1)
  const double u = (static_cast<double>(engine_() >> 11) + 0.5) * (1.0 / 9007199254740992.0);
  double x = lo + (hi - lo) * u;
  if (x <= lo) x = std::nextafter(lo, hi);
  if (x >= hi) x = std::nextafter(hi, lo);
  return x;
}

}  // namespace hdelm
