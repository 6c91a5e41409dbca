// Random instance generators shared by the test binaries.
#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "wlsys/matrix.hpp"

namespace testsupport {

using Rng = std::mt19937_64;

inline const std::vector<wlsys::ClodumKind>& all_kinds() {
  static const std::vector<wlsys::ClodumKind> kinds{wlsys::ClodumKind::MaxPlus, wlsys::ClodumKind::MaxTimes,
                                                    wlsys::ClodumKind::MaxMin, wlsys::ClodumKind::ProductTNorm};
  return kinds;
}

// Values on a coarse grid so that boundary cases of the adjunction laws are
// hit exactly; sentinels appear with probability `sentinel_p` each.
inline wlsys::Scalar random_scalar(const wlsys::Clodum& c, Rng& rng, double sentinel_p = 0.1) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = u(rng);
  if (r < sentinel_p) return c.bottom();
  if (r < 2 * sentinel_p) return c.top();
  switch (c.kind()) {
    case wlsys::ClodumKind::MaxPlus: return std::uniform_int_distribution<int>(-20, 20)(rng) / 4.0;
    case wlsys::ClodumKind::MaxTimes: return std::uniform_int_distribution<int>(1, 32)(rng) / 8.0;
    default: return std::uniform_int_distribution<int>(0, 20)(rng) / 20.0;
  }
}

// Continuous finite values (no sentinels).
inline wlsys::Scalar random_finite(const wlsys::Clodum& c, Rng& rng) {
  switch (c.kind()) {
    case wlsys::ClodumKind::MaxPlus: return std::uniform_real_distribution<double>(-5.0, 5.0)(rng);
    case wlsys::ClodumKind::MaxTimes: return std::exp(std::uniform_real_distribution<double>(-2.0, 2.0)(rng));
    default: return std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  }
}

inline wlsys::WVector random_vector(const wlsys::Clodum& c, std::size_t n, Rng& rng, double sentinel_p = 0.1) {
  std::vector<wlsys::Scalar> v(n);
  for (auto& x : v) x = random_scalar(c, rng, sentinel_p);
  return wlsys::WVector(c, v);
}

inline wlsys::WMatrix random_matrix(const wlsys::Clodum& c, std::size_t r, std::size_t k, Rng& rng,
                                    double sentinel_p = 0.1) {
  std::vector<wlsys::Scalar> v(r * k);
  for (auto& x : v) x = random_scalar(c, rng, sentinel_p);
  return wlsys::WMatrix(c, r, k, v);
}

inline wlsys::WMatrix random_finite_matrix(const wlsys::Clodum& c, std::size_t r, std::size_t k, Rng& rng) {
  std::vector<wlsys::Scalar> v(r * k);
  for (auto& x : v) x = random_finite(c, rng);
  return wlsys::WMatrix(c, r, k, v);
}


}  // namespace testsupport
