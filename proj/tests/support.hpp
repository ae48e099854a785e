#pragma once

#include <random>

#include "cp1/moebius.hpp"
#include "cp1/surface_group.hpp"

namespace testing_support {

using cp1::cplx;

inline cplx random_cplx(std::mt19937_64& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng)};
}

/// Random Moebius map with entries in a box, away from degenerate determinant.
inline cp1::Mobius random_mobius(std::mt19937_64& rng) {
  for (;;) {
    const cplx a = random_cplx(rng), b = random_cplx(rng), c = random_cplx(rng),
               d = random_cplx(rng);
    if (std::abs(a * d - b * c) > 0.2) return cp1::Mobius(a, b, c, d);
  }
}

/// Random Fenchel-Nielsen data in a moderate range.
inline cp1::FNCoordinates random_fn(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> len(0.8, 2.5), tw(-1.0, 1.0);
  cp1::FNCoordinates fn;
  for (int i = 0; i < 3; ++i) {
    fn.lengths[i] = len(rng);
    fn.twists[i] = tw(rng);
  }
  return fn;
}

inline cp1::FNCoordinates standard_fn() {
  cp1::FNCoordinates fn;
  fn.lengths = {1.5, 1.7, 2.0};
  fn.twists = {0.3, -0.2, 0.4};
  return fn;
}

}  // namespace testing_support
