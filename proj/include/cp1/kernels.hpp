#pragma once

// Data-parallel kernels over group words. Each entry point takes an Exec
// policy; Exec::Serial is the reference implementation kept for tests and
// the benchmark.

#include <optional>
#include <vector>

#include "cp1/surface_group.hpp"

namespace cp1::kernels {

/// Images of every word of length <= depth, in shortlex order.
std::vector<Mobius> word_images(const Holonomy& rho, int depth, Exec exec);

/// Attracting fixed points (or nothing) for each matrix.
std::vector<std::optional<PointCP1>> attracting_points(const std::vector<Mobius>& images,
                                                       const Tolerances& tol, Exec exec);

/// Keeps the first occurrence of every point up to chordal distance tol.
std::vector<PointCP1> dedup_chordal(const std::vector<std::optional<PointCP1>>& pts, double tol);

/// Real 2x2 matrix of determinant one; the Fuchsian fast path.
struct RealMat {
  double a = 1, b = 0, c = 0, d = 1;

  RealMat operator*(const RealMat& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
  }
  /// Action on a homogeneous real point.
  void apply(double x0, double x1, double& y0, double& y1) const {
    y0 = a * x0 + b * x1;
    y1 = c * x0 + d * x1;
  }
};

RealMat to_real(const Mobius& m);

/// A lifted copy w * axis(gamma_k) of one of the input axes.
struct AxisLift {
  std::size_t curve = 0;
  double tail0, tail1, head0, head1;  // homogeneous real endpoints
  std::vector<Letter> word;           // conjugating word w
};

/// Depth-first sweep over all words w of length <= depth keeping the lifts
/// w * axis_k that meet the hyperbolic disk of the given radius around
/// center. Duplicated lifts (equal endpoint pairs) are kept once, choosing
/// the shortlex-first word. Results are sorted by (curve, word).
std::vector<AxisLift> axis_lifts_near(const Holonomy& rho,
                                      const std::vector<GeodesicH3>& axes, int depth,
                                      cplx center, double radius, Exec exec);

}  // namespace cp1::kernels
