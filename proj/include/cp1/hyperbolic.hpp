#pragma once

// Upper half-space model of H^3 and the hyperbolic plane H^2 sitting in it
// as the vertical half-plane over the real axis.

#include "cp1/moebius.hpp"

namespace cp1 {

/// Point (z, t) of upper half-space, t > 0.
struct PointH3 {
  cplx z{0.0};
  double t = 1.0;
};

/// Oriented geodesic between two distinct ideal points (tail -> head).
struct GeodesicH3 {
  PointCP1 tail;
  PointCP1 head;

  GeodesicH3 reversed() const { return {head, tail}; }
  /// Same unordered endpoint pair.
  bool same_line(const GeodesicH3& o, double tol) const;
};

/// Totally geodesic plane bounded by an oriented circle; its normal points
/// into the disk side.
struct PlaneH3 {
  OrientedCircle boundary = OrientedCircle::real_line();

  /// Vertical plane over the real axis, normal pointing to the upper half-plane.
  static PlaneH3 fuchsian() { return {OrientedCircle::real_line()}; }
};

double h3_distance(const PointH3& p, const PointH3& q);

/// Isometric action of a Moebius map on upper half-space.
PointH3 apply(const Mobius& m, const PointH3& p);

/// H^2 (upper half-plane) point as a point of the vertical plane over R.
inline PointH3 lift_h2(cplx z) { return {cplx(z.real(), 0.0), z.imag()}; }

double h2_distance(cplx z, cplx w);

/// Elliptic map fixing the endpoints of g, rotating by angle counter-clockwise
/// when looking from head towards tail. The SL(2,C) lift is returned
/// unnormalised, so angle = 2 pi gives -I.
Mobius rotation_about_geodesic(const GeodesicH3& g, double angle);

/// Foot on P of the geodesic orthogonal to P that ends at x, for x strictly
/// inside the disk side of P's boundary.
PointH3 nearest_point_projection(const PlaneH3& plane, const PointCP1& x,
                                 const Tolerances& tol = default_tolerances());

/// Signed residual of the plane equation (zero on the plane).
double plane_residual(const PlaneH3& plane, const PointH3& p);

/// Poincare ball coordinates, compatible with to_sphere on the ideal boundary.
Vec3 to_poincare_ball(const PointH3& p);
PointH3 from_poincare_ball(const Vec3& v);
/// Klein (projective) ball coordinates.
Vec3 to_klein_ball(const PointH3& p);

}  // namespace cp1
