#include "cp1/hyperbolic.hpp"

#include <cmath>

#include "cp1/errors.hpp"

namespace cp1 {

bool GeodesicH3::same_line(const GeodesicH3& o, double tol) const {
  return (same_point(tail, o.tail, tol) && same_point(head, o.head, tol)) ||
         (same_point(tail, o.head, tol) && same_point(head, o.tail, tol));
}

double h3_distance(const PointH3& p, const PointH3& q) {
  const double num = std::norm(p.z - q.z) + (p.t - q.t) * (p.t - q.t);
  return 2.0 * std::asinh(std::sqrt(num) / (2.0 * std::sqrt(p.t * q.t)));
}

double h2_distance(cplx z, cplx w) {
  return 2.0 * std::asinh(std::abs(z - w) / (2.0 * std::sqrt(z.imag() * w.imag())));
}

PointH3 apply(const Mobius& m0, const PointH3& p) {
  const Mobius m = m0.normalized();
  const cplx num = m.a() * p.z + m.b();
  const cplx den = m.c() * p.z + m.d();
  const double t2 = p.t * p.t;
  const double scale = std::norm(den) + std::norm(m.c()) * t2;
  return {(num * std::conj(den) + m.a() * std::conj(m.c()) * t2) / scale, p.t / scale};
}

Mobius rotation_about_geodesic(const GeodesicH3& g, double angle) {
  const Mobius n = mobius_sending_zero_inf(g.tail, g.head);
  const cplx e = std::polar(1.0, angle / 2.0);
  const cplx ei = std::conj(e);
  // n * diag(e, e^-1) * n^-1 with n^-1 = adj(n) since det n = 1.
  const cplx a = n.a(), b = n.b(), c = n.c(), d = n.d();
  return Mobius::raw(a * e * d - b * ei * c, -a * e * b + b * ei * a,
                     c * e * d - d * ei * c, -c * e * b + d * ei * a);
}

PointH3 nearest_point_projection(const PlaneH3& plane, const PointCP1& x, const Tolerances& tol) {
  const auto pts = plane.boundary.sample_points();
  const Mobius m = mobius_from_triple(pts[0], pts[1], pts[2]);
  const PointCP1 y = m.inverse().apply(x);
  if (y.is_infinite(tol.geo))
    fail(ErrorKind::Domain, "nearest_point_projection: point lies on the boundary circle");
  const cplx w = y.value();
  if (!(w.imag() > tol.geo * std::max(1.0, std::abs(w))))
    fail(ErrorKind::Domain, "nearest_point_projection: point is not inside the disk side");
  return apply(m, PointH3{cplx(w.real(), 0.0), w.imag()});
}

double plane_residual(const PlaneH3& plane, const PointH3& p) {
  // Normalised by the Euclidean size of the point so far-away points compare fairly.
  const double s = 1.0 + std::norm(p.z) + p.t * p.t;
  return plane.boundary.h3_form(p.z, p.t) / s;
}

Vec3 to_poincare_ball(const PointH3& p) {
  const double r2 = std::norm(p.z) + p.t * p.t;
  const double den = std::norm(p.z) + (1.0 + p.t) * (1.0 + p.t);
  return {2.0 * p.z.real() / den, 2.0 * p.z.imag() / den, (r2 - 1.0) / den};
}

PointH3 from_poincare_ball(const Vec3& v) {
  const double den = v.x * v.x + v.y * v.y + (1.0 - v.z) * (1.0 - v.z);
  return {cplx(2.0 * v.x, 2.0 * v.y) / den, (1.0 - v.norm2()) / den};
}

Vec3 to_klein_ball(const PointH3& p) {
  const Vec3 b = to_poincare_ball(p);
  return b * (2.0 / (1.0 + b.norm2()));
}

}  // namespace cp1
