#pragma once

// PSL(2,C) arithmetic on the Riemann sphere: points in homogeneous
// coordinates, Moebius maps, oriented round circles and the round disks
// they bound, plus minimal enclosing disks of planar point sets.

#include <array>
#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "cp1/tolerances.hpp"
#include "cp1/vec3.hpp"

namespace cp1 {

using cplx = std::complex<double>;

/// A point of CP^1 as a homogeneous pair (z0 : z1). Infinity is (1 : 0).
struct PointCP1 {
  cplx z0{0.0};
  cplx z1{1.0};

  PointCP1() = default;
  PointCP1(cplx h0, cplx h1) : z0(h0), z1(h1) {}
  PointCP1(cplx z) : z0(z), z1(1.0) {}  // NOLINT: finite points convert implicitly

  static PointCP1 infinity() { return {cplx(1.0), cplx(0.0)}; }

  double norm() const { return std::sqrt(std::norm(z0) + std::norm(z1)); }
  bool is_infinite(double tol = 1e-14) const { return std::abs(z1) <= tol * norm(); }
  /// Affine coordinate z0/z1; only meaningful for finite points.
  cplx value() const { return z0 / z1; }
  /// Representative with unit norm and z1 real non-negative where possible.
  PointCP1 normalized() const;
};

/// Chordal distance on the unit sphere (diameter 2).
double chordal_distance(const PointCP1& p, const PointCP1& q);

bool same_point(const PointCP1& p, const PointCP1& q, double tol);

/// Inverse stereographic projection onto the unit sphere; infinity is the north pole.
Vec3 to_sphere(const PointCP1& p);
PointCP1 from_sphere(const Vec3& v);

/// Cross-ratio (a, b; c, d) = (a - c)(b - d) / ((a - d)(b - c)).
cplx cross_ratio(const PointCP1& a, const PointCP1& b, const PointCP1& c, const PointCP1& d);

/// Element of PSL(2,C). Construction rescales to determinant one and fixes
/// the sign so that the first entry with modulus above tol_alg has positive
/// real part (positive imaginary part when the real part vanishes).
class Mobius {
 public:
  Mobius() = default;
  Mobius(cplx a, cplx b, cplx c, cplx d);

  static Mobius identity() { return {}; }
  /// Unnormalised SL(2,C) matrix; used where the sign of the lift matters.
  static Mobius raw(cplx a, cplx b, cplx c, cplx d);

  cplx a() const { return m_[0]; }
  cplx b() const { return m_[1]; }
  cplx c() const { return m_[2]; }
  cplx d() const { return m_[3]; }
  const std::array<cplx, 4>& entries() const { return m_; }

  cplx det() const { return m_[0] * m_[3] - m_[1] * m_[2]; }
  cplx trace() const { return m_[0] + m_[3]; }

  PointCP1 apply(const PointCP1& p) const {
    return {m_[0] * p.z0 + m_[1] * p.z1, m_[2] * p.z0 + m_[3] * p.z1};
  }
  PointCP1 operator()(const PointCP1& p) const { return apply(p); }

  Mobius inverse() const;
  Mobius normalized() const;
  Mobius operator*(const Mobius& o) const;
  Mobius operator-() const { return raw(-m_[0], -m_[1], -m_[2], -m_[3]); }

  /// Frobenius norm of the entry-wise difference.
  double distance(const Mobius& o) const;
  /// min over signs of distance(+-o): the PSL(2,C) comparison.
  double projective_distance(const Mobius& o) const;

  double max_imag() const;

 private:
  std::array<cplx, 4> m_{cplx(1.0), cplx(0.0), cplx(0.0), cplx(1.0)};
};

Mobius commutator(const Mobius& a, const Mobius& b);

/// The unique map sending 0, 1, infinity to p, q, r.
Mobius mobius_from_triple(const PointCP1& p, const PointCP1& q, const PointCP1& r);
/// A map sending 0 to u and infinity to v.
Mobius mobius_sending_zero_inf(const PointCP1& u, const PointCP1& v);

enum class MobiusType { Identity, Elliptic, Parabolic, Hyperbolic, Loxodromic };

const char* to_string(MobiusType t);

struct Classification {
  MobiusType type = MobiusType::Identity;
  /// |tr^2 - 4| fell inside the parabolic band without being exactly 4.
  bool parabolic_ambiguous = false;
  cplx trace_squared{4.0};
  /// Empty for the identity, one point when parabolic, two otherwise.
  /// For hyperbolic/loxodromic maps the order is (repelling, attracting).
  std::vector<PointCP1> fixed_points;
};

Classification classify(const Mobius& m, const Tolerances& tol = default_tolerances());

/// Oriented round circle stored as a Hermitian form H = [[A, B], [conj B, D]]
/// scaled to det H = -1. The oriented side, the disk, is {p : p* H p < 0}.
class OrientedCircle {
 public:
  OrientedCircle(double A, cplx B, double D);

  static OrientedCircle from_center_radius(cplx center, double radius, bool inside = true);
  /// Line through p with direction dir; the disk is the left side.
  static OrientedCircle line(cplx p, cplx dir);
  /// Real axis, disk = upper half-plane.
  static OrientedCircle real_line();

  double A() const { return A_; }
  cplx B() const { return B_; }
  double D() const { return D_; }

  /// p* H p for the unit-norm representative of p.
  double form(const PointCP1& p) const;
  bool contains(const PointCP1& p) const { return form(p) < 0.0; }
  /// Plane-at-height test for the hemisphere (or vertical plane) in H^3.
  double h3_form(cplx z, double t) const;

  OrientedCircle transformed(const Mobius& m) const;
  OrientedCircle flipped() const { return {-A_, -B_, -D_}; }

  bool is_line(double tol = 1e-12) const;
  cplx center() const;
  double radius() const;

  /// Plane m.X = h on the unit sphere cutting out the circle; the disk is m.X < h.
  void sphere_plane(Vec3& normal, double& offset) const;

  /// Chordal distance from p to the circle on the unit sphere.
  double chordal_distance(const PointCP1& p) const;

  /// Three distinct points on the circle in positive order.
  std::array<PointCP1, 3> sample_points() const;

  /// Frobenius distance between the normalised forms.
  double distance(const OrientedCircle& o) const;

 private:
  double A_;
  cplx B_;
  double D_;
};

/// Bilinear pairing with <H, H> = det H; for normalised circles -<H1, H2> is
/// the cosine of the intersection angle.
double inversive_product(const OrientedCircle& c1, const OrientedCircle& c2);

/// Circle through three pairwise distinct points, oriented so that p, q, r
/// run in positive order, i.e. the disk lies to the left.
OrientedCircle circle_through(const PointCP1& p, const PointCP1& q, const PointCP1& r,
                              const Tolerances& tol = default_tolerances());

/// Vertex angle of the crescents D1 \ D2 and D2 \ D1, in [0, pi]. Identical
/// oriented circles give 0 and opposite orientations give pi; disjoint or
/// tangent circles throw NoIntersection.
double angle_between(const OrientedCircle& c1, const OrientedCircle& c2,
                     const Tolerances& tol = default_tolerances());

/// A round disk of CP^1: the negative side of an oriented circle.
struct RoundDisk {
  OrientedCircle boundary = OrientedCircle::real_line();

  bool contains(const PointCP1& p) const { return boundary.contains(p); }
  RoundDisk transformed(const Mobius& m) const { return {boundary.transformed(m)}; }
};

struct EnclosingDisk {
  cplx center{0.0};
  double radius = 0.0;
  std::vector<std::size_t> support;  // indices of the (<= 3) support points
};

/// Smallest closed disk containing all points (randomised incremental
/// construction with a fixed seed).
EnclosingDisk minimal_enclosing_disk(std::span<const cplx> points, std::uint64_t seed = 0x5eed);

/// Circumscribed circle of three points in C, if they are not collinear.
std::optional<EnclosingDisk> circumcircle(cplx a, cplx b, cplx c);

}  // namespace cp1
