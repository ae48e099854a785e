#include "cp1/moebius.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "cp1/errors.hpp"

namespace cp1 {

namespace {

constexpr double kSignTol = 1e-10;

// Cross product of homogeneous pairs; vanishes iff the points coincide.
cplx wedge(const PointCP1& p, const PointCP1& q) { return p.z0 * q.z1 - p.z1 * q.z0; }

}  // namespace

PointCP1 PointCP1::normalized() const {
  const double n = norm();
  cplx phase(1.0);
  if (std::abs(z1) > 0.0) phase = std::conj(z1) / std::abs(z1);
  else if (std::abs(z0) > 0.0) phase = std::conj(z0) / std::abs(z0);
  return {z0 * phase / n, z1 * phase / n};
}

double chordal_distance(const PointCP1& p, const PointCP1& q) {
  return 2.0 * std::abs(wedge(p, q)) / (p.norm() * q.norm());
}

bool same_point(const PointCP1& p, const PointCP1& q, double tol) {
  return chordal_distance(p, q) < tol;
}

Vec3 to_sphere(const PointCP1& p) {
  const double n0 = std::norm(p.z0);
  const double n1 = std::norm(p.z1);
  const cplx w = p.z0 * std::conj(p.z1);
  const double s = n0 + n1;
  return {2.0 * w.real() / s, 2.0 * w.imag() / s, (n0 - n1) / s};
}

PointCP1 from_sphere(const Vec3& v) {
  // (x + iy) / (1 - z), written homogeneously to survive the north pole.
  if (v.z > 0.0) return {cplx(1.0 + v.z), cplx(v.x, -v.y)};
  return {cplx(v.x, v.y), cplx(1.0 - v.z)};
}

cplx cross_ratio(const PointCP1& a, const PointCP1& b, const PointCP1& c, const PointCP1& d) {
  return (wedge(a, c) * wedge(b, d)) / (wedge(a, d) * wedge(b, c));
}

// --- Mobius ---------------------------------------------------------------

Mobius::Mobius(cplx a, cplx b, cplx c, cplx d) : m_{a, b, c, d} { *this = normalized(); }

Mobius Mobius::raw(cplx a, cplx b, cplx c, cplx d) {
  Mobius m;
  m.m_ = {a, b, c, d};
  return m;
}

Mobius Mobius::normalized() const {
  const cplx s = std::sqrt(det());
  if (std::abs(s) == 0.0) fail(ErrorKind::DegenerateInput, "singular Moebius matrix");
  std::array<cplx, 4> e{m_[0] / s, m_[1] / s, m_[2] / s, m_[3] / s};
  for (const cplx& x : e) {
    if (std::abs(x) <= kSignTol) continue;
    const bool flip = x.real() < 0.0 || (x.real() == 0.0 && x.imag() < 0.0);
    if (flip)
      for (cplx& y : e) y = -y;
    break;
  }
  return raw(e[0], e[1], e[2], e[3]);
}

Mobius Mobius::inverse() const { return raw(m_[3], -m_[1], -m_[2], m_[0]).normalized(); }

Mobius Mobius::operator*(const Mobius& o) const {
  return Mobius(m_[0] * o.m_[0] + m_[1] * o.m_[2], m_[0] * o.m_[1] + m_[1] * o.m_[3],
                m_[2] * o.m_[0] + m_[3] * o.m_[2], m_[2] * o.m_[1] + m_[3] * o.m_[3]);
}

double Mobius::distance(const Mobius& o) const {
  double s = 0.0;
  for (int i = 0; i < 4; ++i) s += std::norm(m_[i] - o.m_[i]);
  return std::sqrt(s);
}

double Mobius::projective_distance(const Mobius& o) const {
  return std::min(distance(o), distance(-o));
}

double Mobius::max_imag() const {
  double r = 0.0;
  for (const cplx& x : m_) r = std::max(r, std::abs(x.imag()));
  return r;
}

Mobius commutator(const Mobius& a, const Mobius& b) {
  return a * b * a.inverse() * b.inverse();
}

Mobius mobius_from_triple(const PointCP1& p, const PointCP1& q, const PointCP1& r) {
  // Columns are s*r (image of infinity) and t*p (image of 0) with s*r + t*p = q.
  const cplx det = wedge(r, p);
  if (std::abs(det) == 0.0) fail(ErrorKind::DegenerateInput, "coincident points");
  const cplx s = wedge(q, p) / det;
  const cplx t = wedge(r, q) / det;
  return Mobius(s * r.z0, t * p.z0, s * r.z1, t * p.z1);
}

Mobius mobius_sending_zero_inf(const PointCP1& u, const PointCP1& v) {
  const cplx det = wedge(v, u);
  if (std::abs(det) == 0.0) fail(ErrorKind::DegenerateInput, "coincident points");
  return Mobius(v.z0, u.z0, v.z1, u.z1);
}

const char* to_string(MobiusType t) {
  switch (t) {
    case MobiusType::Identity: return "identity";
    case MobiusType::Elliptic: return "elliptic";
    case MobiusType::Parabolic: return "parabolic";
    case MobiusType::Hyperbolic: return "hyperbolic";
    case MobiusType::Loxodromic: return "loxodromic";
  }
  return "?";
}

namespace {

// Eigenvector of m for eigenvalue lambda, picking the better-conditioned formula.
PointCP1 eigenvector(const Mobius& m, cplx lambda) {
  const PointCP1 v1{m.b(), lambda - m.a()};
  const PointCP1 v2{lambda - m.d(), m.c()};
  return v1.norm() >= v2.norm() ? v1 : v2;
}

}  // namespace

Classification classify(const Mobius& m, const Tolerances& tol) {
  Classification out;
  const Mobius n = m.normalized();
  out.trace_squared = n.trace() * n.trace();
  if (n.projective_distance(Mobius::identity()) < tol.alg) {
    out.type = MobiusType::Identity;
    return out;
  }
  const cplx t2 = out.trace_squared;
  const bool real = std::abs(t2.imag()) <= tol.alg * std::max(1.0, std::abs(t2));
  const cplx tr = n.trace();
  if (std::abs(t2 - 4.0) < tol.cls) {
    out.type = MobiusType::Parabolic;
    out.parabolic_ambiguous = (t2 != cplx(4.0));
    out.fixed_points.push_back(eigenvector(n, tr / 2.0).normalized());
    return out;
  }
  if (real && t2.real() >= 0.0 && t2.real() < 4.0) out.type = MobiusType::Elliptic;
  else if (real && t2.real() > 4.0) out.type = MobiusType::Hyperbolic;
  else out.type = MobiusType::Loxodromic;

  const cplx disc = std::sqrt(t2 - 4.0);
  cplx l1 = (tr + disc) / 2.0;
  cplx l2 = (tr - disc) / 2.0;
  // The eigenvector of the larger eigenvalue is attracting.
  if (std::abs(l1) < std::abs(l2)) std::swap(l1, l2);
  out.fixed_points.push_back(eigenvector(n, l2).normalized());
  out.fixed_points.push_back(eigenvector(n, l1).normalized());
  return out;
}

// --- OrientedCircle -----------------------------------------------------------

OrientedCircle::OrientedCircle(double A, cplx B, double D) {
  const double det = A * D - std::norm(B);
  if (!(det < 0.0)) fail(ErrorKind::DegenerateInput, "Hermitian form is not a circle");
  const double s = 1.0 / std::sqrt(-det);
  A_ = A * s;
  B_ = B * s;
  D_ = D * s;
}

OrientedCircle OrientedCircle::from_center_radius(cplx center, double radius, bool inside) {
  if (!(radius > 0.0)) fail(ErrorKind::DegenerateInput, "circle radius must be positive");
  const double sign = inside ? 1.0 : -1.0;
  return {sign, -sign * center, sign * (std::norm(center) - radius * radius)};
}

OrientedCircle OrientedCircle::line(cplx p, cplx dir) {
  return {0.0, cplx(0.0, -0.5) * dir, (p * std::conj(dir)).imag()};
}

OrientedCircle OrientedCircle::real_line() { return {0.0, cplx(0.0, -1.0), 0.0}; }

double OrientedCircle::form(const PointCP1& p) const {
  const double n2 = std::norm(p.z0) + std::norm(p.z1);
  const double v = A_ * std::norm(p.z0) + 2.0 * (B_ * std::conj(p.z0) * p.z1).real() +
                   D_ * std::norm(p.z1);
  return v / n2;
}

double OrientedCircle::h3_form(cplx z, double t) const {
  return A_ * (std::norm(z) + t * t) + 2.0 * (B_ * std::conj(z)).real() + D_;
}

OrientedCircle OrientedCircle::transformed(const Mobius& m) const {
  const Mobius n = m.inverse();
  // H' = N^* H N
  const cplx h00 = A_, h01 = B_, h10 = std::conj(B_), h11 = D_;
  const cplx t00 = h00 * n.a() + h01 * n.c();
  const cplx t01 = h00 * n.b() + h01 * n.d();
  const cplx t10 = h10 * n.a() + h11 * n.c();
  const cplx t11 = h10 * n.b() + h11 * n.d();
  const cplx r00 = std::conj(n.a()) * t00 + std::conj(n.c()) * t10;
  const cplx r01 = std::conj(n.a()) * t01 + std::conj(n.c()) * t11;
  const cplx r11 = std::conj(n.b()) * t01 + std::conj(n.d()) * t11;
  return {r00.real(), r01, r11.real()};
}

bool OrientedCircle::is_line(double tol) const { return std::abs(A_) <= tol; }

cplx OrientedCircle::center() const { return -B_ / A_; }

double OrientedCircle::radius() const { return 1.0 / std::abs(A_); }

void OrientedCircle::sphere_plane(Vec3& normal, double& offset) const {
  // form = (A + D)/2 + m.X with m = (Re B, Im B, (A - D)/2) on the unit sphere.
  normal = {B_.real(), B_.imag(), 0.5 * (A_ - D_)};
  offset = -0.5 * (A_ + D_);
}

double OrientedCircle::chordal_distance(const PointCP1& p) const {
  Vec3 m;
  double h = 0.0;
  sphere_plane(m, h);
  const double len = m.norm();
  const Vec3 n = m / len;
  const double alpha = std::acos(std::clamp(h / len, -1.0, 1.0));
  const double beta = std::acos(std::clamp(n.dot(to_sphere(p)), -1.0, 1.0));
  return 2.0 * std::sin(0.5 * std::abs(beta - alpha));
}

std::array<PointCP1, 3> OrientedCircle::sample_points() const {
  if (is_line()) {
    const cplx dir = cplx(0.0, 2.0) * B_;
    const cplx p = -D_ * B_ / (2.0 * std::norm(B_));
    return {PointCP1(p), PointCP1(p + dir), PointCP1::infinity()};
  }
  const cplx c = center();
  const double r = radius();
  const double s = A_ > 0.0 ? 1.0 : -1.0;
  const double step = s * 2.0 * std::numbers::pi / 3.0;
  return {PointCP1(c + r * std::polar(1.0, 0.0)), PointCP1(c + r * std::polar(1.0, step)),
          PointCP1(c + r * std::polar(1.0, 2.0 * step))};
}

double OrientedCircle::distance(const OrientedCircle& o) const {
  return std::sqrt((A_ - o.A_) * (A_ - o.A_) + 2.0 * std::norm(B_ - o.B_) +
                   (D_ - o.D_) * (D_ - o.D_));
}

double inversive_product(const OrientedCircle& c1, const OrientedCircle& c2) {
  return 0.5 * (c1.A() * c2.D() + c2.A() * c1.D()) - (c1.B() * std::conj(c2.B())).real();
}

OrientedCircle circle_through(const PointCP1& p, const PointCP1& q, const PointCP1& r,
                              const Tolerances& tol) {
  if (same_point(p, q, tol.geo) || same_point(q, r, tol.geo) || same_point(p, r, tol.geo))
    fail(ErrorKind::DegenerateInput, "circle_through: coincident points");
  return OrientedCircle::real_line().transformed(mobius_from_triple(p, q, r));
}

namespace {

// det of H1 + sign * H2; equals -4 sin^2 of the half angle (sign -1) or
// -4 cos^2 of it (sign +1) for normalised intersecting circles.
double det_combination(const OrientedCircle& c1, const OrientedCircle& c2, double sign) {
  const double a = c1.A() + sign * c2.A();
  const double d = c1.D() + sign * c2.D();
  return a * d - std::norm(c1.B() + sign * c2.B());
}

}  // namespace

double angle_between(const OrientedCircle& c1, const OrientedCircle& c2, const Tolerances& tol) {
  const double cosine = -inversive_product(c1, c2);
  if (std::abs(cosine) > 1.0 + tol.alg)
    fail(ErrorKind::NoIntersection, "angle_between: circles are disjoint or nested");
  if (std::abs(cosine) < 0.5) return std::acos(cosine);
  // Half-angle forms keep precision for nearly coincident circles.
  const double scale = 0.5 * (c1.distance(OrientedCircle(1.0, 0.0, -1.0)) +
                              c2.distance(OrientedCircle(1.0, 0.0, -1.0))) + 1.0;
  if (cosine > 0.0) {
    const double s = std::sqrt(std::max(0.0, -det_combination(c1, c2, -1.0))) / 2.0;
    const double angle = 2.0 * std::asin(std::min(1.0, s));
    if (angle < 1e-7 && c1.distance(c2) > 1e-4 * scale)
      fail(ErrorKind::NoIntersection, "angle_between: circles are tangent");
    return angle;
  }
  const double s = std::sqrt(std::max(0.0, -det_combination(c1, c2, +1.0))) / 2.0;
  const double angle = std::numbers::pi - 2.0 * std::asin(std::min(1.0, s));
  if (std::numbers::pi - angle < 1e-7 && c1.distance(c2.flipped()) > 1e-4 * scale)
    fail(ErrorKind::NoIntersection, "angle_between: circles are tangent");
  return angle;
}

// --- minimal enclosing disk -----------------------------------------------------

std::optional<EnclosingDisk> circumcircle(cplx a, cplx b, cplx c) {
  const cplx ab = b - a;
  const cplx ac = c - a;
  const double d = 2.0 * (ab.real() * ac.imag() - ab.imag() * ac.real());
  const double scale = std::max({std::norm(ab), std::norm(ac), 1e-300});
  if (std::abs(d) <= 1e-14 * scale) return std::nullopt;
  const double nb = std::norm(ab);
  const double nc = std::norm(ac);
  const cplx u((ac.imag() * nb - ab.imag() * nc) / d, (ab.real() * nc - ac.real() * nb) / d);
  EnclosingDisk e;
  e.center = a + u;
  e.radius = std::abs(u);
  return e;
}

namespace {

EnclosingDisk disk_two(std::span<const cplx> pts, std::size_t i, std::size_t j) {
  EnclosingDisk e;
  e.center = 0.5 * (pts[i] + pts[j]);
  e.radius = 0.5 * std::abs(pts[i] - pts[j]);
  e.support = {i, j};
  return e;
}

EnclosingDisk disk_three(std::span<const cplx> pts, std::size_t i, std::size_t j, std::size_t k) {
  if (auto c = circumcircle(pts[i], pts[j], pts[k])) {
    c->support = {i, j, k};
    return *c;
  }
  // Collinear: the widest pair is a diameter.
  EnclosingDisk best = disk_two(pts, i, j);
  for (const auto& cand : {disk_two(pts, j, k), disk_two(pts, i, k)})
    if (cand.radius > best.radius) best = cand;
  return best;
}

bool outside(const EnclosingDisk& e, cplx p, double scale) {
  return std::abs(p - e.center) > e.radius * (1.0 + 1e-12) + 1e-15 * scale;
}

}  // namespace

EnclosingDisk minimal_enclosing_disk(std::span<const cplx> points, std::uint64_t seed) {
  if (points.empty()) fail(ErrorKind::DegenerateInput, "minimal_enclosing_disk: empty input");
  std::vector<std::size_t> order(points.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);

  double scale = 0.0;
  for (const cplx& p : points) scale = std::max(scale, std::abs(p));

  EnclosingDisk e;
  e.center = points[order[0]];
  e.support = {order[0]};
  for (std::size_t a = 1; a < order.size(); ++a) {
    const std::size_t i = order[a];
    if (!outside(e, points[i], scale)) continue;
    e.center = points[i];
    e.radius = 0.0;
    e.support = {i};
    for (std::size_t b = 0; b < a; ++b) {
      const std::size_t j = order[b];
      if (!outside(e, points[j], scale)) continue;
      e = disk_two(points, i, j);
      for (std::size_t c = 0; c < b; ++c) {
        const std::size_t k = order[c];
        if (outside(e, points[k], scale)) e = disk_three(points, i, j, k);
      }
    }
  }
  return e;
}

}  // namespace cp1
