#include <cmath>
#include <numbers>
#include <random>

#include "cp1/dome.hpp"
#include "cp1/errors.hpp"
#include "cp1/hyperbolic.hpp"
#include "doctest.h"
#include "oracles/geometry_oracles.hpp"
#include "support.hpp"

using namespace cp1;
using testing_support::random_cplx;
using testing_support::random_mobius;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0.0, 1.0);

std::vector<PointCP1> tetrahedron() {
  return {PointCP1(0.0), PointCP1(1.0), PointCP1::infinity(),
          PointCP1(cplx(0.5, std::sqrt(3.0) / 2.0))};
}
}  // namespace

TEST_CASE("h3_distance: basic values") {
  CHECK(h3_distance({0.0, 1.0}, {0.0, 1.0}) == doctest::Approx(0.0));
  CHECK(std::abs(h3_distance({0.0, 1.0}, {0.0, std::exp(1.0)}) - 1.0) < 1e-14);
  const double q = oracle::h3_distance_quadrature(0.0, 1.0, 1.0, 1.0);
  CHECK(std::abs(h3_distance({0.0, 1.0}, {1.0, 1.0}) - q) < 1e-9);
}

TEST_CASE("h3_distance: quadrature oracle and isometry invariance") {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> ht(0.3, 3.0);
  for (int k = 0; k < 30; ++k) {
    const PointH3 p{random_cplx(rng), ht(rng)}, q{random_cplx(rng), ht(rng)};
    const double d = h3_distance(p, q);
    CHECK(std::abs(d - oracle::h3_distance_quadrature(p.z, p.t, q.z, q.t)) < 1e-7);
    CHECK(std::abs(d - h3_distance(q, p)) < 1e-14);
    const Mobius m = random_mobius(rng);
    CHECK(std::abs(d - h3_distance(apply(m, p), apply(m, q))) < 1e-8 * std::max(1.0, d));
  }
}

TEST_CASE("apply on H^3 extends the boundary action") {
  std::mt19937_64 rng(43);
  for (int k = 0; k < 30; ++k) {
    const Mobius m = random_mobius(rng);
    const cplx z = random_cplx(rng);
    const PointH3 img = apply(m, {z, 1e-9});
    CHECK(std::abs(img.z - m(z).value()) < 1e-6);
  }
}

TEST_CASE("rotation_about_geodesic: standard axis and full turn") {
  const double th = 0.7;
  const Mobius r = rotation_about_geodesic({PointCP1(0.0), PointCP1::infinity()}, th);
  CHECK(std::abs(r.a() - std::exp(I * th / 2.0)) < 1e-14);
  CHECK(std::abs(r.d() - std::exp(-I * th / 2.0)) < 1e-14);
  CHECK(std::abs(r.b()) < 1e-14);
  CHECK(std::abs(r.c()) < 1e-14);

  std::mt19937_64 rng(47);
  for (int k = 0; k < 20; ++k) {
    const GeodesicH3 g{random_cplx(rng), random_cplx(rng)};
    const Mobius full = rotation_about_geodesic(g, 2.0 * kPi);
    CHECK(full.distance(-Mobius::identity()) < 1e-12);
    CHECK(full.projective_distance(Mobius::identity()) < 1e-12);
  }
}

TEST_CASE("rotation_about_geodesic: quarter turn about (-1, 1)") {
  const GeodesicH3 g{PointCP1(-1.0), PointCP1(1.0)};
  const Mobius r = rotation_about_geodesic(g, kPi / 2.0);
  const auto c = classify(r);
  CHECK(c.type == MobiusType::Elliptic);
  CHECK(std::abs(c.trace_squared - 2.0) < 1e-12);
  CHECK(chordal_distance(r(PointCP1(-1.0)), PointCP1(-1.0)) < 1e-12);
  CHECK(chordal_distance(r(PointCP1(1.0)), PointCP1(1.0)) < 1e-12);
}

TEST_CASE("rotation_about_geodesic: composition law") {
  std::mt19937_64 rng(53);
  std::uniform_real_distribution<double> ang(-4.0, 4.0);
  for (int k = 0; k < 100; ++k) {
    const GeodesicH3 g{random_cplx(rng), random_cplx(rng)};
    const double a = ang(rng), b = ang(rng);
    const Mobius lhs = rotation_about_geodesic(g, a) * rotation_about_geodesic(g, b);
    CHECK(lhs.projective_distance(rotation_about_geodesic(g, a + b)) < 1e-10);
  }
}

TEST_CASE("rotation direction: counter-clockwise seen from the head") {
  // Axis 0 -> infinity; from infinity looking down, z -> e^{i th} z is
  // counter-clockwise.
  const Mobius r = rotation_about_geodesic({PointCP1(0.0), PointCP1::infinity()}, kPi / 2.0);
  CHECK(std::abs(r(PointCP1(1.0)).value() - I) < 1e-14);
}

TEST_CASE("nearest_point_projection: half-plane and unit disk") {
  CHECK(std::abs(nearest_point_projection(PlaneH3::fuchsian(), PointCP1(0.3 + 2.0 * I)).z - 0.3) < 1e-12);
  const PointH3 p = nearest_point_projection(PlaneH3::fuchsian(), PointCP1(0.3 + 2.0 * I));
  CHECK(std::abs(p.t - 2.0) < 1e-12);

  const PointH3 apex =
      nearest_point_projection({OrientedCircle::from_center_radius(0.0, 1.0)}, PointCP1(0.0));
  CHECK(std::abs(apex.z) < 1e-12);
  CHECK(std::abs(apex.t - 1.0) < 1e-12);

  CHECK_THROWS_AS(nearest_point_projection(PlaneH3::fuchsian(), PointCP1(-I)), Error);
  CHECK_THROWS_AS(nearest_point_projection(PlaneH3::fuchsian(), PointCP1(1.0)), Error);
}

TEST_CASE("nearest_point_projection: orthogonal geodesic oracle") {
  // The projection onto the vertical plane over R of a + bi is the top of the
  // semicircle through a + bi orthogonal to that plane, i.e. (a, b).
  std::mt19937_64 rng(59);
  std::uniform_real_distribution<double> u(-3.0, 3.0), v(0.1, 3.0);
  for (int k = 0; k < 50; ++k) {
    const double a = u(rng), b = v(rng);
    const PointH3 p = nearest_point_projection(PlaneH3::fuchsian(), PointCP1(cplx(a, b)));
    CHECK(std::abs(p.z - a) < 1e-12);
    CHECK(std::abs(p.t - b) < 1e-12);
  }
}

TEST_CASE("nearest_point_projection: equivariance and plane equation") {
  std::mt19937_64 rng(61);
  const PlaneH3 plane{OrientedCircle::from_center_radius(0.2, 1.3)};
  for (int k = 0; k < 50; ++k) {
    const Mobius m = random_mobius(rng);
    cplx x = random_cplx(rng, 0.8);
    const PointH3 p = nearest_point_projection(plane, x);
    CHECK(std::abs(plane_residual(plane, p)) < 1e-7);
    const PlaneH3 moved{plane.boundary.transformed(m)};
    const PointH3 q = nearest_point_projection(moved, m(x));
    CHECK(std::abs(plane_residual(moved, q)) < 1e-7);
    CHECK(h3_distance(q, apply(m, p)) < 1e-7);
  }
}

TEST_CASE("ball models round trip and agree with the sphere") {
  std::mt19937_64 rng(67);
  std::uniform_real_distribution<double> ht(0.1, 5.0);
  for (int k = 0; k < 50; ++k) {
    const PointH3 p{random_cplx(rng), ht(rng)};
    const Vec3 b = to_poincare_ball(p);
    CHECK(b.norm() < 1.0);
    const PointH3 back = from_poincare_ball(b);
    CHECK(std::abs(back.z - p.z) < 1e-10);
    CHECK(std::abs(back.t - p.t) < 1e-10);
  }
  const cplx z(0.4, -1.1);
  CHECK((to_poincare_ball({z, 1e-12}) - to_sphere(z)).norm() < 1e-9);
}

TEST_CASE("dome: concircular inputs give one flat face") {
  const std::vector<PointCP1> tri{PointCP1(0.0), PointCP1(1.0), PointCP1::infinity()};
  const DomeMesh a = dome(tri);
  CHECK(a.faces.size() == 1);
  CHECK(a.edges.empty());
  CHECK(a.faces[0].vertices.size() == 3);

  const std::vector<PointCP1> sq{PointCP1(1.0), PointCP1(I), PointCP1(-1.0), PointCP1(-I)};
  const DomeMesh b = dome(sq);
  CHECK(b.faces.size() == 1);
  CHECK(b.edges.empty());
  CHECK(b.faces[0].vertices.size() == 4);
}

TEST_CASE("dome: too few or repeated points") {
  const std::vector<PointCP1> two{PointCP1(0.0), PointCP1(1.0)};
  CHECK_THROWS_AS(dome(two), Error);
  const std::vector<PointCP1> rep{PointCP1(0.0), PointCP1(1.0), PointCP1(1.0)};
  CHECK_THROWS_AS(dome(rep), Error);
}

TEST_CASE("dome: regular ideal tetrahedron against plane normals") {
  const auto pts = tetrahedron();
  const DomeMesh m = dome(pts);
  REQUIRE(m.faces.size() == 4);
  REQUIRE(m.edges.size() == 6);
  for (const DomeEdge& e : m.edges) {
    // Third vertices of the two adjacent triangular faces.
    auto third = [&](std::size_t f) {
      for (std::size_t v : m.faces[f].vertices)
        if (v != e.v0 && v != e.v1) return v;
      return std::size_t(0);
    };
    const auto s = [&](std::size_t v) {
      const Vec3 x = to_sphere(pts[v]);
      return oracle::V3{x.x, x.y, x.z};
    };
    const double expected =
        oracle::exterior_dihedral(s(e.v0), s(e.v1), s(third(e.f0)), s(third(e.f1)));
    CHECK(std::abs(e.weight - expected) < 1e-9);
    CHECK(std::abs(e.weight - m.edges[0].weight) < 1e-8);
  }
  CHECK(std::abs(m.edges[0].weight - 2.0 * kPi / 3.0) < 1e-9);
}

TEST_CASE("dome: faces lie on their circles, caps are empty, Euler characteristic") {
  std::mt19937_64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PointCP1> pts;
    for (int i = 0; i < 9; ++i) pts.push_back(PointCP1(random_cplx(rng)));
    const DomeMesh m = dome(pts);
    CHECK(m.vertices.size() - m.edges.size() + m.faces.size() == 2);
    for (const DomeFace& f : m.faces) {
      for (std::size_t v : f.vertices) CHECK(f.plane.boundary.chordal_distance(pts[v]) < 1e-7);
      for (std::size_t v = 0; v < pts.size(); ++v)
        if (std::find(f.vertices.begin(), f.vertices.end(), v) == f.vertices.end())
          CHECK_FALSE(f.plane.boundary.contains(pts[v]));
    }
    for (const DomeEdge& e : m.edges) {
      CHECK(e.weight > 0.0);
      CHECK(e.weight < kPi);
    }
  }
}

TEST_CASE("dome: bending weights are Moebius invariant") {
  std::mt19937_64 rng(73);
  std::vector<PointCP1> pts;
  for (int i = 0; i < 7; ++i) pts.push_back(PointCP1(random_cplx(rng)));
  const DomeMesh m = dome(pts);
  for (int k = 0; k < 10; ++k) {
    const Mobius g = random_mobius(rng);
    std::vector<PointCP1> moved;
    for (const auto& p : pts) moved.push_back(g(p));
    const DomeMesh n = dome(moved);
    REQUIRE(n.edges.size() == m.edges.size());
    for (const DomeEdge& e : m.edges) {
      bool found = false;
      for (const DomeEdge& f : n.edges) {
        if (std::minmax(e.v0, e.v1) != std::minmax(f.v0, f.v1)) continue;
        found = true;
        CHECK(std::abs(e.weight - f.weight) < 1e-7);
      }
      CHECK(found);
    }
  }
}
