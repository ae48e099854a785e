#include <cmath>
#include <numbers>
#include <random>

#include "cp1/dome.hpp"
#include "cp1/errors.hpp"
#include "cp1/thurston.hpp"
#include "doctest.h"
#include "oracles/geometry_oracles.hpp"
#include "support.hpp"

using namespace cp1;
using testing_support::random_cplx;
using testing_support::standard_fn;

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<PointCP1> tetrahedron() {
  return {PointCP1(0.0), PointCP1(1.0), PointCP1::infinity(),
          PointCP1(cplx(0.5, std::sqrt(3.0) / 2.0))};
}

std::vector<PointCP1> six_points() {
  std::mt19937_64 rng(211);
  std::vector<PointCP1> pts;
  for (int i = 0; i < 6; ++i) pts.push_back(PointCP1(random_cplx(rng, 1.5)));
  return pts;
}

oracle::V3 sphere_of(const PointCP1& p) {
  if (p.is_infinite()) return {0.0, 0.0, 1.0};
  return oracle::sphere(p.value());
}

// Images of the ideal points under w = 1 / (z - x).
std::vector<cplx> normalized(const std::vector<PointCP1>& pts, cplx x) {
  std::vector<cplx> w;
  for (const auto& p : pts) w.push_back(p.is_infinite() ? cplx(0.0) : 1.0 / (p.value() - x));
  return w;
}

// Centre of the ideal triangle of a dome face, from its first three vertices.
cplx face_center(const DomeMesh& m, const DomeFace& f) {
  const Mobius g = mobius_from_triple(m.vertices[f.vertices[0]], m.vertices[f.vertices[1]],
                                      m.vertices[f.vertices[2]]);
  const PointCP1 c = g(PointCP1(cplx(0.5, std::sqrt(3.0) / 2.0)));
  if (f.plane.boundary.form(c) < 0.0) return c.value();
  return g(PointCP1(cplx(0.5, -std::sqrt(3.0) / 2.0))).value();
}

std::vector<PointCP1> random_samples(const DiskComplementDomain& dom, std::size_t n,
                                     std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<PointCP1> out;
  while (out.size() < n) {
    const PointCP1 x(random_cplx(rng, 3.0));
    if (dom.distance_to_complement(x) > 1e-3) out.push_back(x);
  }
  return out;
}
}  // namespace

TEST_CASE("maximal_disk_at: three points on a line") {
  const auto dom = DiskComplementDomain::ideal_set({PointCP1(0.0), PointCP1(1.0), PointCP1::infinity()});
  const auto up = maximal_disk_at(dom, PointCP1(cplx(0.5, 2.0)));
  CHECK(up.disk.boundary.distance(OrientedCircle::real_line()) < 1e-12);
  CHECK(up.ideal_points.size() == 3);
  CHECK(up.core.size() == 3);
  CHECK(up.core_contains_point);
  const auto down = maximal_disk_at(dom, PointCP1(cplx(0.5, -2.0)));
  CHECK(down.disk.boundary.distance(OrientedCircle::real_line().flipped()) < 1e-12);
  CHECK_THROWS_AS(maximal_disk_at(dom, PointCP1(1.0)), Error);
  CHECK_THROWS_AS(DiskComplementDomain::ideal_set({PointCP1(2.0)}), Error);
}

TEST_CASE("maximal_disk_at: sampled real line gives the half-planes") {
  std::vector<PointCP1> line{PointCP1::infinity()};
  for (int k = -40; k <= 40; ++k) line.push_back(PointCP1(k / 8.0));
  const auto dom = DiskComplementDomain::ideal_set(line);
  std::mt19937_64 rng(223);
  std::uniform_real_distribution<double> a(-3.0, 3.0), b(0.2, 3.0);
  for (int k = 0; k < 40; ++k) {
    const double x = a(rng), y = b(rng);
    const auto rec = maximal_disk_at(dom, PointCP1(cplx(x, y)));
    CHECK(rec.disk.boundary.distance(OrientedCircle::real_line()) < 1e-9);
    const PointH3 psi = projection_psi(dom, PointCP1(cplx(x, y)));
    CHECK(std::abs(psi.z - x) < 1e-9);
    CHECK(std::abs(psi.t - y) < 1e-9);
  }
}

TEST_CASE("maximal_disk_at: support-set oracle on small complements") {
  std::mt19937_64 rng(227);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<PointCP1> pts;
    const int n = 3 + trial % 6;
    for (int i = 0; i < n; ++i) pts.push_back(PointCP1(random_cplx(rng, 1.5)));
    if (trial % 3 == 0) pts.back() = PointCP1::infinity();
    const auto dom = DiskComplementDomain::ideal_set(pts);
    for (int q = 0; q < 5; ++q) {
      const cplx x = random_cplx(rng, 2.5);
      if (dom.distance_to_complement(x) < 1e-3) continue;
      const auto rec = maximal_disk_at(dom, x);
      const auto ref = oracle::support_search(normalized(pts, x));
      REQUIRE(ref.has_value());
      const double s = std::max(1.0, ref->radius);
      CHECK(std::abs(rec.enclosing_center - ref->center) < 1e-8 * s);
      CHECK(std::abs(rec.enclosing_radius - ref->radius) < 1e-8 * s);
      CHECK(rec.core_contains_point);
      CHECK(rec.disk.contains(x));
      for (const auto& p : pts) CHECK(rec.disk.boundary.form(p) > -1e-9);
      for (const auto& p : rec.ideal_points) CHECK(rec.disk.boundary.chordal_distance(p) < 1e-7);
    }
  }
}

TEST_CASE("maximal_disk_at: polygon complement seen from infinity") {
  const auto dom = DiskComplementDomain::polygon({cplx(-1, -1), cplx(1, -1), cplx(1, 1), cplx(-1, 1)});
  const auto rec = maximal_disk_at(dom, PointCP1::infinity());
  CHECK(std::abs(rec.enclosing_center) < 1e-12);
  CHECK(std::abs(rec.enclosing_radius - std::sqrt(2.0)) < 1e-12);
  CHECK(rec.ideal_points.size() == 4);
  CHECK_THROWS_AS(maximal_disk_at(dom, PointCP1(0.5)), Error);
  const auto far = maximal_disk_at(dom, PointCP1(cplx(5.0, 0.0)));
  CHECK(far.disk.contains(PointCP1(cplx(5.0, 0.0))));
  for (cplx v : dom.vertices()) CHECK(far.disk.boundary.form(PointCP1(v)) > -1e-9);
}

TEST_CASE("stratification: three points, one stratum per side") {
  const auto dom = DiskComplementDomain::ideal_set({PointCP1(0.0), PointCP1(1.0), PointCP1::infinity()});
  std::vector<PointCP1> xs;
  for (double y : {0.9, 1.5, 3.0}) xs.push_back(PointCP1(cplx(0.5, y)));
  for (double y : {-0.9, -1.5, -3.0}) xs.push_back(PointCP1(cplx(0.5, y)));
  const auto res = stratification_check(dom, xs);
  CHECK(res.report.ok());
  CHECK(res.classes.size() == 2);
  CHECK(res.stratum[0] == res.stratum[2]);
  CHECK(res.stratum[0] != res.stratum[3]);
}

TEST_CASE("stratification: tetrahedron faces against the dome") {
  const auto pts = tetrahedron();
  const auto dom = DiskComplementDomain::ideal_set(pts);
  const DomeMesh mesh = dome(pts);
  REQUIRE(mesh.faces.size() == 4);
  std::vector<PointCP1> xs;
  std::mt19937_64 rng(229);
  std::uniform_real_distribution<double> jitter(-1e-3, 1e-3);
  for (const DomeFace& f : mesh.faces)
    for (int k = 0; k < 3; ++k) xs.push_back(PointCP1(face_center(mesh, f) + cplx(jitter(rng), jitter(rng))));
  const auto res = stratification_check(dom, xs);
  CHECK(res.report.ok());
  CHECK(res.classes.size() == 4);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const DomeFace& f = mesh.faces[i / 3];
    CHECK(res.classes[res.stratum[i]].disk.boundary.distance(f.plane.boundary) < 1e-8);
  }
}

TEST_CASE("stratification: random samples, zero violations, serial equals parallel") {
  for (const auto& pts : {tetrahedron(), six_points()}) {
    const auto dom = DiskComplementDomain::ideal_set(pts);
    const auto xs = random_samples(dom, 300, 233);
    const auto a = stratification_check(dom, xs, Exec::Parallel);
    const auto b = stratification_check(dom, xs, Exec::Serial);
    CHECK(a.report.ok());
    CHECK(a.stratum == b.stratum);
    CHECK(a.classes.size() >= dome(pts).faces.size());
  }
}

TEST_CASE("cores_separated: overlapping cores are detected") {
  const auto dom = DiskComplementDomain::ideal_set(tetrahedron());
  const PointCP1 x(cplx(0.5, 0.3)), y(cplx(0.5, -0.7));
  const auto a = maximal_disk_at(dom, x), b = maximal_disk_at(dom, y);
  CHECK(cores_separated(a, x, b, y));
  // A record paired with a point of the other core fails.
  CHECK_FALSE(cores_separated(a, y, b, y));
}

TEST_CASE("transverse measure: constant inside a stratum") {
  const auto dom = DiskComplementDomain::ideal_set(tetrahedron());
  const std::vector<cplx> path{cplx(0.5, -0.5), cplx(0.5, -0.8), cplx(0.45, -1.2)};
  const auto m = transverse_measure(dom, path);
  CHECK(m.converged);
  CHECK(std::abs(m.value) < 1e-12);
}

TEST_CASE("transverse measure: one dome edge equals its exterior dihedral angle") {
  for (const auto& pts : {tetrahedron(), six_points()}) {
    const auto dom = DiskComplementDomain::ideal_set(pts);
    const DomeMesh mesh = dome(pts);
    for (const DomeEdge& e : mesh.edges) {
      // Frame with the edge from 0 to infinity.
      const Mobius f = mobius_sending_zero_inf(mesh.vertices[e.v0], mesh.vertices[e.v1]).inverse();
      const Mobius fi = f.inverse();
      auto normal = [&](const DomeFace& face) {
        const OrientedCircle c = face.plane.boundary.transformed(f);
        return -c.B() / std::abs(c.B());
      };
      const cplx u0 = normal(mesh.faces[e.f0]), u1 = normal(mesh.faces[e.f1]);
      // The lune of the edge is the sector between the two inward normals.
      const double a0 = std::arg(u0);
      const double a1 = a0 + std::remainder(std::arg(u1) - a0, 2.0 * kPi);
      const double dir = a1 > a0 ? 1.0 : -1.0;
      const double from = a0 - dir * 1e-3, to = a1 + dir * 1e-3;
      std::vector<cplx> path;
      for (int k = 0; k <= 64; ++k)
        path.push_back(fi(PointCP1(std::polar(1.0, from + (to - from) * k / 64.0))).value());
      REQUIRE(maximal_disk_at(dom, PointCP1(path.front())).disk.boundary.distance(
                  mesh.faces[e.f0].plane.boundary) < 1e-8);
      REQUIRE(maximal_disk_at(dom, PointCP1(path.back())).disk.boundary.distance(
                  mesh.faces[e.f1].plane.boundary) < 1e-8);

      const auto m = transverse_measure(dom, path);
      CHECK(m.converged);
      auto third = [&](std::size_t fi_) {
        for (std::size_t v : mesh.faces[fi_].vertices)
          if (v != e.v0 && v != e.v1) return v;
        return std::size_t(0);
      };
      const double expected =
          oracle::exterior_dihedral(sphere_of(pts[e.v0]), sphere_of(pts[e.v1]),
                                    sphere_of(pts[third(e.f0)]), sphere_of(pts[third(e.f1)]));
      CHECK(std::abs(m.value - expected) < 1e-5);
      CHECK(std::abs(m.value - e.weight) < 1e-5);
    }
  }
}

TEST_CASE("transverse measure: two edges add") {
  const auto pts = tetrahedron();
  const auto dom = DiskComplementDomain::ideal_set(pts);
  // Around the vertex at infinity: from below the real axis, over the face
  // (1, w, inf) to the face (w, 0, inf).
  const double R = 50.0;
  std::vector<cplx> path;
  for (int k = 0; k <= 128; ++k) {
    const double a = -kPi / 2 + (kPi / 2 + 5 * kPi / 6) * k / 128.0;
    path.push_back(cplx(0.5, 0.3) + std::polar(R, a));
  }
  const auto m = transverse_measure(dom, path);
  CHECK(m.converged);
  CHECK(std::abs(m.value - 4.0 * kPi / 3.0) < 1e-5);
  // The final levels of the trace are Cauchy.
  const auto& t = m.trace;
  REQUIRE(t.size() >= 3);
  CHECK(std::abs(t[t.size() - 1] - t[t.size() - 2]) <= std::abs(t[t.size() - 2] - t[t.size() - 3]) + 1e-12);
}

TEST_CASE("projection_psi lands on the dome") {
  const auto pts = tetrahedron();
  const auto dom = DiskComplementDomain::ideal_set(pts);
  const DomeMesh mesh = dome(pts);
  std::vector<std::vector<oracle::V3>> faces;
  for (const auto& f : mesh.faces) {
    faces.emplace_back();
    for (std::size_t v : f.vertices) faces.back().push_back(sphere_of(pts[v]));
  }
  for (const PointCP1& x : random_samples(dom, 50, 239)) {
    const PointH3 p = projection_psi(dom, x);
    CHECK(oracle::mesh_distance(oracle::klein(p.z, p.t), faces) < 1e-6);
  }
  const auto tri = DiskComplementDomain::ideal_set({PointCP1(0.0), PointCP1(1.0), PointCP1::infinity()});
  const PointH3 q = projection_psi(tri, PointCP1(cplx(0.3, 0.8)));
  CHECK(std::abs(q.z.imag()) < 1e-12);
}

// --- grafted structures -------------------------------------------------------------

TEST_CASE("recover_weight_from_grafted") {
  const FuchsianHolonomy f = fuchsian_from_fn(standard_fn());
  WeightedMulticurve mc;
  mc.entries.push_back({GroupWord::parse("a1 b1 A1 B1", 2), Weight::pi_fraction(2, 1)});
  mc.entries.push_back({GroupWord::parse("a2", 2), Weight::pi_fraction(4, 1)});
  mc.entries.push_back({GroupWord::parse("a1", 2), Weight::radians(0.0)});
  const GraftedStructure gs(f, mc);
  const auto r1 = recover_weight_from_grafted(gs, GroupWord::parse("a1 b1 A1 B1", 2));
  CHECK(std::abs(r1.value - 2 * kPi) < 1e-6);
  CHECK(r1.two_pi_multiple == 1);
  const auto r2 = recover_weight_from_grafted(gs, GroupWord::parse("a2", 2));
  CHECK(std::abs(r2.value - 4 * kPi) < 1e-6);
  CHECK(r2.two_pi_residual < 1e-6);
  CHECK(recover_weight_from_grafted(gs, GroupWord::parse("A1", 2)).value < 1e-12);
  CHECK_THROWS_AS(recover_weight_from_grafted(gs, GroupWord::parse("b2", 2)), Error);

  WeightedMulticurve half;
  half.entries.push_back({GroupWord::parse("a2", 2), Weight::pi_fraction(1, 2)});
  const GraftedStructure gh(f, half);
  CHECK(std::abs(recover_weight_from_grafted(gh, GroupWord::parse("a2", 2)).value - kPi / 2) < 1e-6);
}

TEST_CASE("verify_covering: loops off the limit set close up") {
  const FuchsianHolonomy f = fuchsian_from_fn(standard_fn());
  WeightedMulticurve mc;
  mc.entries.push_back({GroupWord::parse("a1 b1 A1 B1", 2), Weight::pi_fraction(2, 1)});
  mc.entries.push_back({GroupWord::parse("a1", 2), Weight::pi_fraction(2, 1)});
  const GraftedStructure gs(f, mc);
  const auto limit = limit_set_sample(gs.holonomy(), 6);
  const auto loops = random_loops_off_limit_set(limit, 6, 0.05, 241);
  REQUIRE(loops.size() == 6);
  const auto res = verify_covering(gs, loops);
  CHECK(res.report.ok());
  CHECK(res.lifts > 0);
  CHECK(res.failures == 0);
  CHECK(res.max_closure_error < 1e-6);
  CHECK(res.min_embedding_radius > 0.0);

  std::vector<PointCP1> bad;
  for (int k = 0; k < 16; ++k) bad.push_back(PointCP1(0.3 + 0.2 * std::polar(1.0, 2 * kPi * k / 16)));
  try {
    verify_covering(gs, {bad});
    CHECK(false);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Precondition);
  }
}

TEST_CASE("dome_edge_transversal crosses exactly one edge") {
  for (const auto& pts : {tetrahedron(), six_points()}) {
    const auto dom = DiskComplementDomain::ideal_set(pts);
    const DomeMesh mesh = dome(pts);
    for (const DomeEdge& e : mesh.edges) {
      const auto path = dome_edge_transversal(mesh, e);
      CHECK(maximal_disk_at(dom, PointCP1(path.front())).disk.boundary.distance(
                mesh.faces[e.f0].plane.boundary) < 1e-8);
      CHECK(maximal_disk_at(dom, PointCP1(path.back())).disk.boundary.distance(
                mesh.faces[e.f1].plane.boundary) < 1e-8);
      CHECK(std::abs(transverse_measure(dom, path).value - e.weight) < 1e-5);
    }
  }
}
