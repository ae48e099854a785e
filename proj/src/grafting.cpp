#include "cp1/grafting.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <numeric>

#include "cp1/errors.hpp"
#include "cp1/kernels.hpp"

namespace cp1 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;
const cplx kI(0.0, 1.0);

// Real map sending 0 -> u, infinity -> v with positive determinant.
Mobius real_frame(const PointCP1& u, const PointCP1& v) {
  const PointCP1 un = u.normalized(), vn = v.normalized();
  const double u0 = un.z0.real(), u1 = un.z1.real();
  const double v0 = vn.z0.real(), v1 = vn.z1.real();
  const double s = (v0 * u1 - u0 * v1) > 0.0 ? 1.0 : -1.0;
  return Mobius(v0, s * u0, v1, s * u1);
}

// w = frame^-1(z); Re w > 0 on the basepoint side.
cplx leaf_coordinate(const LiftedLeaf& leaf, cplx z) {
  const PointCP1 w = leaf.frame.inverse().apply(PointCP1(z));
  return w.value();
}

double side(const LiftedLeaf& leaf, cplx z) { return leaf_coordinate(leaf, z).real(); }

// Boundary angle of a real point of RP^1.
double boundary_angle(const PointCP1& p) {
  const PointCP1 n = p.normalized();
  return 2.0 * std::atan2(n.z0.real(), n.z1.real());
}

bool chords_cross(double a1, double b1, double a2, double b2) {
  auto inside = [&](double t) {
    const double lo = std::min(a1, b1), hi = std::max(a1, b1);
    return t > lo && t < hi;
  };
  return inside(a2) != inside(b2);
}

PointCP1 unit(const PointCP1& p) {
  const double n = p.norm();
  return {p.z0 / n, p.z1 / n};
}

// Point halfway between two nearby points of CP^1.
PointCP1 cp1_midpoint(const PointCP1& a0, const PointCP1& b0) {
  const PointCP1 a = unit(a0), b = unit(b0);
  const cplx inner = std::conj(a.z0) * b.z0 + std::conj(a.z1) * b.z1;
  const cplx phase = std::abs(inner) > 0.0 ? std::conj(inner) / std::abs(inner) : cplx(1.0);
  return {a.z0 + b.z0 * phase, a.z1 + b.z1 * phase};
}

// Maps p to i and q onto the imaginary axis above i.
Mobius segment_frame(cplx p, cplx q) {
  const Mobius to_i(1.0 / p.imag(), -p.real() / p.imag(), 0.0, 1.0);
  const Mobius cayley(1.0, -kI, 1.0, kI);
  const PointCP1 qd = (cayley * to_i).apply(PointCP1(q));
  const double psi = -std::arg(qd.value());
  const Mobius rot(std::polar(1.0, psi / 2.0), 0.0, 0.0, std::polar(1.0, -psi / 2.0));
  return cayley.inverse() * rot * cayley * to_i;
}

double rel_distance(const Mobius& a, const Mobius& b) {
  double s = 0.0;
  for (cplx e : b.entries()) s += std::norm(e);
  return a.projective_distance(b) / std::sqrt(s);
}

}  // namespace

// --- Weight ------------------------------------------------------------------------

Weight Weight::radians(double r) {
  Weight w;
  w.value = r;
  return w;
}

Weight Weight::pi_fraction(std::int64_t num, std::int64_t den) {
  if (den == 0) fail(ErrorKind::Precondition, "weight: zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
  Weight w;
  w.exact = true;
  w.num = g ? num / g : 0;
  w.den = g ? den / g : 1;
  w.value = kPi * static_cast<double>(w.num) / static_cast<double>(w.den);
  return w;
}

bool Weight::two_pi_multiple(double tol) const {
  if (exact) return den == 1 && num % 2 == 0;
  const double k = std::round(value / kTwoPi);
  return std::abs(value - k * kTwoPi) < tol;
}

std::string Weight::str() const {
  if (exact) {
    if (num == 0) return "0";
    if (den == 1) return std::to_string(num) + "*pi";
    return std::to_string(num) + "/" + std::to_string(den) + "*pi";
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

// --- atlas ---------------------------------------------------------------------------

LeafAtlas build_leaf_atlas(const Holonomy& rho, const WeightedMulticurve& mc, int depth,
                           cplx center, double radius, Exec exec, const Tolerances& tol) {
  std::vector<GeodesicH3> axes;
  for (const auto& e : mc.entries) {
    if (e.word.empty()) fail(ErrorKind::Precondition, "multicurve: empty word");
    if (!(e.weight.value >= 0.0) || !std::isfinite(e.weight.value))
      fail(ErrorKind::Precondition, "multicurve: weight must be finite and non-negative");
    const Mobius g = rho.evaluate(e.word);
    const auto c = classify(g, tol);
    if (c.type != MobiusType::Hyperbolic)
      fail(ErrorKind::Precondition, "multicurve: image of '" + e.word.str() + "' is " +
                                        to_string(c.type) + ", not hyperbolic");
    axes.push_back({c.fixed_points[0], c.fixed_points[1]});
  }

  LeafAtlas atlas;
  atlas.center = center;
  atlas.radius = radius;
  atlas.depth = depth;
  const auto lifts = kernels::axis_lifts_near(rho, axes, depth, center, radius, exec);

  std::vector<double> ta, tb;
  for (const auto& l : lifts) {
    LiftedLeaf leaf;
    PointCP1 tail(cplx(l.tail0), cplx(l.tail1)), head(cplx(l.head0), cplx(l.head1));
    leaf.frame = real_frame(tail, head);
    if (leaf_coordinate(leaf, center).real() < 0.0) {
      std::swap(tail, head);
      leaf.frame = real_frame(tail, head);
    }
    leaf.geodesic = {tail, head};
    leaf.curve = l.curve;
    leaf.weight = mc.entries[l.curve].weight.value;
    leaf.word = GroupWord(l.word);
    ta.push_back(boundary_angle(tail));
    tb.push_back(boundary_angle(head));
    atlas.leaves.push_back(std::move(leaf));
  }

  const std::size_t n = atlas.leaves.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool same = atlas.leaves[i].geodesic.same_line(atlas.leaves[j].geodesic, tol.geo);
      if (same || chords_cross(ta[i], tb[i], ta[j], tb[j])) {
        const auto& wi = mc.entries[atlas.leaves[i].curve].word;
        const auto& wj = mc.entries[atlas.leaves[j].curve].word;
        fail(ErrorKind::Precondition,
             std::string("invalid multicurve: lifts of '") + wi.str() + "' and '" + wj.str() +
                 (same ? "' coincide" : "' intersect"));
      }
    }
  return atlas;
}

namespace {

std::vector<Crossing> atlas_crossings(const LeafAtlas& atlas, cplx p, cplx q,
                                      std::size_t skip = GraftedPoint::kStratum) {
  std::vector<Crossing> out;
  std::vector<std::size_t> hits;
  std::vector<char> outward;
  for (std::size_t k = 0; k < atlas.leaves.size(); ++k) {
    if (k == skip) continue;
    const double sp = side(atlas.leaves[k], p), sq = side(atlas.leaves[k], q);
    if (sp * sq < 0.0) {
      hits.push_back(k);
      outward.push_back(sp > 0.0);
    }
  }
  if (hits.empty()) return out;
  const Mobius m = segment_frame(p, q);
  const Mobius mi = m.inverse();
  for (std::size_t h = 0; h < hits.size(); ++h) {
    const LiftedLeaf& leaf = atlas.leaves[hits[h]];
    const double a = m.apply(leaf.geodesic.tail).value().real();
    const double b = m.apply(leaf.geodesic.head).value().real();
    const double height = std::sqrt(std::max(-a * b, 0.0));
    Crossing c;
    c.leaf = hits[h];
    c.distance = std::log(height);
    c.point = mi.apply(PointCP1(cplx(0.0, height))).value();
    c.outward = outward[h] != 0;
    out.push_back(c);
  }
  std::sort(out.begin(), out.end(),
            [](const Crossing& x, const Crossing& y) { return x.distance < y.distance; });
  return out;
}

double distance_to_leaf(const LiftedLeaf& leaf, cplx z) {
  const cplx w = leaf_coordinate(leaf, z);
  return std::asinh(std::abs(w.real()) / w.imag());
}

}  // namespace

// --- GraftedStructure -----------------------------------------------------------

GraftedStructure::GraftedStructure(FuchsianHolonomy base, WeightedMulticurve mc, GraftOptions opt)
    : base_(std::move(base)), mc_(std::move(mc)), opt_(opt) {
  if (opt_.depth < 1) fail(ErrorKind::Precondition, "grafting: lift depth must be >= 1");
  if (base_.rep.presentation.genus < 2 ||
      base_.rep.generators.size() != static_cast<std::size_t>(base_.rep.presentation.generator_count()))
    fail(ErrorKind::Precondition, "grafting: malformed base holonomy");
  for (const Mobius& g : base_.rep.generators)
    if (g.max_imag() > opt_.tol.geo)
      fail(ErrorKind::Precondition, "grafting: base holonomy is not real");

  x0_ = base_.basepoint;
  double needed = 0.0;
  for (const Mobius& g : base_.rep.generators)
    needed = std::max(needed, h2_distance(x0_, g.apply(PointCP1(x0_)).value()));
  const double radius = std::max(opt_.atlas_radius, needed + 0.5);

  atlas_ = build_leaf_atlas(base_.rep, mc_, opt_.depth, x0_, radius, opt_.exec, opt_.tol);
  if (leaf_distance(x0_) < opt_.tol.geo) {
    // Deterministic perturbation off the leaves.
    for (int k = 0; k < 16; ++k) {
      const cplx cand = x0_ + 1e-4 * std::polar(1.0, kPi * (0.1 + 0.37 * k));
      bool ok = true;
      for (const auto& leaf : atlas_.leaves)
        if (distance_to_leaf(leaf, cand) < opt_.tol.geo) ok = false;
      if (ok) {
        x0_ = cand;
        perturbed_ = true;
        break;
      }
    }
    if (!perturbed_) fail(ErrorKind::Precondition, "grafting: cannot move basepoint off leaves");
    atlas_ = build_leaf_atlas(base_.rep, mc_, opt_.depth, x0_, radius, opt_.exec, opt_.tol);
  }

  near_charts_.resize(atlas_.leaves.size());
#pragma omp parallel for schedule(dynamic) if (opt_.exec == Exec::Parallel)
  for (std::ptrdiff_t k = 0; k < static_cast<std::ptrdiff_t>(atlas_.leaves.size()); ++k) {
    const auto& leaf = atlas_.leaves[static_cast<std::size_t>(k)];
    const cplx w = leaf_coordinate(leaf, x0_);
    const cplx foot = leaf.frame.apply(PointCP1(cplx(0.0, std::abs(w)))).value();
    Mobius b;
    for (const Crossing& c : atlas_crossings(atlas_, x0_, foot, static_cast<std::size_t>(k)))
      b = b * leaf_rotation(c.leaf, c.outward ? atlas_.leaves[c.leaf].weight
                                              : -atlas_.leaves[c.leaf].weight);
    near_charts_[static_cast<std::size_t>(k)] = b;
  }
}

const Holonomy& GraftedStructure::holonomy() const {
  std::call_once(holonomy_once_, [this] {
    auto h = std::make_unique<Holonomy>();
    h->presentation = base_.rep.presentation;
    const std::size_t n = base_.rep.generators.size();
    h->generators.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Mobius& g = base_.rep.generators[i];
      const cplx gx = g.apply(PointCP1(x0_)).value();
      const Mobius b = bending(x0_, gx);
      h->generators[i] = b.distance(Mobius::identity()) == 0.0 ? g : b * g;
    }
    holonomy_ = std::move(h);
  });
  return *holonomy_;
}

std::vector<Crossing> GraftedStructure::crossings(cplx p, cplx q) const {
  return atlas_crossings(atlas_, p, q);
}

Mobius GraftedStructure::leaf_rotation(std::size_t leaf, double angle) const {
  return rotation_about_geodesic(atlas_.leaves.at(leaf).geodesic, angle);
}

Mobius GraftedStructure::bending(cplx p, cplx q) const {
  Mobius b;
  for (const Crossing& c : crossings(p, q)) {
    const double w = atlas_.leaves[c.leaf].weight;
    if (w == 0.0) continue;
    b = b * leaf_rotation(c.leaf, c.outward ? w : -w);
  }
  return b;
}

Mobius GraftedStructure::stratum_chart(cplx z) const { return bending(x0_, z); }

Mobius GraftedStructure::near_chart(std::size_t leaf) const { return near_charts_.at(leaf); }

PointCP1 GraftedStructure::develop(const GraftedPoint& p) const {
  if (!p.in_crescent()) return stratum_chart(p.z).apply(PointCP1(p.z));
  const auto& leaf = atlas_.leaves.at(p.leaf);
  return (near_charts_[p.leaf] * leaf.frame).apply(PointCP1(std::exp(cplx(p.x, kPi / 2 + p.y))));
}

RoundDisk GraftedStructure::maximal_disk(const GraftedPoint& p) const {
  if (!p.in_crescent()) return {OrientedCircle::real_line().transformed(stratum_chart(p.z))};
  const auto& leaf = atlas_.leaves.at(p.leaf);
  const Mobius e(std::polar(1.0, p.y / 2.0), 0.0, 0.0, std::polar(1.0, -p.y / 2.0));
  return {OrientedCircle::real_line().transformed(near_charts_[p.leaf] * leaf.frame * e)};
}

cplx GraftedStructure::collapse(const GraftedPoint& p) const {
  if (!p.in_crescent()) return p.z;
  return atlas_.leaves.at(p.leaf).frame.apply(PointCP1(cplx(0.0, std::exp(p.x)))).value();
}

PointH3 GraftedStructure::pleat(cplx z) const { return apply(stratum_chart(z), lift_h2(z)); }

double GraftedStructure::leaf_distance(cplx z) const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& leaf : atlas_.leaves) best = std::min(best, distance_to_leaf(leaf, z));
  return best;
}

void GraftedStructure::require_off_leaves(cplx z, const char* what) const {
  if (!(z.imag() > 0.0)) fail(ErrorKind::Precondition, std::string(what) + ": point not in H^2");
  for (const auto& leaf : atlas_.leaves) {
    if (distance_to_leaf(leaf, z) < opt_.tol.geo) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "%s: point (%.6g, %.6g) lies on a lifted leaf of '%s'; perturb it by about 1e-4",
                    what, z.real(), z.imag(), mc_.entries[leaf.curve].word.str().c_str());
      fail(ErrorKind::Precondition, buf);
    }
  }
}

// --- free functions ---------------------------------------------------------------

PointCP1 crescent_develop(double theta, double x, double y) {
  if (!(theta >= 0.0)) fail(ErrorKind::Domain, "crescent_develop: negative angle");
  if (!(y >= 0.0 && y <= theta))
    fail(ErrorKind::LiftFailure, "crescent_develop: y outside [0, theta]");
  return PointCP1(std::exp(cplx(x, y)));
}

std::vector<LiftedLeaf> lift_crossings(const FuchsianHolonomy& rho, const WeightedMulticurve& mc,
                                       cplx p, cplx q, int depth, const Tolerances& tol) {
  if (!(p.imag() > 0.0) || !(q.imag() > 0.0))
    fail(ErrorKind::Precondition, "lift_crossings: endpoints must lie in H^2");
  const double radius = h2_distance(p, q) + 0.5;
  const LeafAtlas atlas = build_leaf_atlas(rho.rep, mc, depth, p, radius, Exec::Parallel, tol);
  for (const cplx z : {p, q})
    for (const auto& leaf : atlas.leaves)
      if (distance_to_leaf(leaf, z) < tol.geo)
        fail(ErrorKind::Precondition,
             "lift_crossings: segment endpoint lies on a lifted leaf; perturb it by about 1e-4");
  std::vector<LiftedLeaf> out;
  if (p == q) return out;
  for (const Crossing& c : atlas_crossings(atlas, p, q)) {
    // Report leaves oriented left to right across the segment.
    LiftedLeaf leaf = atlas.leaves[c.leaf];
    if (!c.outward) {
      leaf.geodesic = leaf.geodesic.reversed();
      leaf.frame = real_frame(leaf.geodesic.tail, leaf.geodesic.head);
    }
    out.push_back(std::move(leaf));
  }
  return out;
}

Holonomy grafted_holonomy(const FuchsianHolonomy& rho, const WeightedMulticurve& mc, int depth) {
  GraftOptions opt;
  opt.depth = depth;
  return GraftedStructure(rho, mc, opt).holonomy();
}

// --- pleated surface ------------------------------------------------------------

namespace {

struct KleinChart {
  cplx x0;

  cplx to_klein(const PointCP1& z) const {
    cplx p;
    if (z.is_infinite()) p = 1.0;
    else p = (z.value() - x0) / (z.value() - std::conj(x0));
    return 2.0 * p / (1.0 + std::norm(p));
  }
  cplx to_h2(cplx k) const {
    const cplx p = k / (1.0 + std::sqrt(std::max(0.0, 1.0 - std::norm(k))));
    return (x0 - std::conj(x0) * p) / (1.0 - p);
  }
};

struct Line {
  cplx a, b;  // chord endpoints
  double eval(cplx z) const {
    const cplx d = b - a, v = z - a;
    return d.real() * v.imag() - d.imag() * v.real();
  }
};

struct Cell {
  std::vector<cplx> poly;
};

struct CutEdge {
  std::size_t c0, c1;  // c0 on the basepoint side
  std::size_t leaf;
  cplx a, b;
};

// Splits a convex polygon by a line; returns (negative side, positive side).
std::pair<std::vector<cplx>, std::vector<cplx>> split(const std::vector<cplx>& poly, const Line& l,
                                                      cplx& cut_a, cplx& cut_b) {
  std::vector<cplx> neg, pos;
  std::vector<cplx> cuts;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const cplx p = poly[i], q = poly[(i + 1) % n];
    const double sp = l.eval(p), sq = l.eval(q);
    if (sp <= 0.0) neg.push_back(p);
    if (sp >= 0.0) pos.push_back(p);
    if ((sp < 0.0 && sq > 0.0) || (sp > 0.0 && sq < 0.0)) {
      const cplx x = p + (q - p) * (sp / (sp - sq));
      neg.push_back(x);
      pos.push_back(x);
      cuts.push_back(x);
    } else if (sp == 0.0) {
      cuts.push_back(p);
    }
  }
  if (cuts.size() >= 2) {
    cut_a = cuts[0];
    cut_b = cuts[1];
  }
  return {neg, pos};
}

double polygon_area(const std::vector<cplx>& p) {
  double a = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const cplx u = p[i], v = p[(i + 1) % p.size()];
    a += u.real() * v.imag() - u.imag() * v.real();
  }
  return a / 2.0;
}

cplx centroid(const std::vector<cplx>& p) {
  cplx c = 0.0;
  for (cplx z : p) c += z;
  return c / static_cast<double>(p.size());
}

}  // namespace

PleatedSurfaceMesh pleated_surface(const GraftedStructure& gs, double r0, int sides) {
  const double tol = gs.options().tol.geo;
  if (!(r0 > tol) || !std::isfinite(r0))
    fail(ErrorKind::Precondition, "pleated_surface: truncation radius too small");
  if (r0 > gs.atlas().radius)
    fail(ErrorKind::Precondition, "pleated_surface: truncation radius exceeds the leaf atlas");
  if (sides < 8) sides = 8;

  const KleinChart chart{gs.basepoint()};
  const double rk = std::tanh(r0);
  std::vector<Cell> cells(1);
  for (int k = 0; k < sides; ++k)
    cells[0].poly.push_back(std::polar(rk, kTwoPi * k / sides));

  std::vector<CutEdge> cuts;
  const auto& leaves = gs.atlas().leaves;
  for (std::size_t li = 0; li < leaves.size(); ++li) {
    Line line{chart.to_klein(leaves[li].geodesic.tail), chart.to_klein(leaves[li].geodesic.head)};
    // The basepoint (Klein origin) must be on the negative side.
    if (line.eval(0.0) > 0.0) std::swap(line.a, line.b);
    const cplx d = line.b - line.a;
    const double dist = std::abs(line.eval(0.0)) / std::abs(d);
    if (dist >= rk) continue;

    const std::size_t count = cells.size();
    for (std::size_t c = 0; c < count; ++c) {
      bool has_neg = false, has_pos = false;
      for (cplx z : cells[c].poly) {
        const double s = line.eval(z);
        has_neg |= s < -1e-15;
        has_pos |= s > 1e-15;
      }
      if (!(has_neg && has_pos)) continue;
      cplx a, b;
      auto [neg, pos] = split(cells[c].poly, line, a, b);
      if (std::abs(polygon_area(neg)) < 1e-18 || std::abs(polygon_area(pos)) < 1e-18) continue;
      const std::size_t fresh = cells.size();
      // Older cut edges bordering c now border one of the halves.
      for (CutEdge& e : cuts) {
        const double s = line.eval((e.a + e.b) / 2.0);
        if (s > 0.0) {
          if (e.c0 == c) e.c0 = fresh;
          if (e.c1 == c) e.c1 = fresh;
        }
      }
      cells[c].poly = std::move(neg);
      cells.push_back({std::move(pos)});
      cuts.push_back({c, fresh, li, a, b});
    }
  }

  PleatedSurfaceMesh mesh;
  mesh.center = gs.basepoint();
  mesh.radius = r0;
  mesh.faces.resize(cells.size());
#pragma omp parallel for schedule(dynamic) if (gs.options().exec == Exec::Parallel)
  for (std::ptrdiff_t c = 0; c < static_cast<std::ptrdiff_t>(cells.size()); ++c) {
    const auto& cell = cells[static_cast<std::size_t>(c)];
    PleatFace& f = mesh.faces[static_cast<std::size_t>(c)];
    for (cplx k : cell.poly) f.polygon.push_back(chart.to_h2(k));
    f.isometry = gs.stratum_chart(chart.to_h2(centroid(cell.poly)));
    f.plane = {OrientedCircle::real_line().transformed(f.isometry)};
  }
  for (const CutEdge& e : cuts) {
    PleatEdge pe;
    pe.f0 = e.c0;
    pe.f1 = e.c1;
    pe.leaf = e.leaf;
    pe.weight = leaves[e.leaf].weight;
    const Mobius& m = mesh.faces[e.c0].isometry;
    pe.image = {m.apply(leaves[e.leaf].geodesic.tail), m.apply(leaves[e.leaf].geodesic.head)};
    pe.a = chart.to_h2(e.a);
    pe.b = chart.to_h2(e.b);
    mesh.edges.push_back(pe);
  }
  return mesh;
}

// --- paths ----------------------------------------------------------------------------

bool same_grafted_point(const GraftedPoint& a, const GraftedPoint& b, double tol) {
  if (a.leaf != b.leaf) return false;
  if (!a.in_crescent()) return std::abs(a.z - b.z) < tol;
  return std::abs(a.x - b.x) < tol && std::abs(a.y - b.y) < tol;
}

DevelopResult develop_and_lift(const GraftedStructure& gs, const GraftedPath& path,
                               double max_crescent_step) {
  if (path.vertices.empty()) fail(ErrorKind::Precondition, "develop_and_lift: empty path");
  for (cplx v : {path.vertices.front(), path.vertices.back()})
    gs.require_off_leaves(v, "develop_and_lift");
  if (!(max_crescent_step > 0.0)) max_crescent_step = 0.2;

  DevelopResult out;
  const auto& leaves = gs.atlas().leaves;
  const cplx v0 = path.vertices.front();
  Mobius b = gs.stratum_chart(v0);
  out.samples.push_back({GraftedPoint::stratum(v0), b.apply(PointCP1(v0))});

  std::size_t crossing_index = 0;
  for (std::size_t s = 0; s + 1 < path.vertices.size(); ++s) {
    const cplx p = path.vertices[s], q = path.vertices[s + 1];
    if (p == q) continue;
    for (const Crossing& c : gs.crossings(p, q)) {
      const LiftedLeaf& leaf = leaves[c.leaf];
      const double theta = leaf.weight;

      double climb = theta;
      if (crossing_index < path.wraps.size()) {
        const int k = path.wraps[crossing_index];
        const double turns = std::floor(theta / kTwoPi + 1e-12);
        climb = kTwoPi * k + (theta - kTwoPi * turns);
        if (k < 0 || climb > theta + 1e-12) {
          out.success = false;
          out.failure = "lift leaves the crescent: y = " + std::to_string(climb) +
                        " exceeds the weight " + std::to_string(theta);
          break;
        }
        if (climb < theta - 1e-12) {
          out.success = false;
          out.failure = "path stops inside the crescent at y = " + std::to_string(climb);
          break;
        }
      }
      ++crossing_index;

      const Mobius near = c.outward ? b : b * gs.leaf_rotation(c.leaf, -theta);
      const double x = std::log(std::abs(leaf_coordinate(leaf, c.point)));
      const int steps = std::max(1, static_cast<int>(std::ceil(theta / max_crescent_step)));
      for (int k = 0; k <= steps; ++k) {
        const double t = static_cast<double>(k) / steps;
        const double y = c.outward ? theta * t : theta * (1.0 - t);
        const PointCP1 img = (near * leaf.frame).apply(PointCP1(std::exp(cplx(x, kPi / 2 + y))));
        out.samples.push_back({GraftedPoint::crescent(c.leaf, x, y), img});
      }
      b = c.outward ? near * gs.leaf_rotation(c.leaf, theta) : near;
    }
    if (!out.success) break;
    out.samples.push_back({GraftedPoint::stratum(q), b.apply(PointCP1(q))});
  }
  out.end = out.samples.back().point;
  out.endpoint = out.samples.back().image;
  return out;
}

namespace {

struct LiftState {
  GraftedPoint point;
  Mobius chart;  // stratum chart, or near chart times frame for a crescent
};

// Continuous branch of the crescent height near a reference value.
double crescent_y(cplx w, double ref) {
  double y = std::arg(w) - kPi / 2;
  y += kTwoPi * std::round((ref - y) / kTwoPi);
  return y;
}

class Lifter {
 public:
  explicit Lifter(const GraftedStructure& gs) : gs_(gs), leaves_(gs.atlas().leaves) {}

  bool init(const GraftedPoint& p) {
    state_.point = p;
    if (p.in_crescent()) state_.chart = gs_.near_chart(p.leaf) * leaves_[p.leaf].frame;
    else state_.chart = gs_.stratum_chart(p.z);
    return true;
  }

  // Moves the lift to the point c; false when no consistent single step exists.
  bool step(const PointCP1& c) {
    for (int hops = 0; hops < 4; ++hops) {
      if (!state_.point.in_crescent()) {
        const PointCP1 zp = state_.chart.inverse().apply(c);
        if (zp.is_infinite(1e-12)) return fail("lift left the hyperbolic plane");
        const cplx z = zp.value();
        if (!(z.imag() > 0.0)) return fail("lift left the hyperbolic plane");
        std::size_t crossed = 0, which = 0;
        for (std::size_t k = 0; k < leaves_.size(); ++k)
          if (side(leaves_[k], state_.point.z) * side(leaves_[k], z) < 0.0) {
            ++crossed;
            which = k;
          }
        if (crossed == 0) {
          if (h2_distance(z, gs_.basepoint()) > gs_.atlas().radius - 0.25)
            return fail("lift left the leaf atlas");
          state_.point.z = z;
          return true;
        }
        if (crossed > 1) return false;
        // Enter the crescent of the crossed leaf.
        const LiftedLeaf& leaf = leaves_[which];
        const bool outward = side(leaf, state_.point.z) > 0.0;
        const Mobius near = outward ? state_.chart
                                    : state_.chart * gs_.leaf_rotation(which, -leaf.weight);
        state_.chart = near * leaf.frame;
        const double y0 = outward ? 0.0 : leaf.weight;
        const cplx w = state_.chart.inverse().apply(c).value();
        state_.point = GraftedPoint::crescent(which, std::log(std::abs(w)), crescent_y(w, y0));
        // Clamp the entry side so that a zero-width crescent is crossed at once.
        if (outward && state_.point.y < 0.0) return false;
        if (!outward && state_.point.y > leaf.weight) return false;
        continue;
      }
      const std::size_t li = state_.point.leaf;
      const LiftedLeaf& leaf = leaves_[li];
      const PointCP1 wp = state_.chart.inverse().apply(c);
      if (wp.is_infinite(1e-12) || std::abs(wp.value()) == 0.0)
        return fail("lift reached a fixed point of the leaf holonomy");
      const cplx w = wp.value();
      const double y = crescent_y(w, state_.point.y);
      if (std::abs(y - state_.point.y) > kPi / 2) return false;
      if (y >= 0.0 && y <= leaf.weight) {
        state_.point.x = std::log(std::abs(w));
        state_.point.y = y;
        return true;
      }
      // Leave the crescent into the adjacent stratum.
      const Mobius near = gs_.near_chart(li);
      const Mobius chart = y < 0.0 ? near : near * gs_.leaf_rotation(li, leaf.weight);
      const PointCP1 zp = chart.inverse().apply(c);
      if (zp.is_infinite(1e-12)) return fail("lift left the hyperbolic plane");
      const cplx z = zp.value();
      if (!(z.imag() > 0.0)) return fail("lift left the hyperbolic plane");
      const bool near_side = side(leaf, z) > 0.0;
      if (near_side != (y < 0.0)) return false;
      // Reference point on the leaf, nudged to the correct side.
      const double x = std::log(std::abs(w));
      const cplx ref =
          leaf.frame.apply(PointCP1(std::exp(cplx(x, kPi / 2 + (near_side ? -1e-9 : 1e-9))))).value();
      for (std::size_t k = 0; k < leaves_.size(); ++k)
        if (k != li && side(leaves_[k], ref) * side(leaves_[k], z) < 0.0) return false;
      state_.point = GraftedPoint::stratum(z);
      state_.chart = chart;
      return true;
    }
    return false;
  }

  const GraftedPoint& point() const { return state_.point; }
  const std::string& error() const { return error_; }
  bool hard_failure() const { return !error_.empty(); }

 private:
  bool fail(const std::string& why) {
    error_ = why;
    return false;
  }

  const GraftedStructure& gs_;
  const std::vector<LiftedLeaf>& leaves_;
  LiftState state_;
  std::string error_;
};

}  // namespace

DevelopResult lift_path(const GraftedStructure& gs, const GraftedPoint& start,
                        const std::vector<PointCP1>& path) {
  DevelopResult out;
  Lifter lifter(gs);
  lifter.init(start);
  out.samples.push_back({start, gs.develop(start)});
  PointCP1 prev = out.samples.back().image;

  // Recursive refinement of a step that changes charts ambiguously.
  std::function<bool(const PointCP1&, const PointCP1&, int)> advance =
      [&](const PointCP1& a, const PointCP1& b, int depth) -> bool {
    const GraftedPoint saved = lifter.point();
    if (lifter.step(b)) return true;
    if (lifter.hard_failure() || depth > 40) return false;
    lifter.init(saved);
    const PointCP1 m = cp1_midpoint(a, b);
    return advance(a, m, depth + 1) && advance(m, b, depth + 1);
  };

  for (std::size_t i = 0; i < path.size(); ++i) {
    if (!advance(prev, path[i], 0)) {
      out.success = false;
      out.failure = lifter.error().empty() ? "lift could not be continued" : lifter.error();
      break;
    }
    out.samples.push_back({lifter.point(), path[i]});
    prev = path[i];
  }
  out.end = lifter.point();
  out.endpoint = gs.develop(out.end);
  return out;
}

std::vector<GraftedPoint> preimages(const GraftedStructure& gs, const PointCP1& x) {
  std::vector<GraftedPoint> out;
  const auto& leaves = gs.atlas().leaves;
  const double tol = gs.options().tol.geo;

  // Stratum preimages: every stratum of the atlas borders a leaf, so its
  // chart is a near chart or a far chart.
  std::vector<Mobius> charts{Mobius::identity()};
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    charts.push_back(gs.near_chart(k));
    charts.push_back(gs.near_chart(k) * gs.leaf_rotation(k, leaves[k].weight));
  }
  for (const Mobius& chart : charts) {
    const PointCP1 zp = chart.inverse().apply(x);
    if (zp.is_infinite()) continue;
    const cplx z = zp.value();
    if (!(z.imag() > 0.0) || h2_distance(z, gs.basepoint()) >= gs.atlas().radius) continue;
    if (gs.leaf_distance(z) <= tol) continue;
    if (rel_distance(gs.stratum_chart(z), chart) > 1e-9) continue;
    bool seen = false;
    for (const auto& g : out) seen |= std::abs(g.z - z) < 1e-9 * std::max(1.0, std::abs(z));
    if (!seen) out.push_back(GraftedPoint::stratum(z));
  }

  for (std::size_t k = 0; k < leaves.size(); ++k) {
    const double theta = leaves[k].weight;
    if (theta <= 0.0) continue;
    const Mobius chart = gs.near_chart(k) * leaves[k].frame;
    const PointCP1 wp = chart.inverse().apply(x);
    if (wp.is_infinite() || std::abs(wp.value()) == 0.0) continue;
    const cplx w = wp.value();
    double y = std::arg(w) - kPi / 2;
    while (y < 0.0) y += kTwoPi;
    for (; y < theta; y += kTwoPi)
      if (y > tol && y < theta - tol) out.push_back(GraftedPoint::crescent(k, std::log(std::abs(w)), y));
  }
  return out;
}

}  // namespace cp1
