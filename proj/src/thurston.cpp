#include "cp1/thurston.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "cp1/errors.hpp"

namespace cp1 {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kEdgeSamples = 256;

double cross(cplx a, cplx b) { return a.real() * b.imag() - a.imag() * b.real(); }

bool inside_polygon(const std::vector<cplx>& v, cplx z) {
  int sign = 0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double c = cross(v[(i + 1) % v.size()] - v[i], z - v[i]);
    const int s = c > 0.0 ? 1 : (c < 0.0 ? -1 : 0);
    if (s == 0) continue;
    if (sign == 0) sign = s;
    else if (s != sign) return false;
  }
  return true;
}

cplx nearest_on_segment(cplx a, cplx b, cplx z) {
  const cplx d = b - a;
  const double t = std::clamp(((z - a) * std::conj(d)).real() / std::norm(d), 0.0, 1.0);
  return a + t * d;
}

// Complement points after the normalisation, with the index they came from.
void transported_complement(const DiskComplementDomain& dom, const Mobius& m,
                            std::vector<cplx>& pts, std::vector<std::size_t>& idx,
                            std::vector<PointCP1>& originals) {
  if (dom.kind() == DiskComplementDomain::Kind::IdealSet) {
    for (std::size_t i = 0; i < dom.points().size(); ++i) {
      pts.push_back(m(dom.points()[i]).value());
      idx.push_back(i);
      originals.push_back(dom.points()[i]);
    }
    return;
  }
  const auto& v = dom.vertices();
  const bool identity = m.distance(Mobius::identity()) == 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const int n = identity || v.size() < 2 ? 1 : kEdgeSamples;
    for (int k = 0; k < n; ++k) {
      const cplx z = v[i] + (v[(i + 1) % v.size()] - v[i]) * (static_cast<double>(k) / n);
      pts.push_back(m(PointCP1(z)).value());
      idx.push_back(i * static_cast<std::size_t>(kEdgeSamples) + static_cast<std::size_t>(k));
      originals.push_back(PointCP1(z));
    }
  }
}

Mobius normalization_for(const PointCP1& x) {
  if (x.is_infinite()) return Mobius::identity();
  return Mobius(0.0, 1.0, 1.0, -x.value());
}

// Image of a circle through 0 and infinity: inward unit normal of its disk.
cplx inward_normal(const OrientedCircle& c) { return -c.B() / std::abs(c.B()); }

}  // namespace

// --- domain ---------------------------------------------------------------------------

DiskComplementDomain DiskComplementDomain::ideal_set(std::vector<PointCP1> points) {
  if (points.size() < 2)
    fail(ErrorKind::Domain, "domain: the complement must contain more than one point");
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      if (chordal_distance(points[i], points[j]) < 1e-12)
        fail(ErrorKind::DegenerateInput, "domain: repeated ideal point");
  DiskComplementDomain d;
  d.kind_ = Kind::IdealSet;
  d.points_ = std::move(points);
  return d;
}

DiskComplementDomain DiskComplementDomain::polygon(std::vector<cplx> vertices) {
  if (vertices.size() < 2)
    fail(ErrorKind::Domain, "domain: the complement must contain more than one point");
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const cplx a = vertices[i], b = vertices[(i + 1) % vertices.size()];
    if (std::abs(b - a) < 1e-12) fail(ErrorKind::DegenerateInput, "domain: repeated vertex");
  }
  if (vertices.size() >= 3) {
    double area = 0.0;
    for (std::size_t i = 0; i < vertices.size(); ++i)
      area += cross(vertices[i], vertices[(i + 1) % vertices.size()]);
    if (area < 0.0) std::reverse(vertices.begin(), vertices.end());
    for (std::size_t i = 0; i < vertices.size(); ++i) {
      const cplx a = vertices[i], b = vertices[(i + 1) % vertices.size()],
                 c = vertices[(i + 2) % vertices.size()];
      if (cross(b - a, c - b) < -1e-12) fail(ErrorKind::Domain, "domain: polygon is not convex");
    }
  }
  DiskComplementDomain d;
  d.kind_ = Kind::Polygon;
  d.vertices_ = std::move(vertices);
  return d;
}

double DiskComplementDomain::distance_to_complement(const PointCP1& x) const {
  double best = 4.0;
  if (kind_ == Kind::IdealSet) {
    for (const auto& p : points_) best = std::min(best, chordal_distance(x, p));
    return best;
  }
  if (x.is_infinite()) {
    for (cplx v : vertices_) best = std::min(best, chordal_distance(x, PointCP1(v)));
    return best;
  }
  const cplx z = x.value();
  if (vertices_.size() >= 3 && inside_polygon(vertices_, z)) return 0.0;
  for (std::size_t i = 0; i < vertices_.size(); ++i) {
    const cplx n = nearest_on_segment(vertices_[i], vertices_[(i + 1) % vertices_.size()], z);
    best = std::min(best, chordal_distance(x, PointCP1(n)));
  }
  return best;
}

// --- maximal disks ------------------------------------------------------------------

MaximalDiskRecord maximal_disk_at(const DiskComplementDomain& dom, const PointCP1& x,
                                  const Tolerances& tol) {
  const double dist = dom.distance_to_complement(x);
  if (!(dist > tol.geo))
    fail(ErrorKind::Precondition, "maximal_disk_at: point lies on or too close to the complement");

  MaximalDiskRecord rec;
  rec.normalization = normalization_for(x);
  std::vector<cplx> pts;
  std::vector<std::size_t> idx;
  std::vector<PointCP1> originals;
  transported_complement(dom, rec.normalization, pts, idx, originals);

  const EnclosingDisk med = minimal_enclosing_disk(pts);
  if (!(med.radius > 0.0)) fail(ErrorKind::Domain, "maximal_disk_at: complement is a single point");
  rec.enclosing_center = med.center;
  rec.enclosing_radius = med.radius;

  struct Contact {
    double angle;
    std::size_t k;
  };
  std::vector<Contact> contacts;
  for (std::size_t k = 0; k < pts.size(); ++k)
    if (std::abs(pts[k] - med.center) >= med.radius * (1.0 - tol.contact))
      contacts.push_back({std::arg(pts[k] - med.center), k});
  std::sort(contacts.begin(), contacts.end(),
            [](const Contact& a, const Contact& b) { return a.angle < b.angle; });

  const Mobius back = rec.normalization.inverse();
  rec.disk = {OrientedCircle::from_center_radius(med.center, med.radius, false).transformed(back)};
  for (const Contact& c : contacts) {
    rec.ideal_points.push_back(originals[c.k]);
    rec.ideal_indices.push_back(idx[c.k]);
  }
  const std::size_t n = contacts.size();
  if (n == 2) {
    rec.core.push_back({rec.ideal_points[0], rec.ideal_points[1]});
  } else {
    for (std::size_t i = 0; i < n; ++i)
      rec.core.push_back({rec.ideal_points[i], rec.ideal_points[(i + 1) % n]});
  }
  double gap = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = contacts[i].angle;
    const double b = i + 1 < n ? contacts[i + 1].angle : contacts[0].angle + 2.0 * kPi;
    gap = std::max(gap, b - a);
  }
  rec.core_contains_point = n >= 2 && gap <= kPi + 1e-6;
  return rec;
}

std::vector<std::optional<MaximalDiskRecord>> maximal_disks(const DiskComplementDomain& dom,
                                                            std::span<const PointCP1> xs,
                                                            Exec exec, const Tolerances& tol) {
  std::vector<std::optional<MaximalDiskRecord>> out(xs.size());
  const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(dynamic, 16) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      out[static_cast<std::size_t>(i)] = maximal_disk_at(dom, xs[static_cast<std::size_t>(i)], tol);
    } catch (const Error&) {
    }
  }
  return out;
}

// --- stratification ---------------------------------------------------------------

bool cores_separated(const MaximalDiskRecord& a, const PointCP1& xa, const MaximalDiskRecord& b,
                     const PointCP1& xb, const Tolerances& tol) {
  // Frame in which disk a is the upper half-plane.
  const auto s = a.disk.boundary.sample_points();
  const Mobius to_uhp = mobius_from_triple(s[0], s[1], s[2]).inverse();
  const OrientedCircle cb = b.disk.boundary.transformed(to_uhp);

  // Real intersections of the boundary of b with R u {inf}.
  std::vector<PointCP1> meet;
  const double qa = cb.A(), qb = 2.0 * cb.B().real(), qc = cb.D();
  const double scale = std::abs(qa) + std::abs(qb) + std::abs(qc);
  if (std::abs(qa) <= 1e-14 * scale) {
    meet.push_back(PointCP1::infinity());
    if (std::abs(qb) > 1e-14 * scale) meet.push_back(PointCP1(-qc / qb));
  } else {
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc > 1e-14 * scale * scale) {
      const double r = std::sqrt(disc);
      const double q = -0.5 * (qb + (qb >= 0.0 ? r : -r));
      meet.push_back(PointCP1(q / qa));
      meet.push_back(PointCP1(qc / q));
    }
  }
  if (meet.size() < 2) {
    // Disjoint or tangent boundaries: the disks must not be nested.
    const cplx inner = cb.is_line() ? cplx(0.0) : cb.center();
    const bool b_in_a = cb.A() > 0.0 && inner.imag() > 0.0;
    const bool a_in_b = cb.A() < 0.0;
    return !(b_in_a || a_in_b);
  }

  // Shared contacts are exact intersections.
  for (const auto& c : a.ideal_points) {
    if (b.disk.boundary.chordal_distance(c) > tol.contact) continue;
    const PointCP1 w = to_uhp(c);
    const std::size_t k = chordal_distance(w, meet[0]) <= chordal_distance(w, meet[1]) ? 0 : 1;
    if (chordal_distance(w, meet[1 - k]) > tol.contact) meet[k] = w;
  }

  // Send the intersections to 0 and infinity.
  const PointCP1 p = meet[0].normalized(), q = meet[1].normalized();
  const Mobius pq = mobius_sending_zero_inf(p, q).inverse();
  const Mobius frame = pq * to_uhp;
  const cplx ua = inward_normal(a.disk.boundary.transformed(frame));
  const cplx ub = inward_normal(b.disk.boundary.transformed(frame));
  cplx dir = ua + ub;
  if (std::abs(dir) < 1e-9) dir = cplx(0.0, 1.0) * ua;
  const double sign_a = cross(dir, ua) > 0.0 ? 1.0 : -1.0;

  auto side_ok = [&](const PointCP1& pt, double want, bool strict) {
    const PointCP1 w = frame(pt);
    if (w.is_infinite(1e-9)) return true;
    const cplx z = w.value();
    if (std::abs(z) < 1e-9) return true;
    const double s = cross(dir, z) / (std::abs(dir) * std::abs(z));
    return strict ? want * s > 0.0 : want * s > -tol.geo;
  };
  for (const auto& pt : a.ideal_points)
    if (!side_ok(pt, sign_a, false)) return false;
  for (const auto& pt : b.ideal_points)
    if (!side_ok(pt, -sign_a, false)) return false;
  return side_ok(xa, sign_a, true) && side_ok(xb, -sign_a, true);
}

StratificationResult stratification_check(const DiskComplementDomain& dom,
                                          std::span<const PointCP1> samples, Exec exec,
                                          const Tolerances& tol) {
  StratificationResult res;
  const auto recs = maximal_disks(dom, samples, exec, tol);
  std::size_t missing = 0, outside = 0;
  std::vector<std::size_t> rep;  // representative sample per class
  res.stratum.assign(samples.size(), static_cast<std::size_t>(-1));
  std::size_t mismatched = 0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!recs[i]) {
      ++missing;
      res.report.violations.push_back("sample " + std::to_string(i) + " received no maximal disk");
      continue;
    }
    const auto& r = *recs[i];
    if (!r.core_contains_point) {
      ++outside;
      res.report.violations.push_back("sample " + std::to_string(i) + " is not in its core");
    }
    std::size_t cls = res.classes.size();
    for (std::size_t c = 0; c < res.classes.size(); ++c)
      if (res.classes[c].disk.boundary.distance(r.disk.boundary) < tol.contact) {
        cls = c;
        break;
      }
    if (cls == res.classes.size()) {
      res.classes.push_back(r);
      rep.push_back(i);
    } else {
      const auto& base = res.classes[cls].ideal_points;
      bool same = base.size() == r.ideal_points.size();
      for (std::size_t k = 0; same && k < base.size(); ++k) {
        bool found = false;
        for (const auto& p : r.ideal_points) found |= same_point(base[k], p, tol.geo);
        same = found;
      }
      if (!same) {
        ++mismatched;
        res.report.violations.push_back("sample " + std::to_string(i) +
                                        " shares a disk but not its ideal points");
      }
    }
    res.stratum[i] = cls;
  }

  std::size_t overlaps = 0;
  const std::size_t nc = res.classes.size();
  for (std::size_t a = 0; a < nc; ++a)
    for (std::size_t b = a + 1; b < nc; ++b)
      if (!cores_separated(res.classes[a], samples[rep[a]], res.classes[b], samples[rep[b]], tol)) {
        ++overlaps;
        res.report.violations.push_back("cores of strata " + std::to_string(a) + " and " +
                                        std::to_string(b) + " are not separated");
      }

  res.report.checks.push_back({"every sample has a maximal disk", missing == 0, ""});
  res.report.checks.push_back({"every sample lies in its core", outside == 0, ""});
  res.report.checks.push_back({"equal disks have equal ideal points", mismatched == 0, ""});
  res.report.checks.push_back({"cores pairwise disjoint", overlaps == 0, ""});
  res.report.value("samples", static_cast<double>(samples.size()));
  res.report.value("strata", static_cast<double>(nc));
  res.report.value("core_overlaps", static_cast<double>(overlaps));
  return res;
}

// --- transverse measure -------------------------------------------------------------

TransverseMeasure transverse_measure(const DiskComplementDomain& dom, std::span<const cplx> path,
                                     int max_levels, int initial_steps, const Tolerances& tol) {
  if (path.size() < 2) fail(ErrorKind::DegenerateInput, "transverse_measure: path needs two points");
  if (initial_steps < 1) initial_steps = 1;
  std::vector<double> arc{0.0};
  for (std::size_t i = 1; i < path.size(); ++i) arc.push_back(arc.back() + std::abs(path[i] - path[i - 1]));
  if (!(arc.back() > 0.0)) fail(ErrorKind::DegenerateInput, "transverse_measure: path has zero length");
  auto at = [&](double t) {
    const double s = t * arc.back();
    std::size_t k = static_cast<std::size_t>(std::upper_bound(arc.begin(), arc.end(), s) - arc.begin());
    k = std::clamp<std::size_t>(k, 1, path.size() - 1);
    const double len = arc[k] - arc[k - 1];
    const double u = len > 0.0 ? (s - arc[k - 1]) / len : 0.0;
    return path[k - 1] + u * (path[k] - path[k - 1]);
  };

  TransverseMeasure out;
  std::vector<RoundDisk> disks;
  bool last_valid = false;
  for (int level = 0; level <= max_levels; ++level) {
    const int n = initial_steps << level;
    std::vector<RoundDisk> next(static_cast<std::size_t>(n) + 1);
    for (int i = 0; i <= n; ++i)
      if (level > 0 && i % 2 == 0) next[static_cast<std::size_t>(i)] = disks[static_cast<std::size_t>(i / 2)];
    std::vector<char> fresh(static_cast<std::size_t>(n) + 1, 0);
    for (int i = 0; i <= n; ++i) fresh[static_cast<std::size_t>(i)] = level == 0 || i % 2 == 1;
#pragma omp parallel for schedule(dynamic, 64) if (n >= 256)
    for (int i = 0; i <= n; ++i)
      if (fresh[static_cast<std::size_t>(i)])
        next[static_cast<std::size_t>(i)] =
            maximal_disk_at(dom, PointCP1(at(static_cast<double>(i) / n)), tol).disk;
    disks = std::move(next);

    double theta = 0.0;
    bool valid = true;
    for (int i = 0; i < n && valid; ++i) {
      try {
        theta += angle_between(disks[static_cast<std::size_t>(i)].boundary,
                               disks[static_cast<std::size_t>(i) + 1].boundary, tol);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::NoIntersection) throw;
        valid = false;
      }
    }
    out.trace.push_back(valid ? theta : std::nan(""));
    out.steps.push_back(n);
    if (valid) out.value = theta;
    if (valid && last_valid && level >= 3) {
      const std::size_t k = out.trace.size();
      if (std::abs(out.trace[k - 1] - out.trace[k - 2]) < tol.measure) {
        out.converged = true;
        return out;
      }
    }
    last_valid = valid;
  }
  if (!last_valid)
    fail(ErrorKind::Numeric,
         "transverse_measure: consecutive maximal disks still disjoint at the finest level; "
         "the path is not transversal");
  return out;
}

std::vector<cplx> dome_edge_transversal(const DomeMesh& mesh, const DomeEdge& edge, int n,
                                        double overshoot) {
  if (n < 1) fail(ErrorKind::Domain, "dome_edge_transversal: need at least one step");
  const Mobius f = mobius_sending_zero_inf(mesh.vertices[edge.v0], mesh.vertices[edge.v1]).inverse();
  const Mobius fi = f.inverse();
  const cplx u0 = inward_normal(mesh.faces[edge.f0].plane.boundary.transformed(f));
  const cplx u1 = inward_normal(mesh.faces[edge.f1].plane.boundary.transformed(f));
  const double a0 = std::arg(u0);
  const double a1 = a0 + std::remainder(std::arg(u1) - a0, 2.0 * kPi);
  const double dir = a1 > a0 ? 1.0 : -1.0;
  const double from = a0 - dir * overshoot, to = a1 + dir * overshoot;
  double rho = 1.0;
  const PointCP1 pole = f(PointCP1::infinity());
  if (!pole.is_infinite()) {
    const double lr = std::log(std::abs(pole.value()));
    if (std::abs(lr) < 0.5) rho = std::exp(lr >= 0.0 ? lr - 1.0 : lr + 1.0);
  }
  std::vector<cplx> path;
  for (int k = 0; k <= n; ++k) {
    const PointCP1 w = fi(PointCP1(std::polar(rho, from + (to - from) * k / n)));
    if (w.is_infinite()) fail(ErrorKind::Domain, "dome_edge_transversal: arc passes through infinity");
    path.push_back(w.value());
  }
  return path;
}

PointH3 projection_psi(const DiskComplementDomain& dom, const PointCP1& x, const Tolerances& tol) {
  const MaximalDiskRecord rec = maximal_disk_at(dom, x, tol);
  return nearest_point_projection(PlaneH3{rec.disk.boundary}, x, tol);
}

// --- grafted structures ---------------------------------------------------------

RecoveredWeight recover_weight_from_grafted(const GraftedStructure& gs, const GroupWord& curve) {
  const auto& entries = gs.multicurve().entries;
  std::size_t entry = entries.size();
  for (std::size_t e = 0; e < entries.size(); ++e)
    if (entries[e].word == curve || entries[e].word == curve.inverse()) entry = e;
  if (entry == entries.size())
    fail(ErrorKind::Precondition, "recover_weight: '" + curve.str() + "' is not in the multicurve");

  const auto& leaves = gs.atlas().leaves;
  const cplx x0 = gs.basepoint();
  std::size_t best = leaves.size();
  double best_d = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < leaves.size(); ++k) {
    if (leaves[k].curve != entry) continue;
    const cplx w = leaves[k].frame.inverse()(PointCP1(x0)).value();
    const double d = std::asinh(std::abs(w.real()) / w.imag());
    if (d < best_d) {
      best_d = d;
      best = k;
    }
  }
  if (best == leaves.size())
    fail(ErrorKind::Numeric, "recover_weight: no lift of '" + curve.str() + "' in the leaf atlas");

  const LiftedLeaf& leaf = leaves[best];
  const double rho = std::abs(leaf.frame.inverse()(PointCP1(x0)).value());
  GraftedPath path;
  for (double eps = 1e-2; eps > 1e-9; eps /= 2.0) {
    const cplx p = leaf.frame(PointCP1(std::polar(rho, kPi / 2 - eps))).value();
    const cplx q = leaf.frame(PointCP1(std::polar(rho, kPi / 2 + eps))).value();
    const auto c = gs.crossings(p, q);
    if (c.size() == 1 && c[0].leaf == best) {
      path.vertices = {p, q};
      break;
    }
  }
  if (path.vertices.empty())
    fail(ErrorKind::Numeric, "recover_weight: no transversal crossing a single leaf");

  const DevelopResult dev = develop_and_lift(gs, path, 0.05);
  if (!dev.success) fail(ErrorKind::LiftFailure, "recover_weight: " + dev.failure);
  RecoveredWeight out;
  out.leaf = best;
  for (std::size_t i = 0; i + 1 < dev.samples.size(); ++i)
    out.value += angle_between(gs.maximal_disk(dev.samples[i].point).boundary,
                               gs.maximal_disk(dev.samples[i + 1].point).boundary, gs.options().tol);
  out.two_pi_multiple = std::lround(out.value / (2.0 * kPi));
  out.two_pi_residual = std::abs(out.value - 2.0 * kPi * static_cast<double>(out.two_pi_multiple));
  return out;
}

CoveringResult verify_covering(const GraftedStructure& gs,
                               const std::vector<std::vector<PointCP1>>& loops,
                               const CoveringOptions& opt) {
  const auto limit = limit_set_sample(gs.holonomy(), opt.limit_depth, gs.options().exec);
  for (std::size_t l = 0; l < loops.size(); ++l) {
    if (loops[l].size() < 3) fail(ErrorKind::Precondition, "verify_covering: loop with fewer than 3 points");
    const std::size_t n = loops[l].size();
    for (std::size_t i = 0; i < n; ++i) {
      const PointCP1& a = loops[l][i];
      const PointCP1& b = loops[l][(i + 1) % n];
      for (const PointCP1& s : limit) {
        if (chordal_distance(a, s) < opt.margin ||
            (!a.is_infinite() && !b.is_infinite() &&
             chordal_distance(PointCP1(0.5 * (a.value() + b.value())), s) < opt.margin))
          fail(ErrorKind::Precondition, "verify_covering: loop " + std::to_string(l) +
                                            " enters the limit-set margin");
      }
    }
  }

  const double start_radius = opt.start_radius > 0.0 ? opt.start_radius : gs.atlas().radius - 1.0;
  struct PerLoop {
    std::size_t lifts = 0, failures = 0;
    double closure = 0.0, embed = std::numeric_limits<double>::infinity();
    std::vector<std::string> messages;
  };
  std::vector<PerLoop> per(loops.size());
  const auto nl = static_cast<std::ptrdiff_t>(loops.size());
#pragma omp parallel for schedule(dynamic) if (gs.options().exec == Exec::Parallel)
  for (std::ptrdiff_t li = 0; li < nl; ++li) {
    const auto& loop = loops[static_cast<std::size_t>(li)];
    PerLoop& r = per[static_cast<std::size_t>(li)];
    std::vector<PointCP1> rest(loop.begin() + 1, loop.end());
    rest.push_back(loop.front());
    for (const GraftedPoint& start : preimages(gs, loop.front())) {
      if (h2_distance(gs.collapse(start), gs.basepoint()) > start_radius) continue;
      ++r.lifts;
      const DevelopResult res = lift_path(gs, start, rest);
      if (!res.success) {
        ++r.failures;
        r.messages.push_back("loop " + std::to_string(li) + ": " + res.failure);
        continue;
      }
      double err;
      if (res.end.leaf != start.leaf) err = std::numeric_limits<double>::infinity();
      else if (start.in_crescent()) err = std::max(std::abs(res.end.x - start.x), std::abs(res.end.y - start.y));
      else err = std::abs(res.end.z - start.z);
      r.closure = std::max(r.closure, err);
      if (!(err < opt.closure_tol)) {
        ++r.failures;
        r.messages.push_back("loop " + std::to_string(li) + ": lift does not close (error " +
                             std::to_string(err) + ")");
      }
      for (const PathSample& s : res.samples)
        r.embed = std::min(r.embed, gs.maximal_disk(s.point).boundary.chordal_distance(s.image));
    }
  }

  CoveringResult out;
  out.loops = loops.size();
  out.min_embedding_radius = std::numeric_limits<double>::infinity();
  for (const PerLoop& r : per) {
    out.lifts += r.lifts;
    out.failures += r.failures;
    out.max_closure_error = std::max(out.max_closure_error, r.closure);
    out.min_embedding_radius = std::min(out.min_embedding_radius, r.embed);
    out.report.violations.insert(out.report.violations.end(), r.messages.begin(), r.messages.end());
  }
  out.report.checks.push_back({"every lift continues along its loop", out.failures == 0, ""});
  out.report.checks.push_back({"lifts close up", out.max_closure_error < opt.closure_tol, ""});
  out.report.check("embedding radius positive", out.min_embedding_radius > 0.0);
  out.report.check("some lift started", out.lifts > 0);
  out.report.value("loops", static_cast<double>(out.loops));
  out.report.value("lifts", static_cast<double>(out.lifts));
  out.report.value("failures", static_cast<double>(out.failures));
  out.report.value("max_closure_error", out.max_closure_error);
  out.report.value("min_embedding_radius", out.min_embedding_radius);
  return out;
}

std::vector<std::vector<PointCP1>> random_loops_off_limit_set(const std::vector<PointCP1>& limit_set,
                                                              std::size_t count, double margin,
                                                              std::uint64_t seed, int vertices) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> re(-2.0, 2.0), im(0.15, 1.5), rad(0.05, 0.35), coin(0.0, 1.0);
  std::vector<std::vector<PointCP1>> out;
  for (int attempt = 0; out.size() < count && attempt < 100000; ++attempt) {
    const double y = im(rng) * (coin(rng) < 0.5 ? 1.0 : -1.0);
    const cplx c(re(rng), y);
    const double r = rad(rng) * std::abs(y);
    std::vector<PointCP1> loop;
    bool ok = true;
    for (int k = 0; k < vertices && ok; ++k) {
      const PointCP1 p(c + std::polar(r, 2.0 * kPi * k / vertices));
      for (const PointCP1& s : limit_set)
        if (chordal_distance(p, s) < margin * 1.2) {
          ok = false;
          break;
        }
      loop.push_back(p);
    }
    if (ok) out.push_back(std::move(loop));
  }
  return out;
}

}  // namespace cp1
