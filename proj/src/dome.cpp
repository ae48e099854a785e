#include "cp1/dome.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <numeric>
#include <utility>

#include "cp1/errors.hpp"

namespace cp1 {

bool concircular(const PointCP1& a, const PointCP1& b, const PointCP1& c, const PointCP1& d,
                 double tol) {
  const cplx cr = cross_ratio(a, b, c, d);
  if (!std::isfinite(cr.real()) || !std::isfinite(cr.imag())) return true;
  return std::abs(cr.imag()) < tol * std::max(1.0, std::abs(cr));
}

namespace {

using Tri = std::array<std::size_t, 3>;

double orient(const std::vector<Vec3>& s, std::size_t a, std::size_t b, std::size_t c,
              std::size_t p) {
  return (s[b] - s[a]).cross(s[c] - s[a]).dot(s[p] - s[a]);
}

// Incremental hull of points on the unit sphere; faces are outward-oriented
// triangles. Points are inserted in the given order.
std::vector<Tri> sphere_hull(const std::vector<Vec3>& s, const std::vector<std::size_t>& order,
                             std::size_t i3_pos, double eps) {
  const std::size_t i0 = order[0], i1 = order[1], i2 = order[2], i3 = order[i3_pos];
  std::vector<Tri> faces;
  if (orient(s, i0, i1, i2, i3) > 0.0)
    faces = {{i0, i2, i1}, {i0, i1, i3}, {i1, i2, i3}, {i2, i0, i3}};
  else
    faces = {{i0, i1, i2}, {i0, i3, i1}, {i1, i3, i2}, {i2, i3, i0}};

  for (std::size_t k = 3; k < order.size(); ++k) {
    if (k == i3_pos) continue;
    const std::size_t p = order[k];
    std::vector<char> visible(faces.size(), 0);
    bool any = false;
    for (std::size_t f = 0; f < faces.size(); ++f) {
      if (orient(s, faces[f][0], faces[f][1], faces[f][2], p) > eps) {
        visible[f] = 1;
        any = true;
      }
    }
    if (!any) fail(ErrorKind::Numeric, "dome: point not separated from the partial hull");

    std::map<std::pair<std::size_t, std::size_t>, int> directed;
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (visible[f])
        for (int e = 0; e < 3; ++e) directed[{faces[f][e], faces[f][(e + 1) % 3]}] = 1;

    std::vector<Tri> next;
    next.reserve(faces.size() + 8);
    for (std::size_t f = 0; f < faces.size(); ++f)
      if (!visible[f]) next.push_back(faces[f]);
    for (const auto& [edge, unused] : directed)
      if (!directed.count({edge.second, edge.first})) next.push_back({edge.first, edge.second, p});
    faces = std::move(next);
  }
  return faces;
}

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t x) {
  while (parent[x] != x) x = parent[x] = parent[parent[x]];
  return x;
}

// Orders the vertices of a concircular set along their common circle.
std::vector<std::size_t> circle_order(std::span<const PointCP1> pts, const OrientedCircle& c) {
  const auto samples = c.sample_points();
  const Mobius to_line = mobius_from_triple(samples[0], samples[1], samples[2]).inverse();
  std::vector<std::pair<double, std::size_t>> keyed;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const PointCP1 y = to_line.apply(pts[i]);
    const double key = y.is_infinite() ? 1e300 : y.value().real();
    keyed.push_back({key, i});
  }
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::size_t> out;
  for (const auto& k : keyed) out.push_back(k.second);
  return out;
}

}  // namespace

DomeMesh dome(std::span<const PointCP1> ideal_points, const Tolerances& tol) {
  const std::size_t n = ideal_points.size();
  if (n < 3) fail(ErrorKind::DegenerateInput, "dome: need at least three ideal points");
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (same_point(ideal_points[i], ideal_points[j], tol.geo))
        fail(ErrorKind::DegenerateInput, "dome: coincident ideal points");

  DomeMesh mesh;
  mesh.vertices.assign(ideal_points.begin(), ideal_points.end());

  std::vector<Vec3> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = to_sphere(ideal_points[i]);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::tie(s[a].x, s[a].y, s[a].z) < std::tie(s[b].x, s[b].y, s[b].z);
  });

  std::size_t i3_pos = 0;
  for (std::size_t k = 3; k < n; ++k) {
    if (!concircular(ideal_points[order[0]], ideal_points[order[1]], ideal_points[order[2]],
                     ideal_points[order[k]], tol.geo)) {
      i3_pos = k;
      break;
    }
  }

  if (i3_pos == 0) {
    const OrientedCircle c =
        circle_through(ideal_points[order[0]], ideal_points[order[1]], ideal_points[order[2]], tol);
    mesh.faces.push_back({circle_order(ideal_points, c), PlaneH3{c}});
    return mesh;
  }

  const std::vector<Tri> tris = sphere_hull(s, order, i3_pos, 1e-3 * tol.geo);

  // Adjacency by directed edge, then merge concircular neighbours.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> owner;
  for (std::size_t f = 0; f < tris.size(); ++f)
    for (int e = 0; e < 3; ++e) owner[{tris[f][e], tris[f][(e + 1) % 3]}] = f;

  std::vector<std::size_t> parent(tris.size());
  std::iota(parent.begin(), parent.end(), 0);
  for (const auto& [edge, f] : owner) {
    const auto it = owner.find({edge.second, edge.first});
    if (it == owner.end()) fail(ErrorKind::Numeric, "dome: hull is not closed");
    const std::size_t g = it->second;
    if (g < f) continue;
    std::size_t c = 0, d = 0;
    for (std::size_t v : tris[f])
      if (v != edge.first && v != edge.second) c = v;
    for (std::size_t v : tris[g])
      if (v != edge.first && v != edge.second) d = v;
    if (concircular(ideal_points[edge.first], ideal_points[edge.second], ideal_points[c],
                    ideal_points[d], tol.geo))
      parent[find_root(parent, f)] = find_root(parent, g);
  }

  std::map<std::size_t, std::size_t> group_index;
  std::vector<std::size_t> tri_group(tris.size());
  for (std::size_t f = 0; f < tris.size(); ++f) {
    const std::size_t r = find_root(parent, f);
    auto [it, inserted] = group_index.try_emplace(r, group_index.size());
    tri_group[f] = it->second;
  }

  // Boundary cycle of each merged face.
  std::vector<std::map<std::size_t, std::size_t>> next_vertex(group_index.size());
  for (const auto& [edge, f] : owner) {
    const std::size_t g = owner.at({edge.second, edge.first});
    if (tri_group[f] != tri_group[g]) next_vertex[tri_group[f]][edge.first] = edge.second;
  }
  mesh.faces.resize(group_index.size());
  for (std::size_t k = 0; k < next_vertex.size(); ++k) {
    const auto& nx = next_vertex[k];
    // Start from the smallest index so face listings are canonical.
    std::size_t start = nx.begin()->first;
    std::vector<std::size_t> cycle{start};
    for (std::size_t v = nx.at(start); v != start; v = nx.at(v)) {
      cycle.push_back(v);
      if (cycle.size() > n) fail(ErrorKind::Numeric, "dome: broken face boundary");
    }
    OrientedCircle c = circle_through(ideal_points[cycle[0]], ideal_points[cycle[1]],
                                      ideal_points[cycle[2]], tol);
    for (std::size_t v = 0; v < n; ++v) {
      if (std::find(cycle.begin(), cycle.end(), v) != cycle.end()) continue;
      if (c.contains(ideal_points[v])) c = c.flipped();
      break;
    }
    mesh.faces[k] = {std::move(cycle), PlaneH3{c}};
  }

  // Bending edges between distinct merged faces, one per unordered pair.
  for (const auto& [edge, f] : owner) {
    if (edge.first > edge.second) continue;
    const std::size_t g = owner.at({edge.second, edge.first});
    const std::size_t fa = tri_group[f], fb = tri_group[g];
    if (fa == fb) continue;
    DomeEdge e;
    e.v0 = edge.first;
    e.v1 = edge.second;
    e.f0 = fa;
    e.f1 = fb;
    e.weight = angle_between(mesh.faces[fa].plane.boundary, mesh.faces[fb].plane.boundary, tol);
    e.geodesic = {ideal_points[e.v0], ideal_points[e.v1]};
    mesh.edges.push_back(e);
  }
  return mesh;
}

}  // namespace cp1
