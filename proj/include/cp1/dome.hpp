#pragma once

// Boundary of the hyperbolic convex hull of a finite ideal set: a pleated
// plane whose faces are ideal polygons and whose edges carry bending angles.

#include <span>
#include <vector>

#include "cp1/hyperbolic.hpp"

namespace cp1 {

struct DomeFace {
  /// Vertex indices in positive cyclic order as seen from the empty cap.
  std::vector<std::size_t> vertices;
  /// Support plane; its boundary disk is the cap of CP^1 free of ideal points.
  PlaneH3 plane;
};

struct DomeEdge {
  std::size_t v0 = 0, v1 = 0;
  std::size_t f0 = 0, f1 = 0;
  /// Exterior dihedral angle, in (0, pi).
  double weight = 0.0;
  GeodesicH3 geodesic;
};

struct DomeMesh {
  std::vector<PointCP1> vertices;
  std::vector<DomeFace> faces;
  std::vector<DomeEdge> edges;
};

/// Dome over at least three distinct ideal points. A concircular set gives a
/// single flat face and no edges; coplanar hull triangles are merged.
DomeMesh dome(std::span<const PointCP1> ideal_points, const Tolerances& tol = default_tolerances());

/// True when the four points lie on one round circle (real cross-ratio).
bool concircular(const PointCP1& a, const PointCP1& b, const PointCP1& c, const PointCP1& d,
                 double tol);

}  // namespace cp1
