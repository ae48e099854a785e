#pragma once

// Grafting a Fuchsian structure along a weighted multicurve: lifted leaves,
// the bending cocycle and deformed holonomy, crescent charts, the pleated
// surface and continuation of paths through the grafted structure.

#include <cstdint>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "cp1/surface_group.hpp"

namespace cp1 {

/// Non-negative angle. Rational multiples of pi are kept exactly so that
/// 2 pi-multiplicity can be decided without rounding.
struct Weight {
  double value = 0.0;  // radians
  bool exact = false;  // value == pi * num / den
  std::int64_t num = 0, den = 1;

  static Weight radians(double r);
  static Weight pi_fraction(std::int64_t num, std::int64_t den);

  /// Multiple of 2 pi: exact test when available, else within tol.
  bool two_pi_multiple(double tol) const;
  std::string str() const;
};

struct WeightedMulticurve {
  struct Entry {
    GroupWord word;
    Weight weight;
  };
  std::vector<Entry> entries;
};

/// A lift w * axis(rho(gamma)) in H^2. The geodesic is oriented so that the
/// basepoint lies on its right; frame is the real map sending 0 -> tail,
/// infinity -> head and the positive imaginary axis onto the leaf.
struct LiftedLeaf {
  GeodesicH3 geodesic;
  double weight = 0.0;
  GroupWord word;
  std::size_t curve = 0;  // multicurve entry
  Mobius frame;
};

struct LeafAtlas {
  cplx center;
  double radius = 0.0;
  int depth = 0;
  std::vector<LiftedLeaf> leaves;
};

struct GraftOptions {
  int depth = 8;
  /// Hyperbolic radius of the leaf atlas around the basepoint; 0 picks the
  /// smallest radius that covers the generator segments.
  double atlas_radius = 0.0;
  Exec exec = Exec::Parallel;
  Tolerances tol = default_tolerances();
};

/// A leaf crossed by a segment of H^2.
struct Crossing {
  std::size_t leaf = 0;  // atlas index
  cplx point;            // intersection with the segment
  double distance = 0;   // from the segment start
  bool outward = true;   // crossing from the basepoint side to the far side
};

/// Point of the grafted surface's universal cover: a stratum point of H^2
/// or a crescent point (x, y) on the crescent inserted along an atlas leaf.
struct GraftedPoint {
  static constexpr std::size_t kStratum = static_cast<std::size_t>(-1);

  std::size_t leaf = kStratum;
  cplx z;  // stratum point
  double x = 0.0, y = 0.0;

  bool in_crescent() const { return leaf != kStratum; }
  static GraftedPoint stratum(cplx z) { return {kStratum, z, 0.0, 0.0}; }
  static GraftedPoint crescent(std::size_t leaf, double x, double y) {
    return {leaf, cplx(0.0), x, y};
  }
};

class GraftedStructure {
 public:
  GraftedStructure(FuchsianHolonomy base, WeightedMulticurve mc, GraftOptions opt = {});

  const FuchsianHolonomy& base() const { return base_; }
  const WeightedMulticurve& multicurve() const { return mc_; }
  const GraftOptions& options() const { return opt_; }
  const LeafAtlas& atlas() const { return atlas_; }

  /// Basepoint used for the cocycle; moved off the leaves when needed.
  cplx basepoint() const { return x0_; }
  bool basepoint_perturbed() const { return perturbed_; }

  /// Deformed holonomy rho'(g) = B(x0, rho(g) x0) rho(g); computed once.
  const Holonomy& holonomy() const;

  /// Atlas leaves crossing the segment [p, q], ordered from p to q.
  std::vector<Crossing> crossings(cplx p, cplx q) const;
  /// Bending cocycle B(p, q): the product of rotations along the crossings.
  Mobius bending(cplx p, cplx q) const;
  /// Rotation by the leaf weight about the leaf in its atlas orientation.
  Mobius leaf_rotation(std::size_t leaf, double angle) const;
  /// B(x0, z); the chart of the stratum containing z.
  Mobius stratum_chart(cplx z) const;
  /// Chart of the side of the leaf containing the basepoint.
  Mobius near_chart(std::size_t leaf) const;

  /// Developing map.
  PointCP1 develop(const GraftedPoint& p) const;
  /// Maximal disk through p (the disk whose core contains p).
  RoundDisk maximal_disk(const GraftedPoint& p) const;
  /// Collapsing map to H^2.
  cplx collapse(const GraftedPoint& p) const;
  /// Pleated surface beta on H^2.
  PointH3 pleat(cplx z) const;

  /// Throws Precondition when z is within tol.geo of an atlas leaf.
  void require_off_leaves(cplx z, const char* what) const;
  /// Hyperbolic distance from z to the nearest atlas leaf.
  double leaf_distance(cplx z) const;

 private:
  FuchsianHolonomy base_;
  WeightedMulticurve mc_;
  GraftOptions opt_;
  LeafAtlas atlas_;
  cplx x0_;
  bool perturbed_ = false;
  std::vector<Mobius> near_charts_;

  mutable std::once_flag holonomy_once_;
  mutable std::unique_ptr<Holonomy> holonomy_;
};

/// Leaves of the multicurve lifted by all words of length <= depth that meet
/// the disk of the given radius around center. Throws Precondition when a
/// curve is not hyperbolic or two lifts cross.
LeafAtlas build_leaf_atlas(const Holonomy& rho, const WeightedMulticurve& mc, int depth,
                           cplx center, double radius, Exec exec = Exec::Parallel,
                           const Tolerances& tol = default_tolerances());

/// Crescent chart R_theta -> CP^1, (x, y) -> exp(x + iy).
PointCP1 crescent_develop(double theta, double x, double y);

/// Lifted leaves crossing [p, q], ordered along the segment.
std::vector<LiftedLeaf> lift_crossings(const FuchsianHolonomy& rho, const WeightedMulticurve& mc,
                                       cplx p, cplx q, int depth,
                                       const Tolerances& tol = default_tolerances());

Holonomy grafted_holonomy(const FuchsianHolonomy& rho, const WeightedMulticurve& mc,
                          int depth = 8);

// --- pleated surface -----------------------------------------------------------

struct PleatFace {
  std::vector<cplx> polygon;  // truncated stratum in H^2, convex in the Klein model
  Mobius isometry;            // bending chart of the stratum
  PlaneH3 plane;              // image of the vertical plane over R
};

struct PleatEdge {
  std::size_t f0 = 0, f1 = 0;
  std::size_t leaf = 0;
  double weight = 0.0;
  GeodesicH3 image;  // the bending line in H^3
  cplx a, b;         // segment of the leaf shared by the faces, in H^2
};

struct PleatedSurfaceMesh {
  cplx center;
  double radius = 0.0;
  std::vector<PleatFace> faces;
  std::vector<PleatEdge> edges;
};

/// Strata within hyperbolic distance r0 of the basepoint, each mapped into
/// H^3 by its bending chart. The ball boundary is approximated by a regular
/// polygon with `sides` vertices.
PleatedSurfaceMesh pleated_surface(const GraftedStructure& gs, double r0, int sides = 96);

// --- paths ------------------------------------------------------------------------

/// Path in the grafted surface: a polyline in H^2 whose leaf crossings run
/// through the crescents. wraps[i], when given, is the number of full turns
/// made inside the i-th crossed crescent; the path climbs 2 pi wraps[i] plus
/// the fractional part of the weight, so only wraps[i] = floor(theta / 2 pi)
/// reaches the far side.
struct GraftedPath {
  std::vector<cplx> vertices;
  std::vector<int> wraps;
};

struct PathSample {
  GraftedPoint point;
  PointCP1 image;
};

struct DevelopResult {
  bool success = true;
  std::string failure;
  std::vector<PathSample> samples;
  PointCP1 endpoint;
  GraftedPoint end;
};

/// Continues the developing map along the path.
DevelopResult develop_and_lift(const GraftedStructure& gs, const GraftedPath& path,
                               double max_crescent_step = 0.2);

/// Lifts a polyline of CP^1 through the developing map starting at `start`.
/// Fails when the lift leaves the crescent charts or the atlas.
DevelopResult lift_path(const GraftedStructure& gs, const GraftedPoint& start,
                        const std::vector<PointCP1>& path);

/// Every lift of x to the grafted cover that lies in the atlas: the stratum
/// preimage (if any) and one crescent preimage per atlas leaf.
std::vector<GraftedPoint> preimages(const GraftedStructure& gs, const PointCP1& x);

/// Same chart and coordinates within tol.
bool same_grafted_point(const GraftedPoint& a, const GraftedPoint& b, double tol);

}  // namespace cp1
