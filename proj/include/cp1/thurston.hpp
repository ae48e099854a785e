#pragma once

// Maximal disks of a disk-complement domain, the stratification by cores,
// the transverse measure of the bending lamination and the projection Psi;
// weight recovery and covering checks for grafted structures.

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cp1/dome.hpp"
#include "cp1/grafting.hpp"
#include "cp1/hyperbolic.hpp"
#include "cp1/parallel.hpp"
#include "cp1/report.hpp"

namespace cp1 {

/// U = CP^1 minus a finite ideal set, or minus a compact convex polygon of C.
class DiskComplementDomain {
 public:
  enum class Kind { IdealSet, Polygon };

  static DiskComplementDomain ideal_set(std::vector<PointCP1> points);
  /// Vertices of a convex polygon in either cyclic order.
  static DiskComplementDomain polygon(std::vector<cplx> vertices);

  Kind kind() const { return kind_; }
  const std::vector<PointCP1>& points() const { return points_; }
  const std::vector<cplx>& vertices() const { return vertices_; }

  /// Chordal distance from x to the complement.
  double distance_to_complement(const PointCP1& x) const;

 private:
  Kind kind_ = Kind::IdealSet;
  std::vector<PointCP1> points_;
  std::vector<cplx> vertices_;
};

struct MaximalDiskRecord {
  RoundDisk disk;
  /// Contact points of the complement with the boundary circle.
  std::vector<PointCP1> ideal_points;
  /// Index of each ideal point in the ideal set, or the polygon vertex/sample
  /// it came from.
  std::vector<std::size_t> ideal_indices;
  /// Boundary geodesics of the core, between consecutive ideal points.
  std::vector<GeodesicH3> core;
  /// Normalisation x -> infinity and the enclosing disk of the image of the complement.
  Mobius normalization;
  cplx enclosing_center;
  double enclosing_radius = 0.0;
  /// The enclosing center lies in the hull of the contacts.
  bool core_contains_point = true;
};

MaximalDiskRecord maximal_disk_at(const DiskComplementDomain& dom, const PointCP1& x,
                                  const Tolerances& tol = default_tolerances());

/// Batch form; entries are empty where maximal_disk_at threw.
std::vector<std::optional<MaximalDiskRecord>> maximal_disks(const DiskComplementDomain& dom,
                                                            std::span<const PointCP1> xs,
                                                            Exec exec = Exec::Parallel,
                                                            const Tolerances& tol = default_tolerances());

/// Whether the cores of two maximal disks, each with a point known to lie in
/// its core, sit on opposite sides of the circle bisecting the lens.
bool cores_separated(const MaximalDiskRecord& a, const PointCP1& xa, const MaximalDiskRecord& b,
                     const PointCP1& xb, const Tolerances& tol = default_tolerances());

struct StratificationResult {
  Report report;
  std::vector<std::size_t> stratum;  // class index per sample
  std::vector<MaximalDiskRecord> classes;
};

StratificationResult stratification_check(const DiskComplementDomain& dom,
                                          std::span<const PointCP1> samples,
                                          Exec exec = Exec::Parallel,
                                          const Tolerances& tol = default_tolerances());

struct TransverseMeasure {
  double value = 0.0;
  std::vector<double> trace;   // Theta at each dyadic level
  std::vector<int> steps;      // subintervals at each level
  bool converged = false;
};

/// Theta of dyadic subdivisions of the polyline; starts from `initial_steps`
/// subintervals and doubles up to max_levels times.
TransverseMeasure transverse_measure(const DiskComplementDomain& dom, std::span<const cplx> path,
                                     int max_levels = 16, int initial_steps = 8,
                                     const Tolerances& tol = default_tolerances());

/// Arc crossing one dome edge: in the frame sending the edge to 0 -> infinity
/// it runs along a circle about 0 from just inside face f0 to just inside f1.
std::vector<cplx> dome_edge_transversal(const DomeMesh& mesh, const DomeEdge& edge, int n = 64,
                                        double overshoot = 1e-3);

PointH3 projection_psi(const DiskComplementDomain& dom, const PointCP1& x,
                       const Tolerances& tol = default_tolerances());

// --- grafted structures ---------------------------------------------------------

struct RecoveredWeight {
  double value = 0.0;
  /// Multiple of 2 pi nearest to value, and the distance to it.
  long two_pi_multiple = 0;
  double two_pi_residual = 0.0;
  std::size_t leaf = 0;  // atlas leaf crossed by the transversal
};

/// Sums the angles between successive maximal disks along a short transversal
/// through the crescent of the curve's lift nearest the basepoint.
RecoveredWeight recover_weight_from_grafted(const GraftedStructure& gs, const GroupWord& curve);

struct CoveringOptions {
  double margin = 0.05;      // chordal distance from loops to limit-set samples
  int limit_depth = 6;
  double closure_tol = 1e-6;
  /// Lifts start within this distance of the basepoint after collapsing;
  /// 0 uses the atlas radius minus one.
  double start_radius = 0.0;
};

struct CoveringResult {
  Report report;
  std::size_t loops = 0, lifts = 0, failures = 0;
  double max_closure_error = 0.0;
  double min_embedding_radius = 0.0;
};

/// Lifts every loop from each of its starting lifts and checks that the
/// lifts close up. Throws Precondition when a loop violates the margin.
CoveringResult verify_covering(const GraftedStructure& gs,
                               const std::vector<std::vector<PointCP1>>& loops,
                               const CoveringOptions& opt = {});

/// Closed circular loops of n vertices at random centres in the upper and
/// lower half-planes, keeping only those that respect the margin.
std::vector<std::vector<PointCP1>> random_loops_off_limit_set(
    const std::vector<PointCP1>& limit_set, std::size_t count, double margin, std::uint64_t seed,
    int vertices = 48);

}  // namespace cp1
