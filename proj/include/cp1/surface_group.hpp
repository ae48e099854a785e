#pragma once

// Closed surface groups pi_1(S) = <a1, b1, ..., ag, bg | prod [ai, bi]> and
// their representations into PSL(2,C).

#include <array>
#include <string>
#include <string_view>
#include <vector>

#include "cp1/hyperbolic.hpp"
#include "cp1/parallel.hpp"

namespace cp1 {

/// Letters are ordered a1 < a1^-1 < b1 < b1^-1 < a2 < ... ; letter 2k is the
/// k-th generator (a1, b1, a2, b2, ...) and 2k + 1 its inverse.
using Letter = int;

inline Letter inverse_letter(Letter l) { return l ^ 1; }

/// Freely reduced word in the generators.
class GroupWord {
 public:
  GroupWord() = default;
  explicit GroupWord(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t size() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  GroupWord inverse() const;
  GroupWord operator*(const GroupWord& o) const;
  bool operator==(const GroupWord& o) const = default;

  /// Space-separated tokens such as "a1 b1 A1 B1"; upper case is the inverse.
  static GroupWord parse(std::string_view text, int genus);
  std::string str() const;

 private:
  std::vector<Letter> letters_;
};

struct SurfacePresentation {
  int genus = 2;

  int generator_count() const { return 2 * genus; }
  int letter_count() const { return 4 * genus; }
  /// prod [ai, bi] with [x, y] = x y x^-1 y^-1.
  GroupWord relation() const;
};

/// Fenchel-Nielsen data for genus two. Cuff 0 is the curve a1, cuff 1 is a2
/// and cuff 2 the separating curve [a1, b1]; twists are signed lengths.
struct FNCoordinates {
  std::array<double, 3> lengths{};
  std::array<double, 3> twists{};
};

/// Generator images of a representation of the surface group.
struct Holonomy {
  SurfacePresentation presentation;
  std::vector<Mobius> generators;  // a1, b1, a2, b2, ...

  Mobius letter(Letter l) const;
  Mobius evaluate(const GroupWord& w) const;
  /// Projective distance of the relator image from the identity.
  double relation_residual() const;
};

struct FuchsianHolonomy {
  Holonomy rep;
  cplx basepoint{0.0, 1.0};
};

FuchsianHolonomy fuchsian_from_fn(const FNCoordinates& fn);

/// Words naming the three cuffs of the pants decomposition behind fuchsian_from_fn.
std::array<GroupWord, 3> cuff_words();

/// All freely reduced nonempty words of length <= radius, in shortlex order.
std::vector<GroupWord> enumerate_words(const SurfacePresentation& p, int radius);

/// Number of freely reduced words of length <= radius.
std::size_t word_count(const SurfacePresentation& p, int radius);

/// Attracting fixed points of the hyperbolic and loxodromic images of all
/// words of length <= depth, deduplicated in shortlex order.
std::vector<PointCP1> limit_set_sample(const Holonomy& rho, int depth, Exec exec = Exec::Parallel,
                                       const Tolerances& tol = default_tolerances());

/// Symmetric chordal Hausdorff distance between two finite samples.
double hausdorff_chordal(const std::vector<PointCP1>& a, const std::vector<PointCP1>& b);

/// Oriented axis from the repelling to the attracting fixed point.
GeodesicH3 axis(const Mobius& m, const Tolerances& tol = default_tolerances());

/// |tr^2 A - 4| + |tr [A, B] - 2|; below one signals a non-discrete pair.
double jorgensen_quantity(const Mobius& a, const Mobius& b);

}  // namespace cp1
