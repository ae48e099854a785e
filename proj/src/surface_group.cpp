#include "cp1/surface_group.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "cp1/errors.hpp"
#include "cp1/kernels.hpp"

namespace cp1 {

// --- GroupWord -----------------------------------------------------------------

GroupWord::GroupWord(std::vector<Letter> letters) {
  for (Letter l : letters) {
    if (!letters_.empty() && letters_.back() == inverse_letter(l)) letters_.pop_back();
    else letters_.push_back(l);
  }
}

GroupWord GroupWord::inverse() const {
  std::vector<Letter> out(letters_.rbegin(), letters_.rend());
  for (Letter& l : out) l = inverse_letter(l);
  return GroupWord(std::move(out));
}

GroupWord GroupWord::operator*(const GroupWord& o) const {
  std::vector<Letter> out = letters_;
  out.insert(out.end(), o.letters_.begin(), o.letters_.end());
  return GroupWord(std::move(out));
}

GroupWord GroupWord::parse(std::string_view text, int genus) {
  std::vector<Letter> out;
  std::size_t i = 0;
  auto bad = [&](const std::string& why) {
    fail(ErrorKind::Precondition, "bad word '" + std::string(text) + "': " + why);
  };
  while (i < text.size()) {
    const char ch = text[i];
    if (std::isspace(static_cast<unsigned char>(ch)) || ch == '.' || ch == '*') {
      ++i;
      continue;
    }
    const char lower = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
    if (lower != 'a' && lower != 'b') bad("expected a generator a<k> or b<k>");
    const bool inverse = std::isupper(static_cast<unsigned char>(ch)) != 0;
    ++i;
    int index = 0;
    std::size_t digits = 0;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
      index = index * 10 + (text[i] - '0');
      ++i;
      ++digits;
    }
    if (digits == 0 || index < 1 || index > genus) bad("generator index out of range");
    const int gen = 2 * (index - 1) + (lower == 'b' ? 1 : 0);
    out.push_back(2 * gen + (inverse ? 1 : 0));
  }
  return GroupWord(std::move(out));
}

std::string GroupWord::str() const {
  std::string s;
  for (Letter l : letters_) {
    if (!s.empty()) s += ' ';
    const int gen = l / 2;
    const bool inv = (l & 1) != 0;
    char c = (gen % 2 == 0) ? 'a' : 'b';
    if (inv) c = static_cast<char>(std::toupper(c));
    s += c;
    s += std::to_string(gen / 2 + 1);
  }
  return s;
}

GroupWord SurfacePresentation::relation() const {
  std::vector<Letter> r;
  for (int k = 0; k < genus; ++k) {
    const Letter a = 2 * (2 * k), b = 2 * (2 * k + 1);
    r.insert(r.end(), {a, b, inverse_letter(a), inverse_letter(b)});
  }
  return GroupWord(std::move(r));
}

// --- Holonomy ------------------------------------------------------------------

Mobius Holonomy::letter(Letter l) const {
  const Mobius& g = generators.at(static_cast<std::size_t>(l / 2));
  return (l & 1) ? g.inverse() : g;
}

Mobius Holonomy::evaluate(const GroupWord& w) const {
  Mobius m;
  for (Letter l : w.letters()) m = m * letter(l);
  return m;
}

double Holonomy::relation_residual() const {
  return evaluate(presentation.relation()).projective_distance(Mobius::identity());
}

namespace {

Mobius translation(double s) { return Mobius(std::exp(s / 2.0), 0.0, 0.0, std::exp(-s / 2.0)); }

// One-holed torus <a, b>: a translates by `length` along the imaginary axis,
// b = T(twist) * b0 with b0 translating along the unit semicircle; the
// boundary [a, b] has translation length `boundary`.
std::pair<Mobius, Mobius> one_holed_torus(double length, double twist, double boundary) {
  const double x = 2.0 * std::cosh(length / 2.0);
  const double y2 = (x * x - 2.0 + 2.0 * std::cosh(boundary / 2.0)) / (x * x / 4.0 - 1.0);
  const double m = std::acosh(std::sqrt(y2) / 2.0);
  const Mobius b0(std::cosh(m), std::sinh(m), std::sinh(m), std::cosh(m));
  return {translation(length), translation(twist) * b0};
}

// Real map with 0 -> u and infinity -> v preserving the upper half-plane.
Mobius real_frame(const PointCP1& u, const PointCP1& v) {
  const double u0 = u.z0.real(), u1 = u.z1.real();
  const double v0 = v.z0.real(), v1 = v.z1.real();
  const double det = v0 * u1 - u0 * v1;
  const double s = det > 0.0 ? 1.0 : -1.0;
  return Mobius(v0, s * u0, v1, s * u1);
}

}  // namespace

FuchsianHolonomy fuchsian_from_fn(const FNCoordinates& fn) {
  for (double l : fn.lengths)
    if (!(l > 0.0) || !std::isfinite(l))
      fail(ErrorKind::Precondition, "fuchsian_from_fn: cuff lengths must be positive");
  for (double t : fn.twists)
    if (!std::isfinite(t)) fail(ErrorKind::Precondition, "fuchsian_from_fn: non-finite twist");

  const auto [a1, b1] = one_holed_torus(fn.lengths[0], fn.twists[0], fn.lengths[2]);
  const auto [a2, b2] = one_holed_torus(fn.lengths[1], fn.twists[1], fn.lengths[2]);

  // Glue the second torus so that its boundary [a2, b2] becomes [a1, b1]^-1,
  // then twist along the common axis.
  const auto f1 = classify(commutator(a1, b1)).fixed_points;  // (repelling, attracting)
  const auto f2 = classify(commutator(a2, b2)).fixed_points;
  const Mobius frame = real_frame(f1[0], f1[1]);
  Mobius g = real_frame(f1[1], f1[0]) * real_frame(f2[0], f2[1]).inverse();
  g = frame * translation(fn.twists[2]) * frame.inverse() * g;

  // Put the separating axis on the imaginary axis so both tori sit
  // symmetrically around the basepoint.
  const Mobius h = frame.inverse();
  FuchsianHolonomy out;
  out.rep.presentation.genus = 2;
  out.rep.generators = {h * a1 * h.inverse(), h * b1 * h.inverse(), h * g * a2 * (h * g).inverse(),
                        h * g * b2 * (h * g).inverse()};
  return out;
}

std::array<GroupWord, 3> cuff_words() {
  return {GroupWord({0}), GroupWord({4}), GroupWord({0, 2, 1, 3})};
}

std::size_t word_count(const SurfacePresentation& p, int radius) {
  const std::size_t letters = static_cast<std::size_t>(p.letter_count());
  std::size_t total = 0, level = letters;
  for (int k = 1; k <= radius; ++k) {
    total += level;
    level *= letters - 1;
  }
  return total;
}

std::vector<GroupWord> enumerate_words(const SurfacePresentation& p, int radius) {
  std::vector<GroupWord> out;
  if (radius < 1) return out;
  out.reserve(word_count(p, radius));
  std::vector<std::vector<Letter>> level;
  for (Letter l = 0; l < p.letter_count(); ++l) level.push_back({l});
  for (int k = 1; k <= radius; ++k) {
    for (const auto& w : level) out.emplace_back(w);
    if (k == radius) break;
    std::vector<std::vector<Letter>> next;
    next.reserve(level.size() * static_cast<std::size_t>(p.letter_count() - 1));
    for (const auto& w : level)
      for (Letter l = 0; l < p.letter_count(); ++l) {
        if (l == inverse_letter(w.back())) continue;
        auto c = w;
        c.push_back(l);
        next.push_back(std::move(c));
      }
    level = std::move(next);
  }
  return out;
}

std::vector<PointCP1> limit_set_sample(const Holonomy& rho, int depth, Exec exec,
                                       const Tolerances& tol) {
  const auto images = kernels::word_images(rho, depth, exec);
  return kernels::dedup_chordal(kernels::attracting_points(images, tol, exec), tol.geo);
}

double hausdorff_chordal(const std::vector<PointCP1>& a, const std::vector<PointCP1>& b) {
  auto directed = [](const std::vector<PointCP1>& x, const std::vector<PointCP1>& y) {
    double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
    for (std::size_t i = 0; i < x.size(); ++i) {
      double best = 4.0;
      for (const PointCP1& q : y) best = std::min(best, chordal_distance(x[i], q));
      worst = std::max(worst, best);
    }
    return worst;
  };
  return std::max(directed(a, b), directed(b, a));
}

GeodesicH3 axis(const Mobius& m, const Tolerances& tol) {
  const Classification c = classify(m, tol);
  if (c.type != MobiusType::Hyperbolic && c.type != MobiusType::Loxodromic)
    fail(ErrorKind::Domain, std::string("axis: map is ") + to_string(c.type));
  return {c.fixed_points[0], c.fixed_points[1]};
}

double jorgensen_quantity(const Mobius& a, const Mobius& b) {
  // Trace identity for tr [A, B]; independent of the SL(2,C) signs.
  const cplx x = a.trace(), y = b.trace(), z = (a * b).trace();
  const cplx tr_comm = x * x + y * y + z * z - x * y * z - 2.0;
  return std::abs(x * x - 4.0) + std::abs(tr_comm - 2.0);
}

}  // namespace cp1
