#include <algorithm>
#include <numeric>
#include <cmath>
#include <numbers>
#include <tuple>
#include <unordered_map>

#include "cp1/kernels.hpp"

namespace cp1::kernels {

std::vector<Mobius> word_images(const Holonomy& rho, int depth, Exec exec) {
  const int L = rho.presentation.letter_count();
  std::vector<Mobius> letters(static_cast<std::size_t>(L));
  for (Letter l = 0; l < L; ++l) letters[static_cast<std::size_t>(l)] = rho.letter(l);

  std::vector<Mobius> out;
  if (depth < 1) return out;
  out.reserve(word_count(rho.presentation, depth));

  std::vector<Mobius> level = letters;
  std::vector<Letter> last(static_cast<std::size_t>(L));
  for (Letter l = 0; l < L; ++l) last[static_cast<std::size_t>(l)] = l;

  for (int k = 1; k <= depth; ++k) {
    out.insert(out.end(), level.begin(), level.end());
    if (k == depth) break;
    const std::size_t fan = static_cast<std::size_t>(L - 1);
    std::vector<Mobius> next(level.size() * fan);
    std::vector<Letter> next_last(next.size());
    const auto n = static_cast<std::ptrdiff_t>(level.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
    for (std::ptrdiff_t p = 0; p < n; ++p) {
      std::size_t j = static_cast<std::size_t>(p) * fan;
      const Letter skip = inverse_letter(last[static_cast<std::size_t>(p)]);
      for (Letter l = 0; l < L; ++l) {
        if (l == skip) continue;
        next[j] = level[static_cast<std::size_t>(p)] * letters[static_cast<std::size_t>(l)];
        next_last[j] = l;
        ++j;
      }
    }
    level = std::move(next);
    last = std::move(next_last);
  }
  return out;
}

std::vector<std::optional<PointCP1>> attracting_points(const std::vector<Mobius>& images,
                                                       const Tolerances& tol, Exec exec) {
  std::vector<std::optional<PointCP1>> out(images.size());
  const auto n = static_cast<std::ptrdiff_t>(images.size());
#pragma omp parallel for schedule(static) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const Classification c = classify(images[static_cast<std::size_t>(i)], tol);
    if (c.type == MobiusType::Hyperbolic || c.type == MobiusType::Loxodromic)
      out[static_cast<std::size_t>(i)] = c.fixed_points[1];
  }
  return out;
}

std::vector<PointCP1> dedup_chordal(const std::vector<std::optional<PointCP1>>& pts, double tol) {
  // Uniform grid on the sphere; cells of side tol, so duplicates live in
  // neighbouring cells.
  struct Key {
    long x, y, z;
    bool operator==(const Key&) const = default;
  };
  struct KeyHash {
    std::size_t operator()(const Key& k) const {
      return static_cast<std::size_t>(k.x * 73856093L ^ k.y * 19349663L ^ k.z * 83492791L);
    }
  };
  std::unordered_map<Key, std::vector<std::size_t>, KeyHash> grid;
  std::vector<PointCP1> out;
  std::vector<Vec3> spherical;
  for (const auto& p : pts) {
    if (!p) continue;
    const Vec3 v = to_sphere(*p);
    const Key k{static_cast<long>(std::floor(v.x / tol)), static_cast<long>(std::floor(v.y / tol)),
                static_cast<long>(std::floor(v.z / tol))};
    bool duplicate = false;
    for (long dx = -1; dx <= 1 && !duplicate; ++dx)
      for (long dy = -1; dy <= 1 && !duplicate; ++dy)
        for (long dz = -1; dz <= 1 && !duplicate; ++dz) {
          const auto it = grid.find({k.x + dx, k.y + dy, k.z + dz});
          if (it == grid.end()) continue;
          for (std::size_t idx : it->second)
            if ((spherical[idx] - v).norm() < tol) {
              duplicate = true;
              break;
            }
        }
    if (duplicate) continue;
    grid[k].push_back(out.size());
    out.push_back(*p);
    spherical.push_back(v);
  }
  return out;
}

RealMat to_real(const Mobius& m) {
  return {m.a().real(), m.b().real(), m.c().real(), m.d().real()};
}

namespace {

struct RealAxis {
  double u0, u1, v0, v1;
};

// Distance test against the disk of hyperbolic radius r around z:
// sinh d = |Re((z u1 - u0)(conj z v1 - v0))| / (Im z |u0 v1 - u1 v0|).
bool meets_disk(double u0, double u1, double v0, double v1, cplx z, double sinh_r) {
  const cplx p = (z * u1 - u0) * (std::conj(z) * v1 - v0);
  const double wedge = std::abs(u0 * v1 - u1 * v0);
  return std::abs(p.real()) <= sinh_r * z.imag() * wedge;
}

struct Sweep {
  const std::vector<RealMat>* letters;
  const std::vector<RealAxis>* axes;
  int depth;
  int letter_count;
  cplx center;
  double sinh_r;

  void visit(const RealMat& m, std::vector<Letter>& word, std::vector<AxisLift>& out) const {
    for (std::size_t k = 0; k < axes->size(); ++k) {
      const RealAxis& ax = (*axes)[k];
      AxisLift lift;
      m.apply(ax.u0, ax.u1, lift.tail0, lift.tail1);
      m.apply(ax.v0, ax.v1, lift.head0, lift.head1);
      if (meets_disk(lift.tail0, lift.tail1, lift.head0, lift.head1, center, sinh_r)) {
        lift.curve = k;
        lift.word = word;
        out.push_back(std::move(lift));
      }
    }
    if (static_cast<int>(word.size()) == depth) return;
    const Letter skip = word.empty() ? -1 : inverse_letter(word.back());
    for (Letter l = 0; l < letter_count; ++l) {
      if (l == skip) continue;
      word.push_back(l);
      visit(m * (*letters)[static_cast<std::size_t>(l)], word, out);
      word.pop_back();
    }
  }
};

// Angle on the circle R u {inf} of a homogeneous real point.
double boundary_angle(double x0, double x1) {
  return 2.0 * std::atan2(x0, x1);
}

double wrap(double a) {
  while (a > std::numbers::pi) a -= 2.0 * std::numbers::pi;
  while (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

bool shortlex_less(const std::vector<Letter>& a, const std::vector<Letter>& b) {
  if (a.size() != b.size()) return a.size() < b.size();
  return a < b;
}

}  // namespace

std::vector<AxisLift> axis_lifts_near(const Holonomy& rho, const std::vector<GeodesicH3>& axes,
                                      int depth, cplx center, double radius, Exec exec) {
  const int L = rho.presentation.letter_count();
  std::vector<RealMat> letters(static_cast<std::size_t>(L));
  for (Letter l = 0; l < L; ++l) letters[static_cast<std::size_t>(l)] = to_real(rho.letter(l));
  std::vector<RealAxis> real_axes;
  for (const GeodesicH3& g : axes) {
    const PointCP1 t = g.tail.normalized(), h = g.head.normalized();
    real_axes.push_back({t.z0.real(), t.z1.real(), h.z0.real(), h.z1.real()});
  }
  const Sweep sweep{&letters, &real_axes, depth, L, center, std::sinh(radius)};

  // Roots: the empty word, then one task per two-letter prefix.
  std::vector<AxisLift> found;
  {
    std::vector<Letter> w;
    const Sweep shallow{&letters, &real_axes, std::min(depth, 1), L, center, std::sinh(radius)};
    shallow.visit(RealMat{}, w, found);
  }
  std::vector<std::pair<Letter, Letter>> prefixes;
  if (depth >= 2)
    for (Letter a = 0; a < L; ++a)
      for (Letter b = 0; b < L; ++b)
        if (b != inverse_letter(a)) prefixes.push_back({a, b});

  std::vector<std::vector<AxisLift>> partial(prefixes.size());
  const auto n = static_cast<std::ptrdiff_t>(prefixes.size());
#pragma omp parallel for schedule(dynamic) if (exec == Exec::Parallel)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    const auto [a, b] = prefixes[static_cast<std::size_t>(i)];
    std::vector<Letter> w{a, b};
    sweep.visit(letters[static_cast<std::size_t>(a)] * letters[static_cast<std::size_t>(b)], w,
                partial[static_cast<std::size_t>(i)]);
  }
  for (auto& p : partial) found.insert(found.end(), p.begin(), p.end());

  // Deduplicate equal lifts keeping the shortlex-first word.
  std::vector<std::size_t> order(found.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
    return shortlex_less(found[x].word, found[y].word);
  });
  constexpr double kSame = 1e-7;
  std::vector<AxisLift> unique;
  std::vector<std::pair<double, double>> kept;
  for (std::size_t i : order) {
    const double t = boundary_angle(found[i].tail0, found[i].tail1);
    const double h = boundary_angle(found[i].head0, found[i].head1);
    bool dup = false;
    for (std::size_t k = 0; k < unique.size() && !dup; ++k)
      dup = unique[k].curve == found[i].curve && std::abs(wrap(kept[k].first - t)) < kSame &&
            std::abs(wrap(kept[k].second - h)) < kSame;
    if (dup) continue;
    unique.push_back(found[i]);
    kept.push_back({t, h});
  }
  std::sort(unique.begin(), unique.end(), [](const AxisLift& x, const AxisLift& y) {
    if (x.curve != y.curve) return x.curve < y.curve;
    return shortlex_less(x.word, y.word);
  });
  return unique;
}

}  // namespace cp1::kernels
