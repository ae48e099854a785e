// Serial reference vs OpenMP kernels: median wall time and agreement.

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "cp1/kernels.hpp"
#include "cp1/parallel.hpp"
#include "cp1/thurston.hpp"

using namespace cp1;

namespace {

double median_ms(int repeat, const std::function<void()>& f) {
  std::vector<double> t;
  for (int i = 0; i < repeat; ++i) {
    const auto a = std::chrono::steady_clock::now();
    f();
    const auto b = std::chrono::steady_clock::now();
    t.push_back(std::chrono::duration<double, std::milli>(b - a).count());
  }
  std::sort(t.begin(), t.end());
  return t[t.size() / 2];
}

void row(const char* name, double serial, double parallel, bool agree) {
  std::printf("%-28s %12.3f %12.3f %8.2fx  %s\n", name, serial, parallel, serial / parallel,
              agree ? "agree" : "DIFFER");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Serial vs parallel kernel benchmark", "bench_kernels"};
  int repeat = 5, depth = 7, samples = 2000;
  app.add_option("--repeat", repeat, "Timed repetitions per kernel")->check(CLI::Range(1, 1000));
  app.add_option("--depth", depth, "Word depth")->check(CLI::Range(1, 10));
  app.add_option("--samples", samples, "Maximal-disk samples")->check(CLI::Range(1, 1000000));
  CLI11_PARSE(app, argc, argv);

  const FuchsianHolonomy f = fuchsian_from_fn({{1.5, 1.7, 2.0}, {0.3, -0.2, 0.4}});
  const Holonomy& rho = f.rep;
  const Tolerances& tol = default_tolerances();
  bool all = true;

  std::printf("threads %d, depth %d, repeat %d\n", max_threads(), depth, repeat);
  std::printf("%-28s %12s %12s %9s\n", "kernel", "serial ms", "parallel ms", "speedup");

  std::vector<Mobius> ws, wp;
  const double t1 = median_ms(repeat, [&] { ws = kernels::word_images(rho, depth, Exec::Serial); });
  const double t2 = median_ms(repeat, [&] { wp = kernels::word_images(rho, depth, Exec::Parallel); });
  bool ok = ws.size() == wp.size();
  for (std::size_t i = 0; ok && i < ws.size(); ++i) ok = ws[i].distance(wp[i]) == 0.0;
  row("word_images", t1, t2, ok);
  all &= ok;

  std::vector<std::optional<PointCP1>> as, ap;
  const double t3 = median_ms(repeat, [&] { as = kernels::attracting_points(ws, tol, Exec::Serial); });
  const double t4 = median_ms(repeat, [&] { ap = kernels::attracting_points(ws, tol, Exec::Parallel); });
  ok = as.size() == ap.size();
  for (std::size_t i = 0; ok && i < as.size(); ++i)
    ok = as[i].has_value() == ap[i].has_value() && (!as[i] || chordal_distance(*as[i], *ap[i]) == 0.0);
  row("attracting_points", t3, t4, ok);
  all &= ok;

  const std::vector<GeodesicH3> axes{axis(rho.generators[0]), axis(rho.generators[2])};
  std::vector<kernels::AxisLift> ls, lp;
  const double t5 = median_ms(repeat, [&] {
    ls = kernels::axis_lifts_near(rho, axes, depth, f.basepoint, 4.0, Exec::Serial);
  });
  const double t6 = median_ms(repeat, [&] {
    lp = kernels::axis_lifts_near(rho, axes, depth, f.basepoint, 4.0, Exec::Parallel);
  });
  ok = ls.size() == lp.size();
  for (std::size_t i = 0; ok && i < ls.size(); ++i) ok = ls[i].word == lp[i].word;
  row("axis_lifts_near", t5, t6, ok);
  all &= ok;

  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<PointCP1> pts;
  for (int i = 0; i < 24; ++i) pts.push_back(PointCP1(cplx(u(rng), u(rng))));
  const auto dom = DiskComplementDomain::ideal_set(pts);
  std::vector<PointCP1> xs;
  while (static_cast<int>(xs.size()) < samples) {
    const PointCP1 x(cplx(2 * u(rng), 2 * u(rng)));
    if (dom.distance_to_complement(x) > 1e-3) xs.push_back(x);
  }
  std::vector<std::optional<MaximalDiskRecord>> ms, mp;
  const double t7 = median_ms(repeat, [&] { ms = maximal_disks(dom, xs, Exec::Serial); });
  const double t8 = median_ms(repeat, [&] { mp = maximal_disks(dom, xs, Exec::Parallel); });
  ok = ms.size() == mp.size();
  for (std::size_t i = 0; ok && i < ms.size(); ++i)
    ok = ms[i].has_value() == mp[i].has_value() &&
         (!ms[i] || ms[i]->disk.boundary.distance(mp[i]->disk.boundary) == 0.0);
  row("maximal_disks", t7, t8, ok);
  all &= ok;

  return all ? 0 : 1;
}
