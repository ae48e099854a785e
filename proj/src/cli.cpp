#include "cp1/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <regex>
#include <sstream>

#include "cp1/dome.hpp"
#include "cp1/errors.hpp"
#include "cp1/thurston.hpp"

namespace cp1::cli {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

constexpr double kTwoPiTol = 1e-9;
constexpr double kGoldmanTol = 1e-6;
constexpr double kClosureTol = 1e-6;

// --- output -----------------------------------------------------------------------

std::string num(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

bool scalar(const json& j) { return !j.is_array() && !j.is_object(); }

void emit(const json& j, std::string& out, int level) {
  const std::string pad(2 * static_cast<std::size_t>(level), ' ');
  const std::string inner(2 * static_cast<std::size_t>(level + 1), ' ');
  if (j.is_number_float()) {
    out += num(j.get<double>());
  } else if (j.is_object()) {
    if (j.empty()) {
      out += "{}";
      return;
    }
    out += "{\n";
    bool first = true;
    for (auto it = j.begin(); it != j.end(); ++it) {
      if (!first) out += ",\n";
      first = false;
      out += inner + json(it.key()).dump() + ": ";
      emit(it.value(), out, level + 1);
    }
    out += "\n" + pad + "}";
  } else if (j.is_array()) {
    if (j.empty()) {
      out += "[]";
      return;
    }
    if (std::all_of(j.begin(), j.end(), scalar)) {
      out += "[";
      for (std::size_t i = 0; i < j.size(); ++i) {
        if (i) out += ", ";
        emit(j[i], out, level + 1);
      }
      out += "]";
      return;
    }
    out += "[\n";
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (i) out += ",\n";
      out += inner;
      emit(j[i], out, level + 1);
    }
    out += "\n" + pad + "]";
  } else {
    out += j.dump();
  }
}

std::string to_text(const json& j) {
  std::string s;
  emit(j, s, 0);
  s += "\n";
  return s;
}

json pair(cplx z) { return json::array({z.real(), z.imag()}); }

json point_json(const PointCP1& p) {
  if (p.is_infinite()) return "inf";
  return pair(p.value());
}

json vec_json(const Vec3& v) { return json::array({v.x, v.y, v.z}); }

json matrix_json(const Mobius& m) {
  return json{{"a", pair(m.a())}, {"b", pair(m.b())}, {"c", pair(m.c())}, {"d", pair(m.d())}};
}

json circle_json(const OrientedCircle& c) {
  return json{{"A", c.A()}, {"B", pair(c.B())}, {"D", c.D()}};
}

json report_json(const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks)
    checks.push_back(json{{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
  json values = json::object();
  for (const auto& [k, v] : r.values) values[k] = v;
  return json{{"checks", checks}, {"violations", r.violations}, {"values", values}};
}

// Files are staged in memory and only written once the command succeeded.
struct Output {
  std::vector<std::pair<fs::path, std::string>> files;
  void add(fs::path p, std::string text) { files.emplace_back(std::move(p), std::move(text)); }
};

void write_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open " + tmp.string());
    f << text;
    f.flush();
    if (!f) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

// --- config -----------------------------------------------------------------------

std::vector<double> numbers(const json& j, std::size_t n, const char* what) {
  if (!j.is_array() || j.size() != n)
    throw ConfigError(std::string(what) + ": expected " + std::to_string(n) + " numbers");
  std::vector<double> out;
  for (const auto& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(what) + ": expected numbers");
    const double v = x.get<double>();
    if (!std::isfinite(v)) throw ConfigError(std::string(what) + ": non-finite value");
    out.push_back(v);
  }
  return out;
}

cplx complex_of(const json& j, const char* what) {
  const auto v = numbers(j, 2, what);
  return {v[0], v[1]};
}

PointCP1 point_of(const json& j, const char* what) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return PointCP1::infinity();
    throw ConfigError(std::string(what) + ": expected [re, im] or \"inf\"");
  }
  return PointCP1(complex_of(j, what));
}

void check_keys(const json& j, std::initializer_list<const char*> allowed, const char* where) {
  if (!j.is_object()) throw ConfigError(std::string(where) + ": expected an object");
  for (auto it = j.begin(); it != j.end(); ++it)
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* k) { return it.key() == k; }))
      throw ConfigError(std::string(where) + ": unknown key '" + it.key() + "'");
}

int int_in(const json& j, int lo, int hi, const char* what) {
  if (!j.is_number_integer()) throw ConfigError(std::string(what) + ": expected an integer");
  const auto v = j.get<long long>();
  if (v < lo || v > hi)
    throw ConfigError(std::string(what) + ": must lie in [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return static_cast<int>(v);
}

double positive(const json& j, const char* what) {
  if (!j.is_number()) throw ConfigError(std::string(what) + ": expected a number");
  const double v = j.get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) throw ConfigError(std::string(what) + ": must be positive");
  return v;
}

void set_tolerance(Tolerances& tol, const std::string& key, double value) {
  if (!tol.set(key, value)) throw ConfigError("tolerance override '" + key + "' is invalid");
}

}  // namespace

Weight parse_weight(const std::string& text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s += static_cast<char>(std::tolower(c));
  static const std::regex frac(R"(^(\d+)?(?:/(\d+))?\*?pi(?:/(\d+))?$)");
  std::smatch m;
  Weight w;
  if (std::regex_match(s, m, frac)) {
    if (m[2].matched && m[3].matched) throw ConfigError("weight '" + text + "': two denominators");
    const std::int64_t p = m[1].matched ? std::stoll(m[1]) : 1;
    const std::int64_t q = m[2].matched ? std::stoll(m[2]) : (m[3].matched ? std::stoll(m[3]) : 1);
    if (q == 0) throw ConfigError("weight '" + text + "': zero denominator");
    w = Weight::pi_fraction(p, q);
  } else {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      throw ConfigError("weight '" + text + "': expected k*pi, p/q*pi or radians");
    }
    if (used != s.size() || !std::isfinite(v))
      throw ConfigError("weight '" + text + "': expected k*pi, p/q*pi or radians");
    w = Weight::radians(v);
  }
  if (!(w.value > 0.0)) throw ConfigError("weight '" + text + "': weights must be positive");
  return w;
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  check_keys(j,
             {"surface", "multicurve", "depth", "atlas_radius", "seed", "tolerances", "domain",
              "samples", "sample_box", "loops", "pleat", "limitset", "holonomy", "measure",
              "outputs"},
             "config");
  RunConfig c;
  if (j.contains("surface")) {
    const json& s = j["surface"];
    check_keys(s, {"genus", "lengths", "twists"}, "surface");
    if (s.contains("genus") && int_in(s["genus"], 2, 2, "surface.genus") != 2)
      throw ConfigError("surface.genus: only genus 2 is supported");
    if (!s.contains("lengths") || !s.contains("twists"))
      throw ConfigError("surface: lengths and twists are required");
    const auto l = numbers(s["lengths"], 3, "surface.lengths");
    const auto t = numbers(s["twists"], 3, "surface.twists");
    for (int k = 0; k < 3; ++k) {
      if (!(l[k] > 0.0)) throw ConfigError("surface.lengths: must be positive");
      c.fn.lengths[k] = l[k];
      c.fn.twists[k] = t[k];
    }
  } else {
    c.fn.lengths = {1.5, 1.7, 2.0};
    c.fn.twists = {0.3, -0.2, 0.4};
  }
  if (j.contains("multicurve")) {
    if (!j["multicurve"].is_array()) throw ConfigError("multicurve: expected an array");
    for (const json& e : j["multicurve"]) {
      check_keys(e, {"word", "weight"}, "multicurve entry");
      if (!e.contains("word") || !e["word"].is_string())
        throw ConfigError("multicurve entry: word must be a string");
      if (!e.contains("weight")) throw ConfigError("multicurve entry: weight is required");
      GroupWord w;
      try {
        w = GroupWord::parse(e["word"].get<std::string>(), 2);
      } catch (const Error& err) {
        throw ConfigError(err.what());
      }
      if (w.empty()) throw ConfigError("multicurve entry: empty word");
      const json& wt = e["weight"];
      Weight weight;
      if (wt.is_string()) weight = parse_weight(wt.get<std::string>());
      else if (wt.is_number()) weight = parse_weight(num(wt.get<double>()));
      else throw ConfigError("multicurve entry: weight must be a string or number");
      c.multicurve.entries.push_back({w, weight});
    }
  }
  if (j.contains("depth")) c.depth = int_in(j["depth"], 1, 16, "depth");
  if (j.contains("atlas_radius")) {
    if (!j["atlas_radius"].is_number() || j["atlas_radius"].get<double>() < 0.0)
      throw ConfigError("atlas_radius: expected a non-negative number");
    c.atlas_radius = j["atlas_radius"].get<double>();
  }
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw ConfigError("seed: expected a non-negative integer");
    c.seed = j["seed"].get<std::uint64_t>();
  }
  if (j.contains("tolerances")) {
    const json& t = j["tolerances"];
    if (!t.is_object()) throw ConfigError("tolerances: expected an object");
    for (auto it = t.begin(); it != t.end(); ++it) {
      if (!it.value().is_number()) throw ConfigError("tolerances: values must be numbers");
      set_tolerance(c.tol, it.key(), it.value().get<double>());
    }
  }
  if (j.contains("domain")) {
    const json& d = j["domain"];
    check_keys(d, {"ideal_points", "polygon"}, "domain");
    if (d.contains("ideal_points") == d.contains("polygon"))
      throw ConfigError("domain: give exactly one of ideal_points and polygon");
    if (d.contains("ideal_points")) {
      if (!d["ideal_points"].is_array()) throw ConfigError("domain.ideal_points: expected an array");
      for (const json& p : d["ideal_points"]) c.ideal_points.push_back(point_of(p, "domain.ideal_points"));
    } else {
      if (!d["polygon"].is_array()) throw ConfigError("domain.polygon: expected an array");
      for (const json& p : d["polygon"]) c.polygon.push_back(complex_of(p, "domain.polygon"));
    }
  }
  if (j.contains("samples")) c.samples = static_cast<std::size_t>(int_in(j["samples"], 1, 1000000, "samples"));
  if (j.contains("sample_box")) c.sample_box = positive(j["sample_box"], "sample_box");
  if (j.contains("loops")) {
    const json& l = j["loops"];
    check_keys(l, {"count", "margin", "vertices", "limit_depth", "explicit"}, "loops");
    if (l.contains("count")) c.loops.count = static_cast<std::size_t>(int_in(l["count"], 1, 100000, "loops.count"));
    if (l.contains("margin")) c.loops.margin = positive(l["margin"], "loops.margin");
    if (l.contains("vertices")) c.loops.vertices = int_in(l["vertices"], 3, 100000, "loops.vertices");
    if (l.contains("limit_depth")) c.loops.limit_depth = int_in(l["limit_depth"], 1, 16, "loops.limit_depth");
    if (l.contains("explicit")) {
      if (!l["explicit"].is_array()) throw ConfigError("loops.explicit: expected an array of loops");
      for (const json& loop : l["explicit"]) {
        if (!loop.is_array() || loop.size() < 3)
          throw ConfigError("loops.explicit: each loop needs at least three vertices");
        std::vector<PointCP1> pts;
        for (const json& p : loop) pts.push_back(PointCP1(complex_of(p, "loops.explicit")));
        c.loops.explicit_loops.push_back(std::move(pts));
      }
    }
  }
  if (j.contains("pleat")) {
    const json& p = j["pleat"];
    check_keys(p, {"radius", "sides"}, "pleat");
    if (p.contains("radius")) c.pleat_radius = positive(p["radius"], "pleat.radius");
    if (p.contains("sides")) c.pleat_sides = int_in(p["sides"], 3, 100000, "pleat.sides");
  }
  if (j.contains("limitset")) {
    const json& l = j["limitset"];
    check_keys(l, {"depth", "holonomy"}, "limitset");
    if (l.contains("depth")) c.limit_depth = int_in(l["depth"], 1, 16, "limitset.depth");
    if (l.contains("holonomy")) {
      const std::string h = l["holonomy"].is_string() ? l["holonomy"].get<std::string>() : "";
      if (h != "grafted" && h != "base") throw ConfigError("limitset.holonomy: grafted or base");
      c.limit_grafted = h == "grafted";
    }
  }
  if (j.contains("holonomy")) {
    const json& h = j["holonomy"];
    check_keys(h, {"radius"}, "holonomy");
    if (h.contains("radius")) c.holonomy_radius = int_in(h["radius"], 0, 8, "holonomy.radius");
  }
  if (j.contains("measure")) {
    const json& m = j["measure"];
    check_keys(m, {"max_levels"}, "measure");
    if (m.contains("max_levels")) c.measure_levels = int_in(m["max_levels"], 1, 24, "measure.max_levels");
  }
  if (j.contains("outputs")) {
    const json& o = j["outputs"];
    if (!o.is_object()) throw ConfigError("outputs: expected an object");
    for (auto it = o.begin(); it != o.end(); ++it) {
      if (!it.value().is_string()) throw ConfigError("outputs: file names must be strings");
      c.outputs[it.key()] = it.value().get<std::string>();
    }
  }
  return c;
}

namespace {

// --- commands ---------------------------------------------------------------------

struct Context {
  RunConfig cfg;
  fs::path out_dir;

  fs::path file(const std::string& key, const std::string& fallback) const {
    const auto it = cfg.outputs.find(key);
    return out_dir / (it == cfg.outputs.end() ? fallback : it->second);
  }
};

GraftedStructure make_structure(const RunConfig& c) {
  GraftOptions opt;
  opt.depth = c.depth;
  opt.atlas_radius = c.atlas_radius;
  opt.tol = c.tol;
  return GraftedStructure(fuchsian_from_fn(c.fn), c.multicurve, opt);
}

std::vector<std::string> generator_names(int genus) {
  std::vector<std::string> names;
  for (int k = 1; k <= genus; ++k) {
    names.push_back("a" + std::to_string(k));
    names.push_back("b" + std::to_string(k));
  }
  return names;
}

double max_generator_deviation(const Holonomy& a, const Holonomy& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.generators.size(); ++i)
    d = std::max(d, a.generators[i].projective_distance(b.generators[i]));
  return d;
}

json multicurve_json(const WeightedMulticurve& mc) {
  json a = json::array();
  for (const auto& e : mc.entries)
    a.push_back(json{{"word", e.word.str()}, {"weight", e.weight.str()}, {"radians", e.weight.value}});
  return a;
}

json holonomy_json(const Holonomy& h) {
  const auto names = generator_names(h.presentation.genus);
  json a = json::array();
  for (std::size_t i = 0; i < h.generators.size(); ++i)
    a.push_back(json{{"generator", names[i]}, {"matrix", matrix_json(h.generators[i])}});
  return a;
}

int cmd_graft(const Context& ctx, Output& out) {
  const auto& c = ctx.cfg;
  const GraftedStructure gs = make_structure(c);
  const Holonomy& base = gs.base().rep;
  const Holonomy& graft = gs.holonomy();
  json j;
  j["genus"] = 2;
  j["fn"] = json{{"lengths", c.fn.lengths}, {"twists", c.fn.twists}};
  j["multicurve"] = multicurve_json(c.multicurve);
  j["depth"] = c.depth;
  j["atlas_radius"] = gs.atlas().radius;
  j["atlas_leaves"] = gs.atlas().leaves.size();
  j["basepoint"] = pair(gs.basepoint());
  j["basepoint_perturbed"] = gs.basepoint_perturbed();
  j["base_holonomy"] = holonomy_json(base);
  j["grafted_holonomy"] = holonomy_json(graft);
  j["residuals"] = json{{"max_generator_deviation", max_generator_deviation(graft, base)},
                        {"base_relation", base.relation_residual()},
                        {"grafted_relation", graft.relation_residual()}};
  out.add(ctx.file("structure", "structure.json"), to_text(j));
  return kOk;
}

Report verify_two_pi(const RunConfig& c) {
  if (c.multicurve.entries.empty()) throw ConfigError("two-pi: the multicurve is empty");
  for (const auto& e : c.multicurve.entries)
    if (!e.weight.two_pi_multiple(c.tol.alg))
      throw ConfigError("two-pi: weight " + e.weight.str() + " is not a multiple of 2*pi");
  const GraftedStructure gs = make_structure(c);
  const double dev = max_generator_deviation(gs.holonomy(), gs.base().rep);
  const double rel = gs.holonomy().relation_residual();
  Report r;
  r.check("generator images unchanged up to sign", dev < kTwoPiTol, "max deviation " + num(dev));
  r.check("surface relation", rel < c.tol.rep, "residual " + num(rel));
  r.value("max_generator_deviation", dev);
  r.value("relation_residual", rel);
  r.value("atlas_leaves", static_cast<double>(gs.atlas().leaves.size()));
  return r;
}

Report verify_goldman(const RunConfig& c) {
  if (c.multicurve.entries.empty()) throw ConfigError("goldman: the multicurve is empty");
  const GraftedStructure gs = make_structure(c);
  double imag = 0.0;
  for (const Mobius& g : gs.holonomy().generators) imag = std::max(imag, g.max_imag());
  const bool fuchsian = imag < kTwoPiTol;
  Report r;
  r.value("holonomy_max_imag", imag);
  for (const auto& e : c.multicurve.entries) {
    const RecoveredWeight w = recover_weight_from_grafted(gs, e.word);
    const double err = std::abs(w.value - e.weight.value);
    const std::string name = e.word.str();
    r.check("weight of " + name + " recovered", err < kGoldmanTol,
            "recovered " + num(w.value) + ", configured " + e.weight.str());
    if (fuchsian)
      r.check("weight of " + name + " is a multiple of 2*pi", w.two_pi_residual < kGoldmanTol,
              "residual " + num(w.two_pi_residual));
    r.value("recovered[" + name + "]", w.value);
    r.value("error[" + name + "]", err);
    r.value("two_pi_residual[" + name + "]", w.two_pi_residual);
  }
  return r;
}

DiskComplementDomain domain_of(const RunConfig& c) {
  try {
    if (!c.ideal_points.empty()) return DiskComplementDomain::ideal_set(c.ideal_points);
    if (!c.polygon.empty()) return DiskComplementDomain::polygon(c.polygon);
  } catch (const Error& e) {
    throw ConfigError(e.what());
  }
  throw ConfigError("domain: ideal_points or polygon is required");
}

Report verify_stratification(const RunConfig& c) {
  const DiskComplementDomain dom = domain_of(c);
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> u(-c.sample_box, c.sample_box);
  std::vector<PointCP1> xs;
  std::size_t tries = 0;
  while (xs.size() < c.samples) {
    if (++tries > 1000 * c.samples) throw ConfigError("stratification: cannot place samples in U");
    const PointCP1 x(cplx(u(rng), u(rng)));
    if (dom.distance_to_complement(x) > 1e-3) xs.push_back(x);
  }
  return stratification_check(dom, xs, Exec::Parallel, c.tol).report;
}

Report verify_covering_cmd(const RunConfig& c) {
  const GraftedStructure gs = make_structure(c);
  CoveringOptions opt;
  opt.margin = c.loops.margin;
  opt.limit_depth = c.loops.limit_depth;
  opt.closure_tol = kClosureTol;
  std::vector<std::vector<PointCP1>> loops = c.loops.explicit_loops;
  if (loops.empty()) {
    const auto limit = limit_set_sample(gs.holonomy(), c.loops.limit_depth);
    loops = random_loops_off_limit_set(limit, c.loops.count, c.loops.margin, c.seed, c.loops.vertices);
    if (loops.size() < c.loops.count)
      throw Error(ErrorKind::Numeric, "covering: could not place the requested loops");
  }
  return verify_covering(gs, loops, opt).report;
}

Report verify_dome_measure(const RunConfig& c) {
  if (c.ideal_points.empty()) throw ConfigError("dome-measure: domain.ideal_points is required");
  const DiskComplementDomain dom = domain_of(c);
  const DomeMesh mesh = dome(c.ideal_points, c.tol);
  Report r;
  double worst = 0.0;
  for (std::size_t i = 0; i < mesh.edges.size(); ++i) {
    const DomeEdge& e = mesh.edges[i];
    const TransverseMeasure m =
        transverse_measure(dom, dome_edge_transversal(mesh, e), c.measure_levels, 8, c.tol);
    const double err = std::abs(m.value - e.weight);
    worst = std::max(worst, err);
    const std::string name = "edge " + std::to_string(e.v0) + "-" + std::to_string(e.v1);
    r.check(name + " measure equals dihedral angle", m.converged && err < c.tol.measure,
            "theta " + num(m.value) + ", dome " + num(e.weight));
    r.value("theta[" + name + "]", m.value);
  }
  r.value("edges", static_cast<double>(mesh.edges.size()));
  r.value("max_error", worst);
  return r;
}

int cmd_verify(const Context& ctx, const std::string& which, Output& out) {
  Report r;
  if (which == "two-pi") r = verify_two_pi(ctx.cfg);
  else if (which == "goldman") r = verify_goldman(ctx.cfg);
  else if (which == "stratification") r = verify_stratification(ctx.cfg);
  else if (which == "covering") r = verify_covering_cmd(ctx.cfg);
  else r = verify_dome_measure(ctx.cfg);
  out.add(ctx.file("report", "report-" + which + ".json"), to_text(report_json(r)));
  std::cout << "verify " << which << ": " << r.checks.size() << " checks, " << r.violations.size()
            << " violations\n";
  return r.ok() ? kOk : kViolations;
}

std::string obj_text(const std::vector<Vec3>& vertices, const std::vector<std::vector<std::size_t>>& faces,
                     const std::string& title) {
  std::string s = "# " + title + "\n";
  for (const Vec3& v : vertices) s += "v " + num(v.x) + " " + num(v.y) + " " + num(v.z) + "\n";
  for (const auto& f : faces)
    for (std::size_t k = 1; k + 1 < f.size(); ++k)
      s += "f " + std::to_string(f[0] + 1) + " " + std::to_string(f[k] + 1) + " " +
           std::to_string(f[k + 1] + 1) + "\n";
  return s;
}

void export_pleat(const Context& ctx, Output& out) {
  const GraftedStructure gs = make_structure(ctx.cfg);
  const PleatedSurfaceMesh mesh = pleated_surface(gs, ctx.cfg.pleat_radius, ctx.cfg.pleat_sides);
  std::vector<Vec3> verts;
  std::vector<std::vector<std::size_t>> faces;
  json jv = json::array(), jf = json::array(), je = json::array();
  for (const PleatFace& f : mesh.faces) {
    std::vector<std::size_t> idx;
    for (cplx z : f.polygon) {
      const Vec3 b = to_poincare_ball(apply(f.isometry, lift_h2(z)));
      idx.push_back(verts.size());
      verts.push_back(b);
      jv.push_back(json{{"ball", vec_json(b)}, {"h2", pair(z)}});
    }
    jf.push_back(json{{"vertices", idx}, {"plane", circle_json(f.plane.boundary)}});
    faces.push_back(std::move(idx));
  }
  for (const PleatEdge& e : mesh.edges)
    je.push_back(json{{"faces", json::array({e.f0, e.f1})},
                      {"curve", gs.multicurve().entries[gs.atlas().leaves[e.leaf].curve].word.str()},
                      {"weight", e.weight},
                      {"h2", json::array({pair(e.a), pair(e.b)})}});
  const json j{{"model", "poincare_ball"}, {"vertices", jv}, {"faces", jf}, {"edges", je}};
  out.add(ctx.file("pleat_json", "pleat.json"), to_text(j));
  out.add(ctx.file("pleat_obj", "pleat.obj"), obj_text(verts, faces, "pleated surface, Poincare ball"));
}

void export_dome(const Context& ctx, Output& out) {
  if (ctx.cfg.ideal_points.empty()) throw ConfigError("export dome: domain.ideal_points is required");
  const DomeMesh mesh = dome(ctx.cfg.ideal_points, ctx.cfg.tol);
  std::vector<Vec3> verts;
  std::vector<std::vector<std::size_t>> faces;
  json jv = json::array(), jf = json::array(), je = json::array();
  for (const PointCP1& p : mesh.vertices) {
    verts.push_back(to_sphere(p));
    jv.push_back(json{{"ideal", point_json(p)}, {"ball", vec_json(verts.back())}});
  }
  for (const DomeFace& f : mesh.faces) {
    jf.push_back(json{{"vertices", f.vertices}, {"plane", circle_json(f.plane.boundary)}});
    faces.push_back(f.vertices);
  }
  for (const DomeEdge& e : mesh.edges)
    je.push_back(json{{"vertices", json::array({e.v0, e.v1})},
                      {"faces", json::array({e.f0, e.f1})},
                      {"weight", e.weight}});
  const json j{{"model", "poincare_ball"}, {"vertices", jv}, {"faces", jf}, {"edges", je}};
  out.add(ctx.file("dome_json", "dome.json"), to_text(j));
  out.add(ctx.file("dome_obj", "dome.obj"), obj_text(verts, faces, "dome, Poincare ball"));
}

void export_limitset(const Context& ctx, Output& out) {
  const auto& c = ctx.cfg;
  std::vector<PointCP1> pts;
  if (c.limit_grafted) pts = limit_set_sample(make_structure(c).holonomy(), c.limit_depth);
  else pts = limit_set_sample(fuchsian_from_fn(c.fn).rep, c.limit_depth);
  std::string s = "re,im\n";
  for (const PointCP1& p : pts) {
    if (p.is_infinite()) continue;
    s += num(p.value().real()) + "," + num(p.value().imag()) + "\n";
  }
  out.add(ctx.file("limitset", "limitset.csv"), s);
}

void export_holonomy(const Context& ctx, Output& out) {
  const GraftedStructure gs = make_structure(ctx.cfg);
  const Holonomy& h = gs.holonomy();
  std::string s = "word,a_re,a_im,b_re,b_im,c_re,c_im,d_re,d_im,tr_re,tr_im\n";
  for (const GroupWord& w : enumerate_words(h.presentation, ctx.cfg.holonomy_radius)) {
    const Mobius m = h.evaluate(w);
    s += w.empty() ? std::string("e") : w.str();
    for (cplx z : {m.a(), m.b(), m.c(), m.d(), m.trace()}) s += "," + num(z.real()) + "," + num(z.imag());
    s += "\n";
  }
  out.add(ctx.file("holonomy", "holonomy.csv"), s);
}

int cmd_export(const Context& ctx, const std::string& target, Output& out) {
  if (target == "pleat") export_pleat(ctx, out);
  else if (target == "dome") export_dome(ctx, out);
  else if (target == "limitset") export_limitset(ctx, out);
  else export_holonomy(ctx, out);
  return kOk;
}

int exit_for(ErrorKind k) {
  switch (k) {
    case ErrorKind::DegenerateInput:
    case ErrorKind::Domain:
    case ErrorKind::Precondition:
      return kInvalid;
    default:
      return kNumeric;
  }
}

}  // namespace

int run(int argc, const char* const* argv) {
  CLI::App app{"Grafting, maximal disks and Thurston coordinates for CP^1-structures", "cp1graft"};
  app.require_subcommand(1);
  std::string config_path, out_dir = ".";
  std::optional<int> depth;
  std::optional<std::uint64_t> seed;
  std::vector<std::string> overrides;
  app.add_option("--config", config_path, "Run config (JSON)")->required()->check(CLI::ExistingFile);
  app.add_option("--out", out_dir, "Output directory");
  app.add_option("--depth", depth, "Lift depth, 1 to 16");
  app.add_option("--seed", seed, "Random seed");
  app.add_option("--tol-override", overrides, "Tolerance override key=value")->take_all();
  app.fallthrough();

  auto* graft = app.add_subcommand("graft", "Build the grafted structure");
  std::string which, target;
  auto* verify = app.add_subcommand("verify", "Run a verification");
  verify->add_option("check", which)
      ->required()
      ->check(CLI::IsMember({"two-pi", "goldman", "stratification", "covering", "dome-measure"}));
  auto* exp = app.add_subcommand("export", "Export meshes and tables");
  exp->add_option("target", target)->required()->check(CLI::IsMember({"pleat", "dome", "limitset", "holonomy"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kInvalid;
  }

  try {
    std::ifstream f(config_path, std::ios::binary);
    std::stringstream buf;
    buf << f.rdbuf();
    Context ctx{parse_config(buf.str()), fs::path(out_dir)};
    if (depth) {
      if (*depth < 1 || *depth > 16) throw ConfigError("--depth must lie in [1, 16]");
      ctx.cfg.depth = *depth;
    }
    if (seed) ctx.cfg.seed = *seed;
    for (const std::string& o : overrides) {
      const auto eq = o.find('=');
      if (eq == std::string::npos) throw ConfigError("--tol-override expects key=value");
      double v = 0.0;
      try {
        std::size_t used = 0;
        v = std::stod(o.substr(eq + 1), &used);
        if (used != o.size() - eq - 1) throw ConfigError("");
      } catch (const std::exception&) {
        throw ConfigError("--tol-override: bad value in '" + o + "'");
      }
      set_tolerance(ctx.cfg.tol, o.substr(0, eq), v);
    }

    Output out;
    int code = kOk;
    if (graft->parsed()) code = cmd_graft(ctx, out);
    else if (verify->parsed()) code = cmd_verify(ctx, which, out);
    else code = cmd_export(ctx, target, out);
    for (const auto& [path, text] : out.files) write_atomic(path, text);
    return code;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_for(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumeric;
  }
}

}  // namespace cp1::cli
