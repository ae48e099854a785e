#pragma once

// Batch front-end: run configs, command dispatch and output writers.

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cp1/grafting.hpp"
#include "cp1/surface_group.hpp"

namespace cp1::cli {

enum ExitCode : int { kOk = 0, kViolations = 1, kInvalid = 2, kNumeric = 3 };

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoopConfig {
  std::size_t count = 50;
  double margin = 0.05;
  int vertices = 48;
  int limit_depth = 6;
  std::vector<std::vector<PointCP1>> explicit_loops;
};

struct RunConfig {
  FNCoordinates fn;
  WeightedMulticurve multicurve;
  int depth = 8;
  double atlas_radius = 0.0;  // 0: automatic
  std::uint64_t seed = 1;
  Tolerances tol;

  // Domain for stratification, dome-measure and export dome.
  std::vector<PointCP1> ideal_points;
  std::vector<cplx> polygon;
  std::size_t samples = 500;
  double sample_box = 3.0;

  LoopConfig loops;
  double pleat_radius = 2.0;
  int pleat_sides = 96;
  int limit_depth = 6;
  bool limit_grafted = true;
  int holonomy_radius = 1;
  int measure_levels = 16;

  std::map<std::string, std::string> outputs;
};

/// "2*pi", "2pi", "pi/2", "3/4*pi", "1.5" (radians). Weights must be positive.
Weight parse_weight(const std::string& text);
RunConfig parse_config(const std::string& json_text);

/// Full command line, argv[0] included; returns the exit code.
int run(int argc, const char* const* argv);

}  // namespace cp1::cli
