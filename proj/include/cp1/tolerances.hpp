#pragma once

#include <string>

namespace cp1 {

// Numerical tolerances shared by all modules. Defaults are sized for
// double precision and group words of length <= 12.
struct Tolerances {
  double alg = 1e-10;      // algebraic residuals (det, matrix identities)
  double geo = 1e-7;       // geometric coincidence
  double cls = 1e-8;       // parabolic band around tr^2 = 4
  double rep = 1e-8;       // representation relation residual
  double contact = 1e-6;   // ideal-point contact band, relative to radius
  double measure = 1e-5;   // transverse measure Cauchy stopping criterion

  // Applies "key=value"; returns false for an unknown key or bad value.
  bool set(const std::string& key, double value);
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

inline bool Tolerances::set(const std::string& key, double value) {
  if (!(value > 0.0)) return false;
  if (key == "alg") alg = value;
  else if (key == "geo") geo = value;
  else if (key == "class") cls = value;
  else if (key == "rep") rep = value;
  else if (key == "contact") contact = value;
  else if (key == "measure") measure = value;
  else return false;
  return true;
}

}  // namespace cp1
