#pragma once

#include <stdexcept>
#include <string>

namespace cp1 {

// Failure categories; the CLI maps them onto exit codes.
enum class ErrorKind {
  DegenerateInput,   // coincident points, empty input
  Domain,            // input outside the operation's domain
  Precondition,      // caller-side contract violated (margins, configs)
  NoIntersection,    // circles disjoint or tangent
  LiftFailure,       // continuation left chart validity
  Numeric,           // residual or convergence failure
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) {
  throw Error(kind, what);
}

}  // namespace cp1
