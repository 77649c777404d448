#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace staticlab {

enum class ErrorCode {
  Domain,
  DegenerateMetric,
  Inconsistency,
  PotentialSign,
  Unsupported,
  Precondition,
  Parameter,
  Stiffness,
  Chart,
  Frame,
  Span,
  Parse,
  TraceCorruption,
  Initialization,
  Io,
};

std::string_view to_string(ErrorCode code);

// Every failure raised by the library carries a machine-readable code so the
// CLI can emit it as JSON.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised when the closed-form and finite-difference curvature paths disagree.
class InconsistencyError : public Error {
 public:
  InconsistencyError(const std::string& what, double closed_form, double finite_difference)
      : Error(ErrorCode::Inconsistency, what),
        closed_form_(closed_form),
        finite_difference_(finite_difference) {}
  double closed_form() const noexcept { return closed_form_; }
  double finite_difference() const noexcept { return finite_difference_; }

 private:
  double closed_form_;
  double finite_difference_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& what) {
  throw Error(code, what);
}

}  // namespace staticlab
