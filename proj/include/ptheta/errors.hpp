#pragma once

#include <stdexcept>
#include <string>

namespace ptheta {

enum class ErrorKind {
  domain,
  infeasible_tolerance,
  zero_divide,
  unresolved_bracket,
  count_mismatch,
  contour_too_close,
  contour_membership,
  step_underflow,
  seed_failure,
  indeterminate_sign,
  validation_failure,
  ambiguity,
};

inline const char* to_string(ErrorKind k) noexcept {
  switch (k) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::infeasible_tolerance: return "infeasible_tolerance";
    case ErrorKind::zero_divide: return "zero_divide";
    case ErrorKind::unresolved_bracket: return "unresolved_bracket";
    case ErrorKind::count_mismatch: return "count_mismatch";
    case ErrorKind::contour_too_close: return "contour_too_close";
    case ErrorKind::contour_membership: return "contour_membership";
    case ErrorKind::step_underflow: return "step_underflow";
    case ErrorKind::seed_failure: return "seed_failure";
    case ErrorKind::indeterminate_sign: return "indeterminate_sign";
    case ErrorKind::validation_failure: return "validation_failure";
    case ErrorKind::ambiguity: return "ambiguity";
  }
  return "unknown";
}

class NumericError : public std::runtime_error {
 public:
  NumericError(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Step underflow while tracking carries the parameter where progress stopped.
class StepUnderflow : public NumericError {
 public:
  StepUnderflow(double q_reached, const std::string& what)
      : NumericError(ErrorKind::step_underflow, what), q_reached_(q_reached) {}

  double q_reached() const noexcept { return q_reached_; }

 private:
  double q_reached_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw NumericError(kind, what); }

}  // namespace ptheta
