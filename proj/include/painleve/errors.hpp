#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace painleve {

enum class ErrorKind {
  kInvalidState,      // non-finite or otherwise malformed input state
  kNearSingular,      // XX evaluated too close to S = 0; use the XX' lift
  kInconsistentData,  // S = 0 with S' != 0, or conflicting lift arguments
  kDegenerateZero,    // S = S' = S'' = 0, the signature of S == 0
  kStepUnderflow,     // step size fell below h_min (blow-up or stiffness)
  kBudgetExceeded,    // max_steps exhausted
  kOutOfRange,        // dense evaluation outside the trajectory span
  kBranchViolation,   // square root taken on the wrong sign of S
  kWrongSign,         // signed root requested with S''(a) of the wrong sign
  kUsage,             // bad arguments or unknown identifiers
  kFormat,            // malformed trajectory or config file
};

std::string_view to_string(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by the square-root transforms; carries the offending time.
class BranchViolation : public Error {
 public:
  BranchViolation(double t, const std::string& message)
      : Error(ErrorKind::kBranchViolation, message), t_(t) {}

  double t() const noexcept { return t_; }

 private:
  double t_;
};

}  // namespace painleve
