#include "painleve/types.hpp"

#include "painleve/errors.hpp"

namespace painleve {

std::string_view to_string(Model model) {
  switch (model) {
    case Model::kPii0:
      return "pii0";
    case Model::kXx:
      return "xx";
    case Model::kXxPrime:
      return "xxprime";
    case Model::kSigma:
      return "sigma";
  }
  return "unknown";
}

Model model_from_string(std::string_view name) {
  if (name == "pii0") return Model::kPii0;
  if (name == "xx") return Model::kXx;
  if (name == "xxprime") return Model::kXxPrime;
  if (name == "sigma") return Model::kSigma;
  throw Error(ErrorKind::kUsage, "unknown model '" + std::string(name) + "'");
}

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidState:
      return "invalid-state";
    case ErrorKind::kNearSingular:
      return "near-singular";
    case ErrorKind::kInconsistentData:
      return "inconsistent-data";
    case ErrorKind::kDegenerateZero:
      return "degenerate-zero";
    case ErrorKind::kStepUnderflow:
      return "step-underflow";
    case ErrorKind::kBudgetExceeded:
      return "budget-exceeded";
    case ErrorKind::kOutOfRange:
      return "out-of-range";
    case ErrorKind::kBranchViolation:
      return "branch-violation";
    case ErrorKind::kWrongSign:
      return "wrong-sign";
    case ErrorKind::kUsage:
      return "usage";
    case ErrorKind::kFormat:
      return "format";
  }
  return "unknown";
}

}  // namespace painleve
