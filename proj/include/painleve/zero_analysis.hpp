#pragma once

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/trajectory.hpp"

namespace painleve {

enum class ZeroClass {
  kIsolatedPositive,  // XX-type, S''(a) > 0: S touches zero from above
  kIsolatedNegative,  // XX-type, S''(a) < 0: S touches zero from below
  kSignChange,        // PII0-type with s'(a) != 0
  kDegenerateFlagged, // S''(a) (or s'(a)) unresolved from zero, or S == 0
};

std::string_view to_string(ZeroClass c);

// Thresholds are relative; each is multiplied by
// scale = max(1, sup |S|) of the trajectory under analysis.
struct ZeroTolerances {
  double zero = 1e-9;
  double deriv = 1e-7;
  double cls = 1e-6;
};

struct ZeroEvent {
  double location = 0.0;
  Model model = Model::kPii0;
  double value_abs = 0.0;          // |S(a)| or |s(a)| as measured
  double first_derivative = 0.0;   // S'(a) or s'(a)
  double second_derivative = 0.0;  // S''(a) or s''(a)
  double third_derivative = 0.0;   // S'''(a) from XX' at the event state
  double scale = 1.0;
  ZeroClass classification = ZeroClass::kDegenerateFlagged;
  // Set when the solution vanishes on the whole stretch [location, *].
  std::optional<double> extent_end;
};

// Finds zeros of s (PII0: sign changes) or S (XX-type: minima of |S| at
// sign changes of S', plus any sign changes of S itself).
std::vector<ZeroEvent> locate_zeros(const Trajectory& traj,
                                    const ZeroTolerances& tol = {});

// XX-type: sign of S''(a) against tol_class. PII0-type: sign_change iff
// |s'(a)| > tol_class. Anything else is degenerate_flagged.
ZeroClass classify_zero(const ZeroEvent& event, double tol_class);

struct SignGapViolation {
  double t_lo = 0.0;
  double t_hi = 0.0;
  std::string reason;
};

struct NoSignChangeReport {
  bool holds = true;
  std::vector<SignGapViolation> violations;
};

inline constexpr int kSignScanSamples = 64;

// Samples sign(S) at 64 interior points of every gap between consecutive
// events (and the two outer flanks). Holds iff the sign is constant within
// each gap and equal on both sides of every event.
NoSignChangeReport check_no_sign_change(const Trajectory& traj,
                                        std::span<const ZeroEvent> events,
                                        const ZeroTolerances& tol = {});

}  // namespace painleve
