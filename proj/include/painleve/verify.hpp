#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/transforms.hpp"
#include "painleve/trajectory.hpp"

namespace painleve {

enum class TheoremTag {
  kXPrime,        // XX solutions satisfy XX'
  kNe,            // isolated zeros have S''(a) != 0
  kNozero,        // squares / positive roots away from zeros
  kSquare,        // squares through a zero of s
  kNotroot,       // the positive root fails at a zero
  kRoot,          // the signed root is a PII0 solution
  kSigma,         // negative branch
  kNoSignChange,  // XX solutions keep their sign through zeros
  kConservation,  // C is conserved along XX'
};

std::string_view to_string(TheoremTag tag);

enum class Comparison { kAtMost, kAtLeast };

struct CaseResult {
  std::string id;
  TheoremTag theorem = TheoremTag::kConservation;
  double measured = 0.0;
  double threshold = 0.0;
  Comparison comparison = Comparison::kAtMost;
  bool pass = false;
  std::string note;
};

struct VerificationReport {
  std::string suite;
  std::vector<CaseResult> cases;  // sorted by id
  ToleranceConfig tolerance;
  StepStats stats;
  bool overall = false;
};

// Built-in suites: theorems, conservation, roundtrip, negative_branch, and
// all (their union).
const std::vector<std::string>& suite_names();

// Throws kUsage for an unknown suite.
VerificationReport run_suite(std::string_view name,
                             const ToleranceConfig& config = {});

// Random lifted XX initial states (fixed seed) integrated over spans of
// length 0.5: conservation of C and the sign scan per member. Runs that
// blow up are checked on their partial trajectory. Not an acceptance gate.
VerificationReport run_ensemble(int count, std::uint64_t seed,
                                const ToleranceConfig& config = {});

inline constexpr std::size_t kMinResidualSamples = 8;

// Sup-norm defect of `model` on sampled data, normalized by
// max(1, sup |rhs|), using finite differences over the samples:
//   kPii0 / kSigma: second differences of y[0] against the equation;
//   kXxPrime: differences of y[1] against y[2] and of y[2] against XX';
//   kXx: differences of y[1] against the XX right side.
// Throws kUsage with fewer than 8 samples.
double residual(std::span<const double> t, std::span<const StateVec> y,
                Model model);
double residual(const SampledPath& path, Model model);

// Samples the trajectory uniformly first. For kXx trajectories checked
// against kXxPrime, y[2] is filled in from XX.
double residual(const Trajectory& traj, Model model, int samples = 2001);

}  // namespace painleve
