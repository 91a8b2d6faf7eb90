#pragma once

#include <span>
#include <variant>
#include <vector>

#include "painleve/ode_models.hpp"
#include "painleve/trajectory.hpp"
#include "painleve/zero_analysis.hpp"

namespace painleve {

// Which square root produced a path.
struct PositiveSqrt {};
struct SignedSqrtFlip {
  std::vector<double> flips;  // zero locations where the sign flips
  bool negated = false;       // global negation (the mirrored solution)
};
struct NegativeBranch {
  std::vector<double> flips;  // nonempty for the sign-changing sigma
};
using BranchTag = std::variant<std::monostate, PositiveSqrt, SignedSqrtFlip,
                               NegativeBranch>;

// Pointwise transformed samples. For kPii0 / kSigma, y = (s, s', s''); for
// kXxPrime, y = (S, S', S''). residual holds the per-sample defect of the
// target equation (see each transform).
struct SampledPath {
  Model model = Model::kXxPrime;
  std::vector<double> t;
  std::vector<StateVec> y;
  std::vector<double> residual;
  BranchTag branch;
  // Set when the flip rule was applied at more than one zero.
  bool multi_zero_extension = false;

  std::size_t size() const { return t.size(); }
  double max_residual() const;
  // Quintic Hermite trajectory through the samples.
  Trajectory to_trajectory() const;
};

// S = s^2, S' = 2 s s', S'' = 2 s (2 s^3 + t s) + 2 s'^2.
template <class Real>
BasicXxPrimeState<Real> square_state(const BasicPii0State<Real>& p) {
  return {p.t, p.s * p.s, Real(2) * p.s * p.s_dot,
          Real(2) * p.s * kernel::pii0_accel(p.t, p.s) +
              Real(2) * p.s_dot * p.s_dot};
}

// Squares a PII0 trajectory at uniform dense samples. residual[k] is
// |C| / max(1, largest term of C).
SampledPath square_trajectory(const Trajectory& traj, int samples);

// s = +sqrt(S), s' = S' / (2 sqrt(S)) on a strictly positive XX-type
// trajectory. Throws BranchViolation at the first sample with S <= 0, or at
// any located touch of zero.
SampledPath sqrt_positive(const Trajectory& traj, int samples);

// Signed root through isolated zeros with S''(a) > 0: -sqrt(S) left of the
// first zero, alternating at each subsequent one (more than one zero sets
// multi_zero_extension). At a zero, s = 0 and s' = sqrt(S''(a) / 2).
// `negate` returns the mirrored solution.
SampledPath sqrt_signed(const Trajectory& traj, const ZeroEvent& zero,
                        int samples, bool negate = false);
SampledPath sqrt_signed(const Trajectory& traj,
                        std::span<const ZeroEvent> zeros, int samples,
                        bool negate = false);

// State of the signed root at a single time.
Pii0State signed_root_at(const Trajectory& traj,
                         std::span<const ZeroEvent> zeros, double t,
                         bool negate = false);

// sigma = sqrt(-S), sigma' = -S' / (2 sigma) on a strictly negative
// trajectory. residual[k] = |sigma'' - t sigma + 2 sigma^3| with
// sigma'' = (-S'' - 2 sigma'^2) / (2 sigma).
SampledPath sqrt_negative(const Trajectory& traj, int samples);

// Non-positive solution with isolated zeros (S''(a) < 0): negate, then take
// the signed root. The result is a sign-changing sigma path.
SampledPath sqrt_negative_signed(const Trajectory& traj,
                                 std::span<const ZeroEvent> zeros, int samples);

}  // namespace painleve
