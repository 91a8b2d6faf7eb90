#include "painleve/transforms.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

void require_xx_type(const Trajectory& traj, const char* op) {
  if (!is_xx_type(traj.model())) {
    throw Error(ErrorKind::kUsage,
                std::string(op) + " needs an XX or XX' trajectory, got " +
                    std::string(to_string(traj.model())));
  }
}

XxPrimeState xx_jet(const Trajectory& traj, double t) {
  const StateVec y = traj.evaluate(t);
  if (traj.model() == Model::kXxPrime) return {t, y[0], y[1], y[2]};
  const double S_ddot = y[0] != 0.0 ? kernel::xx_accel(t, y[0], y[1])
                                    : traj.evaluate_derivative(t)[1];
  return {t, y[0], y[1], S_ddot};
}

[[noreturn]] void branch_violation(double t, double S, const char* what) {
  std::ostringstream msg;
  msg << what << ": S = " << S << " at t = " << t;
  throw BranchViolation(t, msg.str());
}

double zero_threshold(const Trajectory& traj) {
  return ZeroTolerances{}.zero * std::max(1.0, traj.sup_abs_value());
}

// Residual of "S'' - 2 r'^2 = 2 r accel(t, r)", i.e. the root equation
// multiplied through by 2r, normalized by its largest term. Stays bounded
// at zeros of the root where the unscaled form is 0/0.
double scaled_root_residual(double S_ddot, double r_dot, double two_r_accel) {
  const double lhs = S_ddot - 2.0 * r_dot * r_dot;
  const double norm = std::max({1.0, std::abs(S_ddot), 2.0 * r_dot * r_dot,
                                std::abs(two_r_accel)});
  return std::abs(lhs - two_r_accel) / norm;
}

std::vector<ZeroEvent> sorted_zeros(const Trajectory& traj,
                                    std::span<const ZeroEvent> zeros,
                                    bool want_positive, const char* op) {
  if (zeros.empty()) {
    throw Error(ErrorKind::kUsage, std::string(op) + ": no zero supplied");
  }
  std::vector<ZeroEvent> out(zeros.begin(), zeros.end());
  std::sort(out.begin(), out.end(), [](const ZeroEvent& a, const ZeroEvent& b) {
    return a.location < b.location;
  });
  for (const auto& z : out) {
    if (!traj.contains(z.location)) {
      std::ostringstream msg;
      msg << op << ": flip location " << z.location
          << " lies outside the trajectory span";
      throw Error(ErrorKind::kOutOfRange, msg.str());
    }
    const bool ok = want_positive ? z.second_derivative > 0.0
                                  : z.second_derivative < 0.0;
    if (!ok) {
      std::ostringstream msg;
      msg << op << ": S''(a) = " << z.second_derivative << " at a = "
          << z.location
          << (want_positive ? "; non-positive zeros need the negative branch"
                            : "; non-negative zeros need sqrt_signed");
      throw Error(ErrorKind::kWrongSign, msg.str());
    }
  }
  return out;
}

// Root of the (already sign-normalized) nonnegative data S at time t.
// `flips` are sorted zero locations; sign is -1 left of the first.
struct RootSample {
  double r;
  double r_dot;
  XxPrimeState jet;
};

RootSample signed_root_sample(const Trajectory& traj,
                              const std::vector<ZeroEvent>& zeros,
                              double t, bool negate, double sign_of_data,
                              double threshold, const char* op) {
  XxPrimeState jet = xx_jet(traj, t);
  jet.S *= sign_of_data;
  jet.S_dot *= sign_of_data;
  jet.S_ddot *= sign_of_data;
  const double global = negate ? -1.0 : 1.0;

  std::size_t left_of_t = 0;
  const ZeroEvent* nearest = &zeros.front();
  for (const auto& z : zeros) {
    if (z.location < t) ++left_of_t;
    if (std::abs(z.location - t) < std::abs(nearest->location - t)) nearest = &z;
  }
  auto sign_right_of = [&](const ZeroEvent& z) {
    const auto idx = static_cast<std::size_t>(&z - zeros.data());
    return (idx % 2 == 0 ? 1.0 : -1.0) * global;
  };

  for (const auto& z : zeros) {
    if (t == z.location) {
      const double c = sign_of_data * z.second_derivative;
      return {0.0, sign_right_of(z) * std::sqrt(0.5 * c), jet};
    }
  }
  if (jet.S < -threshold) branch_violation(t, sign_of_data * jet.S, op);
  const double S = std::max(jet.S, 0.0);
  const double sign = (left_of_t % 2 == 0 ? -1.0 : 1.0) * global;
  const double r = sign * std::sqrt(S);
  double r_dot;
  if (std::abs(r) > 1e-6 * std::sqrt(std::max(1.0, traj.sup_abs_value()))) {
    r_dot = jet.S_dot / (2.0 * r);
  } else {
    // Next to a zero use r'^2 = (S'' - 4 S^2 - 2 t S) / 2; r' keeps the
    // sign it has just right of the nearest zero.
    const double sq = 0.5 * (jet.S_ddot - 4.0 * S * S - 2.0 * t * S);
    r_dot = sign_right_of(*nearest) * std::sqrt(std::max(sq, 0.0));
  }
  return {r, r_dot, jet};
}

SampledPath signed_root_path(const Trajectory& traj,
                             const std::vector<ZeroEvent>& zeros, int samples,
                             bool negate, Model target, const char* op) {
  const double sign_of_data = target == Model::kSigma ? -1.0 : 1.0;
  const double threshold = zero_threshold(traj);
  SampledPath path;
  path.model = target;
  path.multi_zero_extension = zeros.size() > 1;
  std::vector<double> flips;
  for (const auto& z : zeros) flips.push_back(z.location);
  if (target == Model::kSigma) {
    path.branch = NegativeBranch{flips};
  } else {
    path.branch = SignedSqrtFlip{flips, negate};
  }
  for (double t : traj.uniform_times(samples)) {
    const RootSample rs =
        signed_root_sample(traj, zeros, t, negate, sign_of_data, threshold, op);
    const double accel = target == Model::kSigma
                             ? kernel::sigma_accel(t, rs.r)
                             : kernel::pii0_accel(t, rs.r);
    path.t.push_back(t);
    path.y.push_back({rs.r, rs.r_dot, accel});
    path.residual.push_back(
        scaled_root_residual(rs.jet.S_ddot, rs.r_dot, 2.0 * rs.r * accel));
  }
  return path;
}

}  // namespace

double SampledPath::max_residual() const {
  double m = 0.0;
  for (double r : residual) m = std::max(m, r);
  return m;
}

Trajectory SampledPath::to_trajectory() const {
  return Trajectory::from_samples(model, t, y);
}

SampledPath square_trajectory(const Trajectory& traj, int samples) {
  if (traj.model() != Model::kPii0) {
    throw Error(ErrorKind::kUsage, "square_trajectory needs a PII0 trajectory");
  }
  SampledPath path;
  path.model = Model::kXxPrime;
  for (double t : traj.uniform_times(samples)) {
    const StateVec y = traj.evaluate(t);
    const XxPrimeState sq = square_state(Pii0State{t, y[0], y[1]});
    path.t.push_back(t);
    path.y.push_back({sq.S, sq.S_dot, sq.S_ddot});
    path.residual.push_back(std::abs(invariant_c(sq)) /
                            std::max(1.0, invariant_c_scale(sq)));
  }
  return path;
}

SampledPath sqrt_positive(const Trajectory& traj, int samples) {
  require_xx_type(traj, "sqrt_positive");
  // The naive root fails at any zero, including touches between samples.
  for (const auto& z : locate_zeros(traj)) {
    branch_violation(z.location, z.value_abs,
                     "sqrt_positive: S touches zero; the positive root is not "
                     "a PII0 solution there (use sqrt_signed)");
  }
  SampledPath path;
  path.model = Model::kPii0;
  path.branch = PositiveSqrt{};
  for (double t : traj.uniform_times(samples)) {
    const XxPrimeState jet = xx_jet(traj, t);
    if (!(jet.S > 0.0)) {
      branch_violation(t, jet.S, "sqrt_positive: S must be strictly positive");
    }
    const double s = std::sqrt(jet.S);
    const double s_dot = jet.S_dot / (2.0 * s);
    const double accel = kernel::pii0_accel(t, s);
    path.t.push_back(t);
    path.y.push_back({s, s_dot, accel});
    path.residual.push_back(scaled_root_residual(jet.S_ddot, s_dot, 2.0 * s * accel));
  }
  return path;
}

SampledPath sqrt_signed(const Trajectory& traj, const ZeroEvent& zero,
                        int samples, bool negate) {
  return sqrt_signed(traj, std::span<const ZeroEvent>(&zero, 1), samples,
                     negate);
}

SampledPath sqrt_signed(const Trajectory& traj,
                        std::span<const ZeroEvent> zeros, int samples,
                        bool negate) {
  require_xx_type(traj, "sqrt_signed");
  const auto sorted = sorted_zeros(traj, zeros, true, "sqrt_signed");
  return signed_root_path(traj, sorted, samples, negate, Model::kPii0,
                          "sqrt_signed");
}

Pii0State signed_root_at(const Trajectory& traj,
                         std::span<const ZeroEvent> zeros, double t,
                         bool negate) {
  require_xx_type(traj, "signed_root_at");
  const auto sorted = sorted_zeros(traj, zeros, true, "signed_root_at");
  const RootSample rs = signed_root_sample(traj, sorted, t, negate, 1.0,
                                           zero_threshold(traj),
                                           "signed_root_at");
  return {t, rs.r, rs.r_dot};
}

SampledPath sqrt_negative(const Trajectory& traj, int samples) {
  require_xx_type(traj, "sqrt_negative");
  for (const auto& z : locate_zeros(traj)) {
    branch_violation(z.location, -z.value_abs,
                     "sqrt_negative: S touches zero; use sqrt_negative_signed");
  }
  SampledPath path;
  path.model = Model::kSigma;
  path.branch = NegativeBranch{};
  for (double t : traj.uniform_times(samples)) {
    const XxPrimeState jet = xx_jet(traj, t);
    if (!(jet.S < 0.0)) {
      branch_violation(t, jet.S, "sqrt_negative: S must be strictly negative");
    }
    const double sigma = std::sqrt(-jet.S);
    const double sigma_dot = -jet.S_dot / (2.0 * sigma);
    const double sigma_ddot =
        (-jet.S_ddot - 2.0 * sigma_dot * sigma_dot) / (2.0 * sigma);
    path.t.push_back(t);
    path.y.push_back({sigma, sigma_dot, sigma_ddot});
    path.residual.push_back(
        std::abs(sigma_ddot - kernel::sigma_accel(t, sigma)));
  }
  return path;
}

SampledPath sqrt_negative_signed(const Trajectory& traj,
                                 std::span<const ZeroEvent> zeros,
                                 int samples) {
  require_xx_type(traj, "sqrt_negative_signed");
  const auto sorted = sorted_zeros(traj, zeros, false, "sqrt_negative_signed");
  return signed_root_path(traj, sorted, samples, false, Model::kSigma,
                          "sqrt_negative_signed");
}

}  // namespace painleve
