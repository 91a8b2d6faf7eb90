#include "painleve/ode_models.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "painleve/errors.hpp"

namespace painleve {

namespace {

void require_finite(std::initializer_list<double> values, const char* what) {
  for (double v : values) {
    if (!std::isfinite(v)) {
      throw Error(ErrorKind::kInvalidState,
                  std::string(what) + ": non-finite state component");
    }
  }
}

}  // namespace

bool is_finite(const StateVec& y) {
  return std::all_of(y.begin(), y.end(),
                     [](double v) { return std::isfinite(v); });
}

std::pair<double, double> rhs_pii0(const Pii0State& state) {
  require_finite({state.t, state.s, state.s_dot}, "rhs_pii0");
  return {state.s_dot, kernel::pii0_accel(state.t, state.s)};
}

std::pair<double, double> rhs_xx(const XxState& state, double eta) {
  require_finite({state.t, state.S, state.S_dot}, "rhs_xx");
  const double guard = eta * std::max(1.0, state.S_dot * state.S_dot);
  if (std::abs(state.S) <= guard) {
    std::ostringstream msg;
    msg << "rhs_xx: |S| = " << std::abs(state.S) << " at t = " << state.t
        << " is within the singular threshold " << guard
        << "; integrate through zeros with the XX' lift instead";
    throw Error(ErrorKind::kNearSingular, msg.str());
  }
  return {state.S_dot, kernel::xx_accel(state.t, state.S, state.S_dot)};
}

std::array<double, 3> rhs_xxprime(const XxPrimeState& state) {
  require_finite({state.t, state.S, state.S_dot, state.S_ddot},
                 "rhs_xxprime");
  return {state.S_dot, state.S_ddot,
          kernel::xxprime_jerk(state.t, state.S, state.S_dot)};
}

XxPrimeState lift_xx_to_xxprime(const XxState& state,
                                std::optional<double> s_ddot_at_zero) {
  require_finite({state.t, state.S, state.S_dot}, "lift_xx_to_xxprime");
  if (state.S != 0.0) {
    if (s_ddot_at_zero) {
      throw Error(ErrorKind::kInconsistentData,
                  "lift_xx_to_xxprime: S''(a) may only be supplied at a zero "
                  "of S");
    }
    return {state.t, state.S, state.S_dot,
            kernel::xx_accel(state.t, state.S, state.S_dot)};
  }
  if (state.S_dot != 0.0) {
    throw Error(ErrorKind::kInconsistentData,
                "lift_xx_to_xxprime: S = 0 forces S' = 0 for solutions of XX");
  }
  if (!s_ddot_at_zero) {
    throw Error(ErrorKind::kInconsistentData,
                "lift_xx_to_xxprime: S = S' = 0 requires S''(a) to determine "
                "the solution");
  }
  require_finite({*s_ddot_at_zero}, "lift_xx_to_xxprime");
  if (*s_ddot_at_zero == 0.0) {
    throw Error(ErrorKind::kDegenerateZero,
                "lift_xx_to_xxprime: S = S' = S'' = 0 only admits S == 0; "
                "construct the zero solution explicitly");
  }
  return {state.t, 0.0, 0.0, *s_ddot_at_zero};
}

double invariant_c(const XxPrimeState& state) {
  require_finite({state.t, state.S, state.S_dot, state.S_ddot},
                 "invariant_c");
  return kernel::invariant_c(state);
}

double invariant_c_scale(const XxPrimeState& p) {
  return std::max({std::abs(2.0 * p.S * p.S_ddot), p.S_dot * p.S_dot,
                   std::abs(8.0 * p.S * p.S * p.S),
                   std::abs(4.0 * p.t * p.S * p.S)});
}

StateVec rhs(Model model, double t, const StateVec& y) {
  switch (model) {
    case Model::kPii0: {
      auto [d0, d1] = rhs_pii0({t, y[0], y[1]});
      return {d0, d1, 0.0};
    }
    case Model::kXx: {
      auto [d0, d1] = rhs_xx({t, y[0], y[1]});
      return {d0, d1, 0.0};
    }
    case Model::kXxPrime:
      return rhs_xxprime({t, y[0], y[1], y[2]});
    case Model::kSigma:
      require_finite({t, y[0], y[1]}, "rhs_sigma");
      return {y[1], kernel::sigma_accel(t, y[0]), 0.0};
  }
  throw Error(ErrorKind::kUsage, "rhs: unknown model");
}

StateVec rhs_jet(Model model, double t, const StateVec& y,
                  const StateVec& dy) {
  switch (model) {
    case Model::kPii0:
      return {dy[1], 6.0 * y[0] * y[0] * y[1] + y[0] + t * y[1], 0.0};
    case Model::kSigma:
      return {dy[1], y[0] + t * y[1] - 6.0 * y[0] * y[0] * y[1], 0.0};
    case Model::kXx: {
      const double S = y[0], S_dot = y[1], S_ddot = dy[1];
      return {S_ddot,
              S_dot * S_ddot / S - S_dot * S_dot * S_dot / (2.0 * S * S) +
                  8.0 * S * S_dot + 2.0 * S + 2.0 * t * S_dot,
              0.0};
    }
    case Model::kXxPrime: {
      const double S = y[0], S_dot = y[1], S_ddot = y[2];
      return {S_ddot, dy[2],
              12.0 * S_dot * S_dot + 12.0 * S * S_ddot + 6.0 * S_dot +
                  4.0 * t * S_ddot};
    }
  }
  throw Error(ErrorKind::kUsage, "rhs_jet: unknown model");
}

// Coefficients s_k of S(a + h) = sum s_k h^k. Matching powers of h in
// S''' = 12 S S' + 4 (a + h) S' + 2 S gives, for n >= 0,
//   (n+1)(n+2)(n+3) s_{n+3} = 12 sum_{i=0}^{n} s_i (n-i+1) s_{n-i+1}
//                             + 4 a (n+1) s_{n+1} + (4n + 2) s_n.
SeriesAtZero series_at_zero(double a, double c, int order) {
  require_finite({a, c}, "series_at_zero");
  if (c == 0.0) {
    throw Error(ErrorKind::kDegenerateZero,
                "series_at_zero: S''(a) = 0 only admits S == 0");
  }
  if (order < 4 || order > kMaxSeriesOrder) {
    throw Error(ErrorKind::kUsage, "series_at_zero: order must lie in [4, " +
                                       std::to_string(kMaxSeriesOrder) + "]");
  }
  std::vector<double> s(static_cast<std::size_t>(order) + 1, 0.0);
  s[2] = c / 2.0;
  for (int n = 0; n + 3 <= order; ++n) {
    double quad = 0.0;
    for (int i = 0; i <= n; ++i) {
      quad += s[i] * (n - i + 1) * s[n - i + 1];
    }
    const double rhs_n = 12.0 * quad + 4.0 * a * (n + 1) * s[n + 1] +
                         (4.0 * n + 2.0) * s[n];
    s[n + 3] = rhs_n / ((n + 1.0) * (n + 2.0) * (n + 3.0));
  }
  return {a, c, std::move(s)};
}

XxPrimeState SeriesAtZero::evaluate(double h) const {
  double v = 0.0, d1 = 0.0, d2 = 0.0;
  for (int k = order(); k >= 0; --k) {
    // Horner on the value and its first two derivatives together.
    d2 = d2 * h + 2.0 * d1;
    d1 = d1 * h + v;
    v = v * h + coeffs[k];
  }
  return {a + h, v, d1, d2};
}

}  // namespace painleve
