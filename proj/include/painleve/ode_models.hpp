#pragma once

#include <array>
#include <optional>
#include <utility>
#include <vector>

#include "painleve/types.hpp"

namespace painleve {

inline constexpr double kDefaultSingularEta = 1e-12;
inline constexpr int kMaxSeriesOrder = 12;

// Right sides written generically so that the algebra can be checked in
// exact rational arithmetic. These do no validation.
namespace kernel {

template <class Real>
Real pii0_accel(const Real& t, const Real& s) {
  return Real(2) * s * s * s + t * s;
}

template <class Real>
Real sigma_accel(const Real& t, const Real& sigma) {
  return t * sigma - Real(2) * sigma * sigma * sigma;
}

// Regular branch of XX; requires S != 0.
template <class Real>
Real xx_accel(const Real& t, const Real& S, const Real& S_dot) {
  return S_dot * S_dot / (Real(2) * S) + Real(4) * S * S + Real(2) * t * S;
}

template <class Real>
Real xxprime_jerk(const Real& t, const Real& S, const Real& S_dot) {
  return Real(12) * S * S_dot + Real(4) * t * S_dot + Real(2) * S;
}

// C = 2 S S'' - S'^2 - 8 S^3 - 4 t S^2. C == 0 is XX; C is conserved by XX'.
template <class Real>
Real invariant_c(const BasicXxPrimeState<Real>& p) {
  return Real(2) * p.S * p.S_ddot - p.S_dot * p.S_dot -
         Real(8) * p.S * p.S * p.S - Real(4) * p.t * p.S * p.S;
}

// dC/dt along an arbitrary (t, S, S', S'', S''') jet.
template <class Real>
Real invariant_c_rate(const BasicXxPrimeState<Real>& p, const Real& S_dddot) {
  return Real(2) * p.S_dot * p.S_ddot + Real(2) * p.S * S_dddot -
         Real(2) * p.S_dot * p.S_ddot - Real(24) * p.S * p.S * p.S_dot -
         Real(8) * p.t * p.S * p.S_dot - Real(4) * p.S * p.S;
}

}  // namespace kernel

// (s', s'') for PII0.
std::pair<double, double> rhs_pii0(const Pii0State& state);

// (S', S'') for XX. Throws kNearSingular when |S| <= eta * max(1, S'^2);
// such points must be handled through lift_xx_to_xxprime.
std::pair<double, double> rhs_xx(const XxState& state,
                                 double eta = kDefaultSingularEta);

// (S', S'', S''') for XX'. Polynomial, so defined on every finite input.
std::array<double, 3> rhs_xxprime(const XxPrimeState& state);

// Lifts XX data to XX' data. Away from zeros S'' comes from XX itself; at a
// zero (S = S' = 0) the caller supplies S''(a), which must be nonzero.
XxPrimeState lift_xx_to_xxprime(const XxState& state,
                                std::optional<double> s_ddot_at_zero = {});

double invariant_c(const XxPrimeState& state);

// Largest magnitude among the four terms of C; the natural scale against
// which |C| is judged.
double invariant_c_scale(const XxPrimeState& state);

// Model-dispatched derivative of a packed state. For kXx the guard uses
// kDefaultSingularEta.
StateVec rhs(Model model, double t, const StateVec& y);

// Second time derivative of a packed state along the flow, given
// dy = rhs(model, t, y). Used for C^2 dense output.
StateVec rhs_jet(Model model, double t, const StateVec& y, const StateVec& dy);

bool is_finite(const StateVec& y);

// Taylor expansion of the XX' solution through an isolated zero:
// S(a + h) = sum_k coeffs[k] h^k with S(a) = S'(a) = 0, S''(a) = c.
struct SeriesAtZero {
  double a = 0.0;
  double c = 0.0;
  std::vector<double> coeffs;

  int order() const { return static_cast<int>(coeffs.size()) - 1; }

  // (S, S', S'') of the truncated series at t = a + h.
  XxPrimeState evaluate(double h) const;
};

SeriesAtZero series_at_zero(double a, double c, int order = kMaxSeriesOrder);

}  // namespace painleve
