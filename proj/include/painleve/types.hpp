#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>

namespace painleve {

// Equation tags. kSigma is the negative-branch equation
// sigma'' = t*sigma - 2*sigma^3; it only appears on sampled paths.
enum class Model { kPii0, kXx, kXxPrime, kSigma };

std::string_view to_string(Model model);
Model model_from_string(std::string_view name);

// Number of state components carried by a model (excluding t).
constexpr std::size_t dimension(Model model) {
  return model == Model::kXxPrime ? 3 : 2;
}

constexpr bool is_xx_type(Model model) {
  return model == Model::kXx || model == Model::kXxPrime;
}

// Fixed-capacity state vector; unused trailing components are zero.
using StateVec = std::array<double, 3>;

// (t, s, s') on a PII0 trajectory.
template <class Real>
struct BasicPii0State {
  Real t{};
  Real s{};
  Real s_dot{};
};

// (t, S, S') for equation XX.
template <class Real>
struct BasicXxState {
  Real t{};
  Real S{};
  Real S_dot{};
};

// (t, S, S', S'') for the lifted third-order equation XX'.
template <class Real>
struct BasicXxPrimeState {
  Real t{};
  Real S{};
  Real S_dot{};
  Real S_ddot{};
};

using Pii0State = BasicPii0State<double>;
using XxState = BasicXxState<double>;
using XxPrimeState = BasicXxPrimeState<double>;

// Model-tagged point used by the integrator and serialization.
struct ModelPoint {
  Model model = Model::kPii0;
  double t = 0.0;
  StateVec y{};

  static ModelPoint from(const Pii0State& p) {
    return {Model::kPii0, p.t, {p.s, p.s_dot, 0.0}};
  }
  static ModelPoint from(const XxState& p) {
    return {Model::kXx, p.t, {p.S, p.S_dot, 0.0}};
  }
  static ModelPoint from(const XxPrimeState& p) {
    return {Model::kXxPrime, p.t, {p.S, p.S_dot, p.S_ddot}};
  }

  Pii0State as_pii0() const { return {t, y[0], y[1]}; }
  XxState as_xx() const { return {t, y[0], y[1]}; }
  XxPrimeState as_xxprime() const { return {t, y[0], y[1], y[2]}; }
};

}  // namespace painleve
