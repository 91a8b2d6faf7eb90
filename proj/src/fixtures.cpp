#include "painleve/fixtures.hpp"

#include "painleve/ode_models.hpp"

namespace painleve {

std::vector<double> FixtureProblem::endpoints() const {
  std::vector<double> out;
  if (t_lo != init.t) out.push_back(t_lo);
  if (t_hi != init.t) out.push_back(t_hi);
  return out;
}

namespace fixtures {

namespace {

FixtureProblem lifted(std::string id, double t0, double S0, double S0_dot,
                      double t_lo, double t_hi) {
  const XxPrimeState p = lift_xx_to_xxprime({t0, S0, S0_dot});
  return {std::move(id), ModelPoint::from(p), t_lo, t_hi};
}

}  // namespace

FixtureProblem xx_pos() { return lifted("xx_pos", 0.0, 1.0, 0.0, 0.0, 1.0); }

FixtureProblem xx_touch() {
  return lifted("xx_touch", -1.0, 0.5, -1.0, -1.0, 0.0);
}

FixtureProblem xx_neg() { return lifted("xx_neg", 0.0, -1.0, 0.0, 0.0, 1.0); }

std::vector<FixtureProblem> conservation() {
  return {xx_pos(), lifted("xx_steep", 0.0, 1.0, 2.0, -1.0, 0.0), xx_touch(),
          xx_neg()};
}

FixtureProblem xx_pos_unlifted() {
  return {"xx_pos_unlifted", ModelPoint::from(XxState{0.0, 1.0, 0.0}), 0.0,
          1.0};
}

FixtureProblem pii0_crossing() {
  return {"pii0_crossing", ModelPoint::from(Pii0State{0.0, 0.0, 1.0}), -1.0,
          1.0};
}

FixtureProblem pii0_forward() {
  return {"pii0_forward", ModelPoint::from(Pii0State{0.0, 0.0, 1.0}), 0.0,
          1.0};
}

FixtureProblem pii0_nowhere_zero() {
  return {"pii0_nowhere_zero", ModelPoint::from(Pii0State{0.0, 1.0, 0.0}), 0.0,
          1.0};
}

FixtureProblem zero_positive() {
  return {"zero_positive",
          ModelPoint::from(lift_xx_to_xxprime({0.0, 0.0, 0.0}, 2.0)), -1.0,
          1.0};
}

FixtureProblem zero_negative() {
  return {"zero_negative",
          ModelPoint::from(lift_xx_to_xxprime({0.0, 0.0, 0.0}, -2.0)), -1.0,
          1.0};
}

std::vector<FixtureProblem> all() {
  std::vector<FixtureProblem> out = conservation();
  out.push_back(pii0_crossing());
  out.push_back(pii0_forward());
  out.push_back(pii0_nowhere_zero());
  out.push_back(zero_positive());
  out.push_back(zero_negative());
  return out;
}

}  // namespace fixtures

IntegrationResult run_fixture(const FixtureProblem& problem,
                              const ToleranceConfig& tol,
                              std::span<const EventSpec> events) {
  return integrate_span(problem.init, problem.t_lo, problem.t_hi, tol, events);
}

}  // namespace painleve
