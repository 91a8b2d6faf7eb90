#pragma once

#include <string>
#include <vector>

#include "painleve/integrator.hpp"

namespace painleve {

// A named initial-value problem integrated over [t_lo, t_hi]; init.t may be
// interior, in which case the run is two-sided.
struct FixtureProblem {
  std::string id;
  ModelPoint init;
  double t_lo = 0.0;
  double t_hi = 1.0;

  // Endpoints other than init.t (where oracle references are taken).
  std::vector<double> endpoints() const;
};

namespace fixtures {

// XX' runs lifted from XX data (t0, S0, S0'):
//   xx_pos   (0, 1, 0)     over [0, 1]
//   xx_steep (0, 1, 2)     over [-1, 0]  (forward run blows up near 0.984)
//   xx_touch (-1, 0.5, -1) over [-1, 0]  (isolated positive zero near -0.0466)
//   xx_neg   (0, -1, 0)    over [0, 1]   (strictly negative)
std::vector<FixtureProblem> conservation();

FixtureProblem xx_pos();
FixtureProblem xx_touch();
FixtureProblem xx_neg();

// The same data as xx_pos, integrated as XX rather than XX'.
FixtureProblem xx_pos_unlifted();

// PII0 with s(0) = 0, s'(0) = 1 over [-1, 1]; single zero at 0.
FixtureProblem pii0_crossing();
// PII0 with s(0) = 0, s'(0) = 1 over [0, 1].
FixtureProblem pii0_forward();
// PII0 with s(0) = 1, s'(0) = 0 over [0, 1]; nowhere zero.
FixtureProblem pii0_nowhere_zero();

// XX' started at an isolated zero a = 0 with S''(0) = +2 or -2, over
// [-1, 1]. The +2 run is the square of pii0_crossing.
FixtureProblem zero_positive();
FixtureProblem zero_negative();

std::vector<FixtureProblem> all();

}  // namespace fixtures

IntegrationResult run_fixture(const FixtureProblem& problem,
                              const ToleranceConfig& tol = {},
                              std::span<const EventSpec> events = {});

}  // namespace painleve
