#include "painleve/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "painleve/errors.hpp"
#include "painleve/fixtures.hpp"
#include "painleve/integrator.hpp"
#include "painleve/ode_models.hpp"
#include "painleve/zero_analysis.hpp"

namespace painleve {

std::string_view to_string(TheoremTag tag) {
  switch (tag) {
    case TheoremTag::kXPrime:
      return "X'";
    case TheoremTag::kNe:
      return "ne";
    case TheoremTag::kNozero:
      return "nozero";
    case TheoremTag::kSquare:
      return "square";
    case TheoremTag::kNotroot:
      return "notroot";
    case TheoremTag::kRoot:
      return "root";
    case TheoremTag::kSigma:
      return "sigma";
    case TheoremTag::kNoSignChange:
      return "no_sign_change";
    case TheoremTag::kConservation:
      return "conservation";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Finite-difference residuals

namespace {

// Three-point first and second derivatives on a possibly uneven grid.
double diff1(double h1, double h2, double f0, double f1, double f2) {
  return -h2 / (h1 * (h1 + h2)) * f0 + (h2 - h1) / (h1 * h2) * f1 +
         h1 / (h2 * (h1 + h2)) * f2;
}

double diff2(double h1, double h2, double f0, double f1, double f2) {
  return 2.0 * (f0 / (h1 * (h1 + h2)) - f1 / (h1 * h2) + f2 / (h2 * (h1 + h2)));
}

}  // namespace

double residual(std::span<const double> t, std::span<const StateVec> y,
                Model model) {
  if (t.size() != y.size() || t.size() < kMinResidualSamples) {
    throw Error(ErrorKind::kUsage, "residual: at least 8 samples are required");
  }
  const double h = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
  bool uniform = true;
  for (std::size_t i = 1; i < t.size(); ++i) {
    uniform &= std::abs((t[i] - t[i - 1]) - h) <= 1e-9 * std::abs(h);
  }
  // Five-point stencils on uniform grids, three-point otherwise.
  const std::size_t w = uniform ? 2 : 1;
  auto d1 = [&](std::size_t i, std::size_t c) {
    if (uniform) {
      return (y[i - 2][c] - 8.0 * y[i - 1][c] + 8.0 * y[i + 1][c] - y[i + 2][c]) /
             (12.0 * h);
    }
    return diff1(t[i] - t[i - 1], t[i + 1] - t[i], y[i - 1][c], y[i][c],
                 y[i + 1][c]);
  };
  auto d2 = [&](std::size_t i, std::size_t c) {
    if (uniform) {
      return (-y[i - 2][c] + 16.0 * y[i - 1][c] - 30.0 * y[i][c] +
              16.0 * y[i + 1][c] - y[i + 2][c]) /
             (12.0 * h * h);
    }
    return diff2(t[i] - t[i - 1], t[i + 1] - t[i], y[i - 1][c], y[i][c],
                 y[i + 1][c]);
  };

  double worst = 0.0;
  double rhs_sup = 0.0;
  for (std::size_t i = w; i + w < t.size(); ++i) {
    double defect = 0.0;
    switch (model) {
      case Model::kPii0:
      case Model::kSigma: {
        const double rhs = model == Model::kPii0
                               ? kernel::pii0_accel(t[i], y[i][0])
                               : kernel::sigma_accel(t[i], y[i][0]);
        rhs_sup = std::max(rhs_sup, std::abs(rhs));
        defect = std::abs(d2(i, 0) - rhs);
        break;
      }
      case Model::kXxPrime: {
        const double jerk = kernel::xxprime_jerk(t[i], y[i][0], y[i][1]);
        rhs_sup = std::max({rhs_sup, std::abs(jerk), std::abs(y[i][2])});
        defect = std::max(std::abs(d1(i, 1) - y[i][2]), std::abs(d1(i, 2) - jerk));
        break;
      }
      case Model::kXx: {
        if (y[i][0] == 0.0) continue;
        const double rhs = kernel::xx_accel(t[i], y[i][0], y[i][1]);
        rhs_sup = std::max(rhs_sup, std::abs(rhs));
        defect = std::abs(d1(i, 1) - rhs);
        break;
      }
    }
    worst = std::max(worst, defect);
  }
  return worst / std::max(1.0, rhs_sup);
}

double residual(const SampledPath& path, Model model) {
  return residual(path.t, path.y, model);
}

double residual(const Trajectory& traj, Model model, int samples) {
  if (samples < static_cast<int>(kMinResidualSamples)) {
    throw Error(ErrorKind::kUsage, "residual: at least 8 samples are required");
  }
  const std::vector<double> ts = traj.uniform_times(samples);
  std::vector<StateVec> ys;
  ys.reserve(ts.size());
  for (double t : ts) {
    StateVec y = traj.evaluate(t);
    if (traj.model() == Model::kXx) y[2] = kernel::xx_accel(t, y[0], y[1]);
    ys.push_back(y);
  }
  return residual(ts, ys, model);
}

// ---------------------------------------------------------------------------
// Suites

namespace {

constexpr int kPathSamples = 2001;
// Off the squared path's sample grid, so round trips exercise interpolation.
constexpr int kOffGridSamples = 1999;
constexpr int kConservationSamples = 100;
constexpr double kOracleStep = 1e-4;
constexpr double kEnsembleSpan = 0.5;

class Context {
 public:
  explicit Context(const ToleranceConfig& tol) : tol_(tol) {}

  const Trajectory& run(const FixtureProblem& problem) {
    auto it = runs_.find(problem.id);
    if (it == runs_.end()) {
      IntegrationResult r = run_fixture(problem, tol_);
      stats_ += r.trajectory.stats();
      it = runs_.emplace(problem.id, std::move(r.trajectory)).first;
    }
    return it->second;
  }

  // Square of the PII0 crossing fixture as a Hermite XX' trajectory.
  const Trajectory& squared_crossing() {
    if (!squared_) {
      squared_ = square_trajectory(run(fixtures::pii0_crossing()), kPathSamples)
                     .to_trajectory();
    }
    return *squared_;
  }

  ZeroEvent pii0_zero() {
    const auto zs = locate_zeros(run(fixtures::pii0_crossing()));
    if (zs.size() != 1) {
      throw Error(ErrorKind::kUsage, "expected one zero of the PII0 fixture");
    }
    return zs.front();
  }

  // (label, trajectory) for every XX-type fixture with an isolated zero.
  std::vector<std::pair<std::string, const Trajectory*>> zero_fixtures() {
    return {{"squared_crossing", &squared_crossing()},
            {"xx_touch", &run(fixtures::xx_touch())},
            {"zero_positive", &run(fixtures::zero_positive())},
            {"zero_negative", &run(fixtures::zero_negative())}};
  }

  std::vector<std::pair<std::string, const Trajectory*>> xx_fixtures() {
    auto out = zero_fixtures();
    for (const auto& f : fixtures::conservation()) {
      if (f.id != "xx_touch") out.emplace_back(f.id, &run(f));
    }
    return out;
  }

  void check(std::string id, TheoremTag tag, double threshold,
             Comparison cmp, const std::function<double()>& measure,
             std::string note = {}) {
    CaseResult c{std::move(id), tag, std::numeric_limits<double>::quiet_NaN(),
                 threshold, cmp, false, std::move(note)};
    try {
      c.measured = measure();
      c.pass = cmp == Comparison::kAtMost ? c.measured <= threshold
                                          : c.measured >= threshold;
    } catch (const std::exception& e) {
      c.note = e.what();
    }
    cases_.push_back(std::move(c));
  }

  // Passes iff `action` throws an Error of `kind`.
  void expect_error(std::string id, TheoremTag tag, ErrorKind kind,
                    const std::function<void()>& action) {
    check(std::move(id), tag, 1.0, Comparison::kAtLeast, [&] {
      try {
        action();
      } catch (const Error& e) {
        return e.kind() == kind ? 1.0 : 0.0;
      }
      return 0.0;
    });
  }

  void expect_true(std::string id, TheoremTag tag,
                   const std::function<bool()>& predicate) {
    check(std::move(id), tag, 1.0, Comparison::kAtLeast,
          [&] { return predicate() ? 1.0 : 0.0; });
  }

  const ToleranceConfig& tol() const { return tol_; }
  std::vector<CaseResult>& cases() { return cases_; }
  const StepStats& stats() const { return stats_; }

 private:
  ToleranceConfig tol_;
  std::map<std::string, Trajectory> runs_;
  std::optional<Trajectory> squared_;
  std::vector<CaseResult> cases_;
  StepStats stats_;
};

double sup_diff_value(const SampledPath& a, const Trajectory& ref) {
  double worst = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    worst = std::max(worst, std::abs(a.y[k][0] - ref.evaluate(a.t[k])[0]));
  }
  return worst;
}

double max_normalized_c(const Trajectory& traj, int samples) {
  double worst = 0.0;
  for (double t : traj.uniform_times(samples)) {
    const StateVec y = traj.evaluate(t);
    const XxPrimeState p{t, y[0], y[1], y[2]};
    worst = std::max(worst, std::abs(invariant_c(p)) /
                                std::max(1.0, invariant_c_scale(p)));
  }
  return worst;
}

double relative_inf_error(const StateVec& got, const StateVec& ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    num = std::max(num, std::abs(got[i] - ref[i]));
    den = std::max(den, std::abs(ref[i]));
  }
  return den > 0.0 ? num / den : num;
}

double ulps_between(double a, double b) {
  if (a == b) return 0.0;
  const double spacing =
      std::nextafter(std::max(std::abs(a), std::abs(b)),
                     std::numeric_limits<double>::infinity()) -
      std::max(std::abs(a), std::abs(b));
  return std::abs(a - b) / spacing;
}

// S = t^3 sampled on [-1, 1]: changes sign at a flat (degenerate) zero.
Trajectory sign_flip_counterexample() {
  std::vector<double> ts;
  std::vector<StateVec> ys;
  for (int k = 0; k <= 40; ++k) {
    const double t = -1.0 + k / 20.0;
    ts.push_back(t);
    ys.push_back({t * t * t, 3.0 * t * t, 6.0 * t});
  }
  return Trajectory::from_samples(Model::kXxPrime, ts, ys);
}

void zero_structure_cases(Context& ctx) {
  for (const auto& [label, traj] : ctx.zero_fixtures()) {
    const auto zeros = locate_zeros(*traj);
    ctx.expect_true("ne.zero_found." + label, TheoremTag::kNe,
                    [&] { return !zeros.empty(); });
    for (std::size_t i = 0; i < zeros.size(); ++i) {
      const ZeroEvent& z = zeros[i];
      const std::string tag = label + "#" + std::to_string(i);
      ctx.check("ne.sddot_nonzero." + tag, TheoremTag::kNe, 1e-6,
                Comparison::kAtLeast,
                [&] { return std::abs(z.second_derivative) / z.scale; });
      ctx.check("ne.sdot_at_zero." + tag, TheoremTag::kNe, 1e-7,
                Comparison::kAtMost,
                [&] { return std::abs(z.first_derivative) / z.scale; });
      ctx.expect_true("ne.isolated." + tag, TheoremTag::kNe, [&] {
        return z.classification == ZeroClass::kIsolatedPositive ||
               z.classification == ZeroClass::kIsolatedNegative;
      });
      ctx.check("xprime.jerk_at_zero." + tag, TheoremTag::kXPrime, 1e-7,
                Comparison::kAtMost,
                [&] { return std::abs(z.third_derivative) / z.scale; });
    }
  }
  ctx.expect_error("ne.degenerate_lift", TheoremTag::kNe,
                   ErrorKind::kDegenerateZero,
                   [] { lift_xx_to_xxprime({0.0, 0.0, 0.0}, 0.0); });
}

void no_sign_change_cases(Context& ctx) {
  for (const auto& [label, traj] : ctx.xx_fixtures()) {
    ctx.expect_true("no_sign_change." + label, TheoremTag::kNoSignChange, [&] {
      return check_no_sign_change(*traj, locate_zeros(*traj)).holds;
    });
  }
  ctx.expect_true("no_sign_change.checker_counterexample",
                  TheoremTag::kNoSignChange, [] {
                    const Trajectory flip = sign_flip_counterexample();
                    const auto report =
                        check_no_sign_change(flip, locate_zeros(flip));
                    return !report.holds && !report.violations.empty();
                  });
}

void root_roundtrip_cases(Context& ctx) {
  ctx.check("root.roundtrip", TheoremTag::kRoot, 1e-7, Comparison::kAtMost, [&] {
    const ZeroEvent z = locate_zeros(ctx.squared_crossing()).at(0);
    const SampledPath path =
        sqrt_signed(ctx.squared_crossing(), z, kOffGridSamples);
    return sup_diff_value(path, ctx.run(fixtures::pii0_crossing()));
  });
  ctx.check("root.roundtrip_mirrored", TheoremTag::kRoot, 1e-7,
            Comparison::kAtMost, [&] {
              const ZeroEvent z = locate_zeros(ctx.squared_crossing()).at(0);
              const SampledPath path =
                  sqrt_signed(ctx.squared_crossing(), z, kOffGridSamples, true);
              return sup_diff_value(
                  path, ctx.run(fixtures::pii0_crossing()).negated());
            });
  ctx.check("root.square_reproduces_S_ulps", TheoremTag::kRoot, 4.0,
            Comparison::kAtMost, [&] {
              const Trajectory& sq = ctx.squared_crossing();
              const ZeroEvent z = locate_zeros(sq).at(0);
              const SampledPath path = sqrt_signed(sq, z, kPathSamples);
              double worst = 0.0;
              for (std::size_t k = 0; k < path.size(); ++k) {
                const double S = sq.evaluate(path.t[k])[0];
                worst = std::max(worst,
                                 ulps_between(path.y[k][0] * path.y[k][0], S));
              }
              return worst;
            });
  ctx.check("root.single_sign_change", TheoremTag::kRoot, 0.0,
            Comparison::kAtMost, [&] {
              const ZeroEvent z = locate_zeros(ctx.squared_crossing()).at(0);
              const SampledPath path =
                  sqrt_signed(ctx.squared_crossing(), z, kPathSamples);
              int changes = 0;
              double prev = 0.0;
              for (const auto& y : path.y) {
                if (y[0] == 0.0) continue;
                if (prev != 0.0 && (prev < 0.0) != (y[0] < 0.0)) ++changes;
                prev = y[0];
              }
              return std::abs(changes - 1.0);
            });
  ctx.check("nozero.square_of_positive_root_ulps", TheoremTag::kNozero, 4.0,
            Comparison::kAtMost, [&] {
              const Trajectory& traj = ctx.run(fixtures::xx_pos());
              const SampledPath path = sqrt_positive(traj, kPathSamples);
              double worst = 0.0;
              for (std::size_t k = 0; k < path.size(); ++k) {
                const XxPrimeState back =
                    square_state(Pii0State{path.t[k], path.y[k][0], path.y[k][1]});
                const StateVec S = traj.evaluate(path.t[k]);
                worst = std::max({worst, ulps_between(back.S, S[0]),
                                  ulps_between(back.S_dot, S[1])});
              }
              return worst;
            });
}

void theorems_suite(Context& ctx) {
  ctx.check("xprime.xx_residual", TheoremTag::kXPrime, 1e-6,
            Comparison::kAtMost, [&] {
              return residual(ctx.run(fixtures::xx_pos_unlifted()),
                              Model::kXxPrime);
            });
  ctx.check("xprime.xx_vs_lift", TheoremTag::kXPrime, 1e-8,
            Comparison::kAtMost, [&] {
              const Trajectory& xx = ctx.run(fixtures::xx_pos_unlifted());
              const Trajectory& lifted = ctx.run(fixtures::xx_pos());
              const double scale = std::max(1.0, lifted.sup_abs_value());
              double worst = 0.0;
              for (double t : lifted.uniform_times(101)) {
                worst = std::max(worst, std::abs(xx.evaluate(t)[0] -
                                                  lifted.evaluate(t)[0]));
              }
              return worst / scale;
            });
  zero_structure_cases(ctx);

  ctx.check("nozero.square_c", TheoremTag::kNozero, 1e-9, Comparison::kAtMost,
            [&] {
              return square_trajectory(ctx.run(fixtures::pii0_nowhere_zero()),
                                       kPathSamples)
                  .max_residual();
            });
  ctx.check("nozero.positive_root_residual", TheoremTag::kNozero, 1e-6,
            Comparison::kAtMost, [&] {
              return residual(sqrt_positive(ctx.run(fixtures::xx_pos()),
                                            kPathSamples),
                              Model::kPii0);
            });

  ctx.check("square.c_pointwise", TheoremTag::kSquare, 1e-9,
            Comparison::kAtMost, [&] {
              return square_trajectory(ctx.run(fixtures::pii0_crossing()),
                                       kPathSamples)
                  .max_residual();
            });
  ctx.check("square.c_at_zero", TheoremTag::kSquare, 1e-9, Comparison::kAtMost,
            [&] {
              const ZeroEvent z = ctx.pii0_zero();
              const StateVec y = ctx.run(fixtures::pii0_crossing()).evaluate(z.location);
              const XxPrimeState sq = square_state(Pii0State{z.location, y[0], y[1]});
              return std::abs(invariant_c(sq)) /
                     std::max(1.0, invariant_c_scale(sq));
            });
  ctx.check("square.sddot_at_zero", TheoremTag::kSquare, 1e-5,
            Comparison::kAtMost, [&] {
              const ZeroEvent s_zero = ctx.pii0_zero();
              const ZeroEvent S_zero = locate_zeros(ctx.squared_crossing()).at(0);
              return std::abs(S_zero.second_derivative -
                              2.0 * s_zero.first_derivative *
                                  s_zero.first_derivative);
            });
  ctx.check("square.zero_count", TheoremTag::kSquare, 0.0, Comparison::kAtMost,
            [&] {
              const auto s_zeros = locate_zeros(ctx.run(fixtures::pii0_crossing()));
              const auto S_zeros = locate_zeros(ctx.squared_crossing());
              return std::abs(static_cast<double>(s_zeros.size()) -
                              static_cast<double>(S_zeros.size()));
            });
  ctx.check("square.matches_zero_start", TheoremTag::kSquare, 1e-8,
            Comparison::kAtMost, [&] {
              const Trajectory& direct = ctx.run(fixtures::zero_positive());
              const Trajectory& sq = ctx.squared_crossing();
              double worst = 0.0;
              for (double t : sq.uniform_times(201)) {
                worst = std::max(worst, std::abs(sq.evaluate(t)[0] -
                                                 direct.evaluate(t)[0]));
              }
              return worst;
            });

  ctx.expect_error("notroot.squared_crossing", TheoremTag::kNotroot,
                   ErrorKind::kBranchViolation,
                   [&] { sqrt_positive(ctx.squared_crossing(), kPathSamples); });
  ctx.expect_error("notroot.zero_positive", TheoremTag::kNotroot,
                   ErrorKind::kBranchViolation, [&] {
                     sqrt_positive(ctx.run(fixtures::zero_positive()),
                                   kPathSamples);
                   });

  root_roundtrip_cases(ctx);
  ctx.check("root.sdot_formula", TheoremTag::kRoot, 1e-7, Comparison::kAtMost,
            [&] {
              const Trajectory& sq = ctx.squared_crossing();
              const ZeroEvent z = locate_zeros(sq).at(0);
              const std::vector<ZeroEvent> zs{z};
              const Pii0State at = signed_root_at(sq, zs, z.location);
              const double S_ddot = sq.evaluate(z.location)[2];
              return std::abs(at.s_dot - std::sqrt(0.5 * S_ddot));
            });
  ctx.check("root.sdot_vs_pii0", TheoremTag::kRoot, 1e-7, Comparison::kAtMost,
            [&] {
              const Trajectory& sq = ctx.squared_crossing();
              const std::vector<ZeroEvent> zs{locate_zeros(sq).at(0)};
              const Pii0State at = signed_root_at(sq, zs, zs[0].location);
              return std::abs(at.s_dot - ctx.pii0_zero().first_derivative);
            });
  ctx.check("root.residual", TheoremTag::kRoot, 1e-6, Comparison::kAtMost, [&] {
    const ZeroEvent z = locate_zeros(ctx.squared_crossing()).at(0);
    return residual(sqrt_signed(ctx.squared_crossing(), z, kPathSamples),
                    Model::kPii0);
  });
  ctx.check("root.from_zero_start", TheoremTag::kRoot, 1e-7,
            Comparison::kAtMost, [&] {
              const Trajectory& direct = ctx.run(fixtures::zero_positive());
              const ZeroEvent z = locate_zeros(direct).at(0);
              return sup_diff_value(sqrt_signed(direct, z, kPathSamples),
                                    ctx.run(fixtures::pii0_crossing()));
            });

  ctx.check("sigma.residual", TheoremTag::kSigma, 1e-8, Comparison::kAtMost,
            [&] {
              return sqrt_negative(ctx.run(fixtures::xx_neg()), kPathSamples)
                  .max_residual();
            });
  no_sign_change_cases(ctx);
}

void conservation_suite(Context& ctx) {
  std::vector<FixtureProblem> conserved = fixtures::conservation();
  conserved.push_back(fixtures::zero_positive());
  conserved.push_back(fixtures::zero_negative());
  for (const auto& f : conserved) {
    ctx.check("conservation." + f.id, TheoremTag::kConservation, 1e-8,
              Comparison::kAtMost,
              [&] { return max_normalized_c(ctx.run(f), kConservationSamples); });
  }
  for (const auto& f : fixtures::all()) {
    for (double te : f.endpoints()) {
      const std::string where = f.id + "@" + (te < f.init.t ? "lo" : "hi");
      const OracleReference ref = oracle_reference(f.init, te, kOracleStep);
      ctx.check("oracle_self." + where, TheoremTag::kConservation,
                kOracleAgreement, Comparison::kAtMost,
                [&] { return ref.agreement; });
      ctx.check("oracle." + where, TheoremTag::kConservation, 1e-8,
                Comparison::kAtMost, [&] {
                  if (!ref.accepted) {
                    throw Error(ErrorKind::kUsage,
                                "oracle reference not self-consistent");
                  }
                  return relative_inf_error(ctx.run(f).evaluate(te), ref.value);
                });
    }
  }
}

void roundtrip_suite(Context& ctx) { root_roundtrip_cases(ctx); }

void negative_branch_suite(Context& ctx) {
  ctx.check("sigma.residual", TheoremTag::kSigma, 1e-8, Comparison::kAtMost,
            [&] {
              return sqrt_negative(ctx.run(fixtures::xx_neg()), kPathSamples)
                  .max_residual();
            });
  ctx.check("sigma.residual_fd", TheoremTag::kSigma, 1e-6, Comparison::kAtMost,
            [&] {
              return residual(sqrt_negative(ctx.run(fixtures::xx_neg()),
                                            kPathSamples),
                              Model::kSigma);
            });
  ctx.check("sigma.signed_residual_fd", TheoremTag::kSigma, 1e-6,
            Comparison::kAtMost, [&] {
              const Trajectory& traj = ctx.run(fixtures::zero_negative());
              return residual(
                  sqrt_negative_signed(traj, locate_zeros(traj), kPathSamples),
                  Model::kSigma);
            });
  // sigma(0) = 0, sigma'(0) = sqrt(-S''(0) / 2) = 1, integrated directly.
  ctx.check("sigma.signed_vs_oracle", TheoremTag::kSigma, 1e-8,
            Comparison::kAtMost, [&] {
              const Trajectory& traj = ctx.run(fixtures::zero_negative());
              const SampledPath path =
                  sqrt_negative_signed(traj, locate_zeros(traj), kPathSamples);
              const ModelPoint start{Model::kSigma, 0.0, {0.0, 1.0, 0.0}};
              double worst = 0.0;
              for (std::size_t k : {std::size_t{0}, path.size() - 1}) {
                const OracleReference ref =
                    oracle_reference(start, path.t[k], kOracleStep);
                worst = std::max(worst, relative_inf_error(
                                            {path.y[k][0], path.y[k][1], 0.0},
                                            ref.value));
              }
              return worst;
            });
  for (const auto& f : {fixtures::xx_neg(), fixtures::zero_negative()}) {
    ctx.expect_true("no_sign_change." + f.id, TheoremTag::kNoSignChange, [&] {
      const Trajectory& traj = ctx.run(f);
      return check_no_sign_change(traj, locate_zeros(traj)).holds;
    });
  }
}

VerificationReport assemble(std::string name, const ToleranceConfig& config,
                            Context& ctx) {
  VerificationReport report;
  report.suite = std::move(name);
  report.tolerance = config;
  report.stats = ctx.stats();
  std::set<std::string> seen;
  for (auto& c : ctx.cases()) {
    if (seen.insert(c.id).second) report.cases.push_back(std::move(c));
  }
  std::sort(report.cases.begin(), report.cases.end(),
            [](const CaseResult& a, const CaseResult& b) { return a.id < b.id; });
  report.overall = std::all_of(report.cases.begin(), report.cases.end(),
                               [](const CaseResult& c) { return c.pass; });
  return report;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{
      "theorems", "conservation", "roundtrip", "negative_branch", "all"};
  return names;
}

VerificationReport run_suite(std::string_view name,
                             const ToleranceConfig& config) {
  config.validate();
  const auto& names = suite_names();
  if (std::find(names.begin(), names.end(), name) == names.end()) {
    throw Error(ErrorKind::kUsage, "unknown suite '" + std::string(name) + "'");
  }
  Context ctx(config);
  const bool all = name == "all";
  if (all || name == "theorems") theorems_suite(ctx);
  if (all || name == "conservation") conservation_suite(ctx);
  if (all || name == "roundtrip") roundtrip_suite(ctx);
  if (all || name == "negative_branch") negative_branch_suite(ctx);
  return assemble(std::string(name), config, ctx);
}

VerificationReport run_ensemble(int count, std::uint64_t seed,
                                const ToleranceConfig& config) {
  config.validate();
  if (count < 1) throw Error(ErrorKind::kUsage, "ensemble size must be >= 1");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> t0_dist(-1.0, 0.0);
  std::uniform_real_distribution<double> mag_dist(0.25, 1.0);
  std::uniform_real_distribution<double> slope_dist(-1.0, 1.0);
  std::bernoulli_distribution negative(0.5);
  Context ctx(config);
  for (int k = 0; k < count; ++k) {
    const double t0 = t0_dist(rng);
    const double S0 = negative(rng) ? -mag_dist(rng) : mag_dist(rng);
    const double S0_dot = slope_dist(rng);
    const ModelPoint init =
        ModelPoint::from(lift_xx_to_xxprime({t0, S0, S0_dot}));
    std::optional<Trajectory> traj;
    std::string note;
    try {
      traj = integrate(init, t0 + kEnsembleSpan, config).trajectory;
    } catch (const IntegrationAborted& e) {
      if (e.partial() && e.partial()->trajectory.nodes().size() >= 2) {
        traj = e.partial()->trajectory;
        note = "truncated at t = " + std::to_string(traj->t_end());
      }
    }
    char id[32];
    std::snprintf(id, sizeof id, "ensemble.%03d", k);
    if (!traj) {
      ctx.check(std::string(id) + ".conservation", TheoremTag::kConservation,
                1e-8, Comparison::kAtMost, [] {
                  throw Error(ErrorKind::kStepUnderflow,
                              "no step accepted before blow-up");
                  return 0.0;
                });
      continue;
    }
    ctx.check(std::string(id) + ".conservation", TheoremTag::kConservation,
              1e-8, Comparison::kAtMost,
              [&] { return max_normalized_c(*traj, kConservationSamples); },
              note);
    ctx.expect_true(std::string(id) + ".no_sign_change",
                    TheoremTag::kNoSignChange, [&] {
                      return check_no_sign_change(*traj, locate_zeros(*traj))
                          .holds;
                    });
  }
  return assemble("ensemble", config, ctx);
}

}  // namespace painleve
