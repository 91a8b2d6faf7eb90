#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <limits>
#include <random>
#include <variant>
#include <vector>

#include "doctest.h"
#include "painleve/fixtures.hpp"
#include "painleve/transforms.hpp"
#include "test_helpers.hpp"

using namespace painleve;
using painleve::testing::require_error;
using Rational = boost::multiprecision::cpp_rational;

namespace {

double ulp(double x) {
  x = std::abs(x);
  return std::nextafter(x, std::numeric_limits<double>::infinity()) - x;
}

struct Crossing {
  Trajectory pii0;
  Trajectory square;
  std::vector<ZeroEvent> zeros;
};

const Crossing& crossing() {
  static const Crossing c = [] {
    Crossing out;
    out.pii0 = run_fixture(fixtures::pii0_crossing()).trajectory;
    out.square = square_trajectory(out.pii0, 2001).to_trajectory();
    out.zeros = locate_zeros(out.square);
    return out;
  }();
  return c;
}

// S = (t + 2)^2 sampled on [-1, 1]; only used pointwise.
Trajectory shifted_parabola() {
  std::vector<double> t;
  std::vector<StateVec> y;
  for (int k = 0; k <= 20; ++k) {
    const double x = -1.0 + k / 10.0;
    t.push_back(x);
    y.push_back({(x + 2) * (x + 2), 2 * (x + 2), 2});
  }
  return Trajectory::from_samples(Model::kXxPrime, t, y);
}

int sign_changes(const SampledPath& path) {
  int changes = 0, last = 0;
  for (const auto& y : path.y) {
    const int s = y[0] > 0 ? 1 : (y[0] < 0 ? -1 : 0);
    if (s != 0 && last != 0 && s != last) ++changes;
    if (s != 0) last = s;
  }
  return changes;
}

}  // namespace

TEST_SUITE("transforms") {
  TEST_CASE("square_state examples") {
    const XxPrimeState a = square_state(Pii0State{0.7, 0.0, -1.5});
    CHECK(a.t == 0.7);
    CHECK(a.S == 0.0);
    CHECK(a.S_dot == 0.0);
    CHECK(a.S_ddot == 4.5);

    const XxPrimeState b = square_state(Pii0State{-2.0, 3.0, 0.0});
    CHECK(b.S == 9.0);
    CHECK(b.S_dot == 0.0);
    CHECK(b.S_ddot == 4 * 81.0 + 2 * -2.0 * 9.0);

    const XxPrimeState c = square_state(Pii0State{0.0, 1.0, 1.0});
    CHECK(c.S == 1.0);
    CHECK(c.S_dot == 2.0);
    CHECK(c.S_ddot == 6.0);
  }

  TEST_CASE("squares satisfy C = 0 exactly in rationals") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> num(-30, 30);
    std::uniform_int_distribution<int> den(1, 11);
    auto q = [&] { return Rational(num(rng), den(rng)); };
    for (int k = 0; k < 200; ++k) {
      const BasicPii0State<Rational> p{q(), q(), q()};
      CHECK(kernel::invariant_c(square_state(p)) == 0);
    }
  }

  TEST_CASE("square_trajectory of s == 0 and of the crossing fixture") {
    const Trajectory zero = integrate({Model::kPii0, 0.0, {0, 0, 0}}, 1.0).trajectory;
    const SampledPath z = square_trajectory(zero, 11);
    REQUIRE(z.size() == 11);
    for (const auto& y : z.y) CHECK(y == StateVec{0, 0, 0});

    const SampledPath sq = square_trajectory(crossing().pii0, 2001);
    CHECK(sq.model == Model::kXxPrime);
    CHECK(sq.max_residual() <= 1e-9);

    REQUIRE(crossing().zeros.size() == 1);
    const double a = crossing().zeros[0].location;
    const double s_dot = crossing().pii0.evaluate(a)[1];
    CHECK(std::abs(crossing().zeros[0].second_derivative - 2 * s_dot * s_dot) <= 1e-6);

    require_error(ErrorKind::kUsage, [] {
      square_trajectory(run_fixture(fixtures::xx_pos()).trajectory, 11);
    });
  }

  TEST_CASE("sqrt_positive examples") {
    const SampledPath p = sqrt_positive(run_fixture(fixtures::xx_pos()).trajectory, 11);
    CHECK(p.model == Model::kPii0);
    CHECK(std::holds_alternative<PositiveSqrt>(p.branch));
    CHECK(p.t[0] == 0.0);
    CHECK(p.y[0][0] == 1.0);
    CHECK(p.y[0][1] == 0.0);

    const SampledPath q = sqrt_positive(shifted_parabola(), 21);
    CHECK(q.t[10] == 0.0);
    CHECK(q.y[10][0] == 2.0);
    CHECK(q.y[10][1] == 1.0);
  }

  TEST_CASE("sqrt_positive refuses a touch of zero") {
    try {
      sqrt_positive(crossing().square, 2001);
      FAIL("no branch violation");
    } catch (const BranchViolation& e) {
      CHECK(std::abs(e.t()) <= 1e-9);
      CHECK(std::string(e.what()).find("t = ") != std::string::npos);
    }
    require_error(ErrorKind::kBranchViolation, [] {
      sqrt_positive(run_fixture(fixtures::xx_neg()).trajectory, 11);
    });
  }

  TEST_CASE("square after sqrt_positive is the identity to 4 ulps") {
    for (const auto& f : {fixtures::xx_pos(), fixtures::pii0_nowhere_zero()}) {
      Trajectory traj = run_fixture(f).trajectory;
      if (traj.model() == Model::kPii0) {
        traj = square_trajectory(traj, 501).to_trajectory();
      }
      const SampledPath root = sqrt_positive(traj, 501);
      for (std::size_t k = 0; k < root.size(); ++k) {
        const StateVec y = traj.evaluate(root.t[k]);
        const XxPrimeState back =
            square_state(Pii0State{root.t[k], root.y[k][0], root.y[k][1]});
        CHECK(std::abs(back.S - y[0]) <= 4 * ulp(y[0]));
        CHECK(std::abs(back.S_dot - y[1]) <= 4 * ulp(y[1]));
      }
    }
  }

  TEST_CASE("sqrt_signed recovers the crossing fixture") {
    const Crossing& c = crossing();
    const ZeroEvent& z = c.zeros.at(0);
    const SampledPath root = sqrt_signed(c.square, z, 2001);
    CHECK(root.model == Model::kPii0);
    CHECK_FALSE(root.multi_zero_extension);
    const auto& tag = std::get<SignedSqrtFlip>(root.branch);
    CHECK(tag.flips == std::vector<double>{z.location});
    CHECK_FALSE(tag.negated);

    double worst = 0.0;
    for (std::size_t k = 0; k < root.size(); ++k) {
      worst = std::max(worst, std::abs(root.y[k][0] - c.pii0.evaluate(root.t[k])[0]));
    }
    CHECK(worst <= 1e-7);
    CHECK(sign_changes(root) == 1);
    CHECK(root.max_residual() <= 1e-6);

    const Pii0State at = signed_root_at(c.square, c.zeros, z.location);
    CHECK(at.s == 0.0);
    CHECK(at.s_dot == std::sqrt(z.second_derivative / 2));
    CHECK(std::abs(at.s_dot - 1.0) <= 1e-7);
  }

  TEST_CASE("the signed root squares back to S") {
    const Crossing& c = crossing();
    const SampledPath root = sqrt_signed(c.square, c.zeros, 2001);
    for (std::size_t k = 0; k < root.size(); ++k) {
      if (root.t[k] == c.zeros[0].location) continue;
      const double S = std::max(c.square.evaluate(root.t[k])[0], 0.0);
      CHECK(std::abs(root.y[k][0] * root.y[k][0] - S) <= 4 * ulp(S));
    }
  }

  TEST_CASE("negate gives the mirrored solution") {
    const Crossing& c = crossing();
    const SampledPath plus = sqrt_signed(c.square, c.zeros, 401);
    const SampledPath minus = sqrt_signed(c.square, c.zeros, 401, true);
    CHECK(std::get<SignedSqrtFlip>(minus.branch).negated);
    for (std::size_t k = 0; k < plus.size(); ++k) {
      CHECK(minus.y[k][0] == -plus.y[k][0]);
      CHECK(minus.y[k][1] == -plus.y[k][1]);
    }
    const Pii0State at = signed_root_at(c.square, c.zeros, c.zeros[0].location, true);
    CHECK(at.s_dot < 0.0);
  }

  TEST_CASE("sqrt_signed errors") {
    const Trajectory neg = run_fixture(fixtures::zero_negative()).trajectory;
    const auto neg_zeros = locate_zeros(neg);
    REQUIRE(neg_zeros.size() == 1);
    require_error(ErrorKind::kWrongSign,
                  [&] { sqrt_signed(neg, neg_zeros[0], 101); });

    ZeroEvent outside = crossing().zeros.at(0);
    outside.location = 5.0;
    require_error(ErrorKind::kOutOfRange,
                  [&] { sqrt_signed(crossing().square, outside, 101); });

    ZeroEvent fake;
    fake.model = Model::kXxPrime;
    fake.location = 0.5;
    fake.second_derivative = 1.0;
    require_error(ErrorKind::kBranchViolation, [&] {
      sqrt_signed(run_fixture(fixtures::xx_neg()).trajectory, fake, 101);
    });
    require_error(ErrorKind::kUsage, [&] {
      sqrt_signed(crossing().square, std::span<const ZeroEvent>{}, 101);
    });
    require_error(ErrorKind::kUsage,
                  [&] { sqrt_signed(crossing().pii0, crossing().zeros, 101); });
  }

  TEST_CASE("several zeros flip in turn and are flagged") {
    const Trajectory pii0 =
        integrate({Model::kPii0, -8.0, {0.0, 0.5, 0}}, -2.0).trajectory;
    const Trajectory sq = square_trajectory(pii0, 6001).to_trajectory();
    const auto zeros = locate_zeros(sq);
    REQUIRE(zeros.size() == 5);
    const SampledPath root = sqrt_signed(sq, zeros, 3001);
    CHECK(root.multi_zero_extension);
    CHECK(std::get<SignedSqrtFlip>(root.branch).flips.size() == 5);
    CHECK(sign_changes(root) == 4);
    double worst = 0.0;
    for (std::size_t k = 0; k < root.size(); ++k) {
      worst = std::max(worst, std::abs(root.y[k][0] - pii0.evaluate(root.t[k])[0]));
    }
    CHECK(worst <= 1e-6);
  }

  TEST_CASE("sqrt_negative examples") {
    const Trajectory traj = run_fixture(fixtures::xx_neg()).trajectory;
    const SampledPath sigma = sqrt_negative(traj, 2001);
    CHECK(sigma.model == Model::kSigma);
    CHECK(std::holds_alternative<NegativeBranch>(sigma.branch));
    CHECK(sigma.y[0][0] == 1.0);
    CHECK(sigma.y[0][1] == 0.0);
    CHECK(sigma.y[0][2] == -2.0);
    CHECK(sigma.residual[0] == 0.0);
    CHECK(sigma.max_residual() <= 1e-8);

    for (std::size_t k = 0; k < sigma.size(); ++k) {
      const double s = sigma.y[k][0];
      const double lhs = sigma.y[k][2] - sigma.t[k] * s + 2 * s * s * s;
      CHECK(std::abs(lhs) <= 1e-8);
    }

    require_error(ErrorKind::kBranchViolation, [] {
      sqrt_negative(run_fixture(fixtures::xx_pos()).trajectory, 11);
    });
    require_error(ErrorKind::kBranchViolation, [] {
      sqrt_negative(run_fixture(fixtures::zero_negative()).trajectory, 11);
    });
  }

  TEST_CASE("the sigma residual scales with the input tolerance") {
    auto sup_residual = [](double tol) {
      ToleranceConfig cfg;
      cfg.rtol = cfg.atol = tol;
      return sqrt_negative(run_fixture(fixtures::xx_neg(), cfg).trajectory, 2001)
          .max_residual();
    };
    const double coarse = sup_residual(1e-6);
    const double fine = sup_residual(1e-8);
    const double ratio = coarse / fine;
    CHECK(ratio >= 20.0);
    CHECK(ratio <= 500.0);
  }

  TEST_CASE("sqrt_negative_signed through a negative zero") {
    const Trajectory traj = run_fixture(fixtures::zero_negative()).trajectory;
    const auto zeros = locate_zeros(traj);
    REQUIRE(zeros.size() == 1);
    const SampledPath sigma = sqrt_negative_signed(traj, zeros, 2001);
    CHECK(sigma.model == Model::kSigma);
    CHECK(std::get<NegativeBranch>(sigma.branch).flips.size() == 1);
    CHECK(sign_changes(sigma) == 1);
    CHECK(sigma.max_residual() <= 1e-6);

    require_error(ErrorKind::kWrongSign,
                  [&] { sqrt_negative_signed(crossing().square, crossing().zeros, 11); });
  }
}
