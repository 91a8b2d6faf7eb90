#include <algorithm>
#include <set>
#include <vector>

#include "doctest.h"
#include "painleve/fixtures.hpp"
#include "painleve/verify.hpp"
#include "test_helpers.hpp"

using namespace painleve;
using painleve::testing::require_error;

namespace {

const VerificationReport& full_report() {
  static const VerificationReport r = run_suite("all");
  return r;
}

}  // namespace

TEST_SUITE("verify") {
  TEST_CASE("every built-in suite passes at default tolerances") {
    for (const auto& name : suite_names()) {
      const VerificationReport r = name == "all" ? full_report() : run_suite(name);
      CHECK_MESSAGE(r.overall, name);
      CHECK(r.suite == name);
      CHECK_FALSE(r.cases.empty());
      for (const auto& c : r.cases) CHECK_MESSAGE(c.pass, c.id << ": " << c.note);
    }
  }

  TEST_CASE("reports are sorted, complete and deterministic") {
    const VerificationReport& r = full_report();
    CHECK(std::is_sorted(r.cases.begin(), r.cases.end(),
                         [](const CaseResult& a, const CaseResult& b) {
                           return a.id < b.id;
                         }));
    std::set<TheoremTag> tags;
    for (const auto& c : r.cases) tags.insert(c.theorem);
    for (TheoremTag t : {TheoremTag::kXPrime, TheoremTag::kNe, TheoremTag::kNozero,
                         TheoremTag::kSquare, TheoremTag::kNotroot, TheoremTag::kRoot,
                         TheoremTag::kSigma, TheoremTag::kNoSignChange,
                         TheoremTag::kConservation}) {
      CHECK_MESSAGE(tags.count(t) == 1, to_string(t));
    }

    const VerificationReport again = run_suite("all");
    REQUIRE(again.cases.size() == r.cases.size());
    for (std::size_t k = 0; k < r.cases.size(); ++k) {
      CHECK(again.cases[k].id == r.cases[k].id);
      CHECK(again.cases[k].measured == r.cases[k].measured);
      CHECK(again.cases[k].pass == r.cases[k].pass);
    }
    CHECK(again.stats == r.stats);
  }

  TEST_CASE("overall is the conjunction of the cases") {
    ToleranceConfig loose;
    loose.rtol = loose.atol = 1e-4;
    const VerificationReport r = run_suite("theorems", loose);
    const bool all = std::all_of(r.cases.begin(), r.cases.end(),
                                 [](const CaseResult& c) { return c.pass; });
    CHECK(r.overall == all);
    CHECK_FALSE(r.overall);
    CHECK(r.tolerance == loose);
  }

  TEST_CASE("unknown suites are usage errors") {
    require_error(ErrorKind::kUsage, [] { run_suite("nonsense"); });
  }

  TEST_CASE("notroot is recorded as a pass when the error fires") {
    const auto& cases = full_report().cases;
    const auto it = std::find_if(cases.begin(), cases.end(), [](const CaseResult& c) {
      return c.id == "notroot.squared_crossing";
    });
    REQUIRE(it != cases.end());
    CHECK(it->theorem == TheoremTag::kNotroot);
    CHECK(it->pass);
  }

  TEST_CASE("residual examples") {
    const Trajectory zero = integrate({Model::kPii0, 0.0, {0, 0, 0}}, 1.0).trajectory;
    CHECK(residual(zero, Model::kPii0) == 0.0);

    const Trajectory pii0 = run_fixture(fixtures::pii0_crossing()).trajectory;
    CHECK(residual(pii0, Model::kPii0) <= 1e-6);

    const Trajectory sq = square_trajectory(pii0, 2001).to_trajectory();
    const auto zeros = locate_zeros(sq);
    REQUIRE(zeros.size() == 1);
    const SampledPath root = sqrt_signed(sq, zeros[0], 2001);
    CHECK(residual(root, Model::kPii0) <= 1e-6);

    // Near the flip point alone.
    std::vector<double> t;
    std::vector<StateVec> y;
    for (std::size_t k = 0; k < root.size(); ++k) {
      if (std::abs(root.t[k] - zeros[0].location) <= 0.02) {
        t.push_back(root.t[k]);
        y.push_back(root.y[k]);
      }
    }
    REQUIRE(t.size() >= kMinResidualSamples);
    CHECK(residual(t, y, Model::kPii0) <= 1e-6);

    const Trajectory xx = run_fixture(fixtures::xx_pos()).trajectory;
    CHECK(residual(xx, Model::kXxPrime) <= 1e-6);
    const Trajectory unlifted = run_fixture(fixtures::xx_pos_unlifted()).trajectory;
    CHECK(residual(unlifted, Model::kXx) <= 1e-6);
    CHECK(residual(unlifted, Model::kXxPrime) <= 1e-6);

    // A wrong model is not a small residual.
    CHECK(residual(pii0, Model::kSigma) > 1e-3);

    require_error(ErrorKind::kUsage, [&] {
      residual(std::span(t).first(7), std::span(y).first(7), Model::kPii0);
    });
  }

  TEST_CASE("the ensemble is reproducible and conserves C") {
    const VerificationReport a = run_ensemble(8, 42);
    const VerificationReport b = run_ensemble(8, 42);
    CHECK(a.overall);
    CHECK(a.cases.size() == 16);
    REQUIRE(a.cases.size() == b.cases.size());
    for (std::size_t k = 0; k < a.cases.size(); ++k) {
      CHECK(a.cases[k].id == b.cases[k].id);
      CHECK(a.cases[k].measured == b.cases[k].measured);
    }
    const VerificationReport c = run_ensemble(8, 43);
    bool differs = false;
    for (std::size_t k = 0; k < a.cases.size(); ++k) {
      differs = differs || a.cases[k].measured != c.cases[k].measured;
    }
    CHECK(differs);
    require_error(ErrorKind::kUsage, [] { run_ensemble(0, 1); });
  }
}
