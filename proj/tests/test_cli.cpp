#include <filesystem>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "painleve/cli.hpp"
#include "test_helpers.hpp"

using namespace painleve;
using namespace painleve::cli;
using painleve::testing::require_error;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

class TempDir {
 public:
  TempDir() : path_(std::filesystem::temp_directory_path() / "painleve_cli_test") {
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
  }
  ~TempDir() { std::filesystem::remove_all(path_); }
  std::string file(const std::string& name) const { return (path_ / name).string(); }

 private:
  std::filesystem::path path_;
};

}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("error kinds map to stable exit codes") {
    CHECK(exit_code_for(ErrorKind::kUsage) == 2);
    CHECK(exit_code_for(ErrorKind::kFormat) == 2);
    CHECK(exit_code_for(ErrorKind::kNearSingular) == 3);
    CHECK(exit_code_for(ErrorKind::kStepUnderflow) == 4);
    CHECK(exit_code_for(ErrorKind::kBudgetExceeded) == 4);
    CHECK(exit_code_for(ErrorKind::kBranchViolation) == 5);
    CHECK(exit_code_for(ErrorKind::kWrongSign) == 5);
  }

  TEST_CASE("integrate the zero solution") {
    const Outcome o = call({"integrate", "--model", "pii0", "--init", "0,0", "--t0",
                            "0", "--t1", "1", "--samples", "5"});
    CHECK(o.code == 0);
    CHECK(o.out == "t,s,s_dot\n0,0,0\n0.25,0,0\n0.5,0,0\n0.75,0,0\n1,0,0\n");
  }

  TEST_CASE("a near-singular XX start exits 3 and names the lift") {
    const Outcome o = call({"integrate", "--model", "xx", "--init", "0,1e-15",
                            "--t0", "0", "--t1", "1"});
    CHECK(o.code == 3);
    CHECK(o.err.find("lift") != std::string::npos);
  }

  TEST_CASE("XX' from an isolated zero runs on both sides") {
    const Outcome o = call({"integrate", "--model", "xxprime", "--init", "0.2,0,0",
                            "--sddot-at-zero", "2", "--t0", "-0.5", "--t1", "0.5",
                            "--format", "json"});
    REQUIRE(o.code == 0);
    const json j = json::parse(o.out);
    CHECK(j.at("t_start") == -0.5);
    CHECK(j.at("t_end") == 0.5);
    CHECK(j.at("termination") == "complete");
    for (const auto& row : j.at("rows")) CHECK(row[1].get<double>() >= -1e-12);

    CHECK(call({"integrate", "--model", "xxprime", "--init", "0.2,0,0",
                "--sddot-at-zero", "0", "--t0", "-0.5", "--t1", "0.5"})
              .code == 2);
    CHECK(call({"integrate", "--model", "pii0", "--init", "0,1",
                "--sddot-at-zero", "2"})
              .code == 2);
  }

  TEST_CASE("blow-up still writes the partial run and exits 4") {
    const Outcome o = call({"integrate", "--model", "pii0", "--init", "0,1", "--t0",
                            "0", "--t1", "2", "--format", "json"});
    CHECK(o.code == 4);
    const json j = json::parse(o.out);
    CHECK(j.at("termination") == "blow_up");
    CHECK(j.at("truncated") == true);
    CHECK(j.at("t_end").get<double>() < 1.74);
  }

  TEST_CASE("a step budget exits 4") {
    const Outcome o = call({"integrate", "--model", "pii0", "--init", "0,1",
                            "--max-steps", "3", "--format", "json"});
    CHECK(o.code == 4);
    CHECK(json::parse(o.out).at("termination") == "budget_exceeded");
  }

  TEST_CASE("usage errors exit 2") {
    CHECK(call({}).code == 2);
    CHECK(call({"integrate", "--model", "pvi", "--init", "0,0"}).code == 2);
    CHECK(call({"integrate", "--init", "0,0,0,0"}).code == 2);
    CHECK(call({"integrate", "--init", "0,0", "--format", "xml"}).code == 2);
    CHECK(call({"integrate", "--init", "0,0", "--rtol", "-1"}).code == 2);
    CHECK(call({"integrate", "--init", "0,0", "--events", "q-crosses-zero"}).code == 2);
    CHECK(call({"verify", "--suite", "nonsense"}).code == 2);
    CHECK(call({"transform", "--op", "square"}).code == 2);
    CHECK(call({"bogus"}).code == 2);
    CHECK(call({"integrate", "--help"}).code == 0);
  }

  TEST_CASE("square then signed root round-trips through files") {
    const TempDir dir;
    const std::string pii0 = dir.file("pii0.json");
    const std::string sq = dir.file("square.json");
    const std::string root = dir.file("root.json");
    REQUIRE(call({"integrate", "--model", "pii0", "--init", "0,0,1", "--t0", "-1",
                  "--t1", "1", "--format", "json", "--samples", "101", "--out", pii0})
                .code == 0);

    // The integrate output is accepted and re-emitted without loss.
    const json first = read_json_file(pii0);
    CHECK(trajectory_to_json(trajectory_from_json(first)) == first);

    REQUIRE(call({"transform", "--op", "square", "--in", pii0, "--samples", "2001",
                  "--format", "json", "--out", sq})
                .code == 0);
    CHECK(call({"transform", "--op", "sqrt-pos", "--in", sq}).code == 5);
    REQUIRE(call({"transform", "--op", "sqrt-signed", "--flip-at", "0", "--in", sq,
                  "--samples", "201", "--format", "json", "--out", root})
                .code == 0);

    const TrajectoryDocument orig = trajectory_from_json(first);
    const SampledPath path = path_from_json(read_json_file(root));
    REQUIRE(path.size() == 201);
    double worst = 0.0;
    for (std::size_t k = 0; k < path.size(); ++k) {
      worst = std::max(worst,
                       std::abs(path.y[k][0] - orig.trajectory.evaluate(path.t[k])[0]));
    }
    CHECK(worst <= 1e-7);

    const Outcome csv = call({"transform", "--op", "sqrt-signed", "--in", sq,
                              "--samples", "3", "--negate"});
    CHECK(csv.code == 0);
    CHECK(csv.out.rfind("t,s,s_dot,residual\n", 0) == 0);

    CHECK(call({"transform", "--op", "sqrt-signed", "--flip-at", "0.5", "--in", sq})
              .code == 2);
    CHECK(call({"transform", "--op", "sqrt-signed", "--flip-at", "7", "--in", sq})
              .code == 2);
    CHECK(call({"transform", "--op", "square", "--negate", "--in", pii0}).code == 2);

    const Outcome zeros = call({"zeros", "--in", sq});
    REQUIRE(zeros.code == 0);
    const json zj = json::parse(zeros.out);
    REQUIRE(zj.at("zeros").size() == 1);
    CHECK(zj.at("zeros")[0].at("classification") == "isolated_positive");
  }

  TEST_CASE("sqrt-neg on a positive input exits 5") {
    const TempDir dir;
    const std::string pos = dir.file("pos.json");
    REQUIRE(call({"integrate", "--model", "xxprime", "--lift", "--init", "0,1,0",
                  "--format", "json", "--out", pos})
                .code == 0);
    CHECK(call({"transform", "--op", "sqrt-neg", "--in", pos}).code == 5);
    CHECK(call({"transform", "--op", "sqrt-pos", "--in", pos}).code == 0);
  }

  TEST_CASE("verify exit codes") {
    const Outcome ok = call({"verify", "--suite", "negative_branch"});
    CHECK(ok.code == 0);
    const json j = json::parse(ok.out);
    CHECK(j.at("overall") == true);
    CHECK(j.at("suite") == "negative_branch");

    const Outcome loose = call({"verify", "--suite", "theorems", "--rtol", "1e-4",
                                "--atol", "1e-4"});
    CHECK(loose.code == 1);
    CHECK(loose.err.find("FAIL") != std::string::npos);

    CHECK(call({"verify", "--suite", "conservation", "--ensemble", "4"}).code == 0);
  }

  TEST_CASE("configs round-trip and flags override them") {
    RunConfig c;
    c.command = "integrate";
    c.model = "xxprime";
    c.init = {-1, 0.5, -1};
    c.t0 = -1;
    c.t1 = 0;
    c.lift = true;
    c.events = {"S-crosses-zero", "S_dot-crosses-zero:rising:terminal"};
    c.sddot_at_zero = std::nullopt;
    c.flip_at = 0.25;
    c.seed = 12345678901234ULL;
    c.rtol = 1e-9;
    c.format = "json";
    CHECK(config_from_json(json::parse(config_to_json(c).dump())) == c);
    CHECK(config_from_json({{"format_version", 1}, {"kind", "config"}}) == RunConfig{});
    require_error(ErrorKind::kFormat, [] { config_from_json(json::object()); });
    require_error(ErrorKind::kFormat,
                  [] { config_from_json({{"format_version", 1}, {"kind", "config"}, {"tolerance", 1}}); });

    const TempDir dir;
    const std::string cfg = dir.file("run.json");
    REQUIRE(call({"integrate", "--model", "pii0", "--init", "0,0", "--t1", "2",
                  "--samples", "3", "--save-config", cfg})
                .code == 0);
    const RunConfig saved = config_from_json(read_json_file(cfg));
    CHECK(saved.command == "integrate");
    CHECK(saved.t1 == 2.0);
    CHECK(saved.samples == 3);

    const Outcome replay = call({"integrate", "--config", cfg});
    CHECK(replay.code == 0);
    CHECK(replay.out == "t,s,s_dot\n0,0,0\n1,0,0\n2,0,0\n");

    const Outcome overlay = call({"integrate", "--config", cfg, "--samples", "2"});
    CHECK(overlay.out == "t,s,s_dot\n0,0,0\n2,0,0\n");

    CHECK(call({"verify", "--config", cfg}).code == 2);
  }
}
