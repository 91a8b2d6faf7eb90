#include <filesystem>
#include <locale>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "painleve/fixtures.hpp"
#include "painleve/io.hpp"
#include "test_helpers.hpp"

using namespace painleve;
using painleve::testing::require_error;

namespace {

struct CommaDecimal : std::numpunct<char> {
  char do_decimal_point() const override { return ','; }
  char do_thousands_sep() const override { return '.'; }
  std::string do_grouping() const override { return "\3"; }
};

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

std::size_t fields(const std::string& line) {
  return static_cast<std::size_t>(std::count(line.begin(), line.end(), ',')) + 1;
}

json reparse(const json& j) { return json::parse(j.dump()); }

}  // namespace

TEST_SUITE("io") {
  TEST_CASE("trajectory documents round-trip field for field") {
    const EventSpec ev = parse_event_spec("s-crosses-zero");
    const IntegrationResult run =
        integrate({Model::kPii0, -8.0, {0.0, 0.5, 0}}, -2.0, {}, {&ev, 1});
    TrajectoryDocument doc;
    doc.trajectory = run.trajectory;
    doc.events = event_records(run.hits, {&ev, 1});
    doc.samples = 21;
    REQUIRE(doc.events.size() == 4);

    const json j = trajectory_to_json(doc);
    CHECK(j.at("format_version") == kFormatVersion);
    CHECK(j.at("columns") == json::array({"t", "s", "s_dot"}));
    CHECK(j.at("rows").size() == 21);
    CHECK(j.at("termination") == "complete");

    const TrajectoryDocument back = trajectory_from_json(reparse(j));
    CHECK(back == doc);
    CHECK(trajectory_to_json(back) == j);
    for (double t : {-7.9, -5.123, -4.0, -2.01}) {
      CHECK(back.trajectory.evaluate(t) == run.trajectory.evaluate(t));
    }
  }

  TEST_CASE("truncated runs keep their termination and message") {
    TrajectoryDocument doc;
    try {
      integrate({Model::kPii0, 0.0, {0, 1, 0}}, 2.0);
      FAIL("expected blow-up");
    } catch (const IntegrationAborted& e) {
      REQUIRE(e.partial() != nullptr);
      doc.trajectory = e.partial()->trajectory;
      doc.termination = Termination::kBlowUp;
      doc.message = e.what();
    }
    const json j = trajectory_to_json(doc);
    CHECK(j.at("truncated") == true);
    CHECK(j.at("termination") == "blow_up");
    CHECK(trajectory_from_json(reparse(j)) == doc);
  }

  TEST_CASE("paths round-trip with their branch tag") {
    const Trajectory pii0 = run_fixture(fixtures::pii0_crossing()).trajectory;
    const Trajectory sq = square_trajectory(pii0, 401).to_trajectory();
    const auto zeros = locate_zeros(sq);
    for (const SampledPath& p :
         {square_trajectory(pii0, 51), sqrt_signed(sq, zeros, 51, true),
          sqrt_positive(run_fixture(fixtures::xx_pos()).trajectory, 51),
          sqrt_negative(run_fixture(fixtures::xx_neg()).trajectory, 51)}) {
      const json j = path_to_json(p);
      CHECK(j.at("rows").size() == 51);
      const SampledPath back = path_from_json(reparse(j));
      CHECK(back.model == p.model);
      CHECK(back.t == p.t);
      CHECK(back.y == p.y);
      CHECK(back.residual == p.residual);
      CHECK(back.branch.index() == p.branch.index());
      CHECK(path_to_json(back) == j);
    }
  }

  TEST_CASE("reports serialize every case") {
    const VerificationReport r = run_suite("negative_branch");
    const json j = report_to_json(r);
    CHECK(j.at("suite") == "negative_branch");
    CHECK(j.at("overall") == r.overall);
    REQUIRE(j.at("cases").size() == r.cases.size());
    for (std::size_t k = 0; k < r.cases.size(); ++k) {
      const json& c = j.at("cases")[k];
      CHECK(c.at("id") == r.cases[k].id);
      CHECK(c.at("theorem") == std::string(to_string(r.cases[k].theorem)));
      CHECK(c.at("pass") == r.cases[k].pass);
      CHECK(c.contains("measured"));
      CHECK(c.contains("threshold"));
    }
  }

  TEST_CASE("CSV headers are fixed") {
    CHECK(csv_header(Model::kPii0, false) == "t,s,s_dot");
    CHECK(csv_header(Model::kXxPrime, false) == "t,S,S_dot,S_ddot");
    CHECK(csv_header(Model::kXx, false) == "t,S,S_dot");
    CHECK(csv_header(Model::kPii0, true) == "t,s,s_dot,residual");
    CHECK(csv_header(Model::kXxPrime, true) == "t,S,S_dot,S_ddot,residual");
  }

  TEST_CASE("CSV output ignores the locale") {
    const std::locale saved = std::locale::global(
        std::locale(std::locale::classic(), new CommaDecimal));
    const Trajectory traj = run_fixture(fixtures::xx_pos()).trajectory;
    std::ostringstream out;
    out.imbue(std::locale());
    write_trajectory_csv(out, traj, 11);
    const std::string half = format_double(0.5);
    const std::string big = format_double(12345.25);
    std::locale::global(saved);

    CHECK(half == "0.5");
    CHECK(big == "12345.25");
    const auto rows = lines(out.str());
    REQUIRE(rows.size() == 12);
    CHECK(rows[0] == "t,S,S_dot,S_ddot");
    for (std::size_t k = 1; k < rows.size(); ++k) CHECK(fields(rows[k]) == 4);
    CHECK(rows[1].rfind("0,1,0,4", 0) == 0);

    std::ostringstream path_out;
    write_path_csv(path_out, sqrt_positive(traj, 5));
    const auto prow = lines(path_out.str());
    REQUIRE(prow.size() == 6);
    CHECK(prow[0] == "t,s,s_dot,residual");
    CHECK(fields(prow[3]) == 4);
  }

  TEST_CASE("format_double round-trips") {
    for (double v : {0.1, -1e-300, 1.0 / 3, 6.02214076e23, -0.0}) {
      CHECK(std::stod(format_double(v)) == v);
    }
  }

  TEST_CASE("malformed documents are format errors") {
    TrajectoryDocument doc;
    doc.trajectory = run_fixture(fixtures::xx_pos()).trajectory;
    const json good = trajectory_to_json(doc);

    json wrong_version = good;
    wrong_version["format_version"] = 2;
    require_error(ErrorKind::kFormat, [&] { trajectory_from_json(wrong_version); });

    json wrong_kind = good;
    wrong_kind["kind"] = "path";
    require_error(ErrorKind::kFormat, [&] { trajectory_from_json(wrong_kind); });

    json short_row = good;
    short_row["nodes"][0] = json::array({0.0, 1.0});
    require_error(ErrorKind::kFormat, [&] { trajectory_from_json(short_row); });

    json missing = good;
    missing.erase("segments");
    require_error(ErrorKind::kFormat, [&] { trajectory_from_json(missing); });

    json bad_model = good;
    bad_model["model"] = "pvi";
    require_error(ErrorKind::kFormat, [&] { trajectory_from_json(bad_model); });

    require_error(ErrorKind::kFormat, [] { trajectory_from_json(json::array()); });
    require_error(ErrorKind::kFormat, [&] { path_from_json(good); });
  }

  TEST_CASE("file helpers") {
    const auto dir = std::filesystem::temp_directory_path() / "painleve_io_test";
    std::filesystem::create_directories(dir);
    const std::string ok = (dir / "ok.json").string();
    const std::string bad = (dir / "bad.json").string();
    write_text_file(ok, "{\"a\": 1}\n");
    write_text_file(bad, "{\"a\": ");
    CHECK(read_json_file(ok).at("a") == 1);
    require_error(ErrorKind::kFormat, [&] { read_json_file(bad); });
    require_error(ErrorKind::kUsage,
                  [&] { read_json_file((dir / "missing.json").string()); });
    require_error(ErrorKind::kUsage,
                  [&] { write_text_file((dir / "no/such/dir.json").string(), "x"); });
    std::filesystem::remove_all(dir);
  }
}
