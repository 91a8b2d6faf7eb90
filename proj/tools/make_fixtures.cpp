// Generates oracle reference values for every fixture endpoint. Nothing is
// written unless each reference passes the self-consistency check.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>

#include "painleve/fixtures.hpp"
#include "painleve/io.hpp"
#include "painleve/verify.hpp"

using namespace painleve;

namespace {

constexpr double kStep = 1e-4;

json state_json(const StateVec& y, Model model) {
  json a = json::array();
  for (std::size_t i = 0; i < dimension(model); ++i) a.push_back(y[i]);
  return a;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: make_fixtures OUTPUT.json\n";
    return 2;
  }
  const std::filesystem::path out_path = argv[1];

  json refs = json::array();
  bool consistent = true;
  for (const auto& f : fixtures::all()) {
    for (double te : f.endpoints()) {
      const OracleReference ref = oracle_reference(f.init, te, kStep);
      std::printf("%-18s t=%+.3f agreement %.3e %s\n", f.id.c_str(), te,
                  ref.agreement, ref.accepted ? "ok" : "REJECTED");
      consistent = consistent && ref.accepted;
      refs.push_back({{"fixture", f.id},
                      {"model", to_string(f.init.model)},
                      {"t_init", f.init.t},
                      {"init", state_json(f.init.y, f.init.model)},
                      {"t_end", te},
                      {"value", state_json(ref.value, f.init.model)},
                      {"coarse", state_json(ref.coarse, f.init.model)},
                      {"agreement", ref.agreement}});
    }
  }
  if (!consistent) {
    std::cerr << "oracle references failed self-consistency; nothing written\n";
    return 1;
  }

  // Residual of the PII0 fixture path at default tolerances, kept for
  // comparison with the 1e-6 acceptance bound.
  const IntegrationResult run = run_fixture(fixtures::pii0_crossing());
  const double observed = residual(run.trajectory, Model::kPii0);
  std::printf("pii0 fixture path residual %.3e\n", observed);

  const json doc = {{"format_version", kFormatVersion},
                    {"kind", "oracle_references"},
                    {"step", kStep},
                    {"agreement_bound", kOracleAgreement},
                    {"references", refs},
                    {"observed_pii0_residual", observed}};
  std::filesystem::create_directories(out_path.parent_path());
  write_text_file(out_path.string(), doc.dump(2) + "\n");
  std::printf("wrote %zu references to %s\n", refs.size(),
              out_path.string().c_str());
  return 0;
}
