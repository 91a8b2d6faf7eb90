#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "painleve/errors.hpp"
#include "painleve/io.hpp"

namespace painleve::cli {

// Stable process exit codes.
enum ExitCode : int {
  kExitOk = 0,
  kExitVerifyFailed = 1,
  kExitUsage = 2,
  kExitNearSingular = 3,
  kExitBlowUp = 4,
  kExitBranch = 5,
};

int exit_code_for(ErrorKind kind);

// Parameters of one invocation. Fields not used by `command` keep their
// defaults.
struct RunConfig {
  std::string command;  // integrate | transform | verify | zeros

  // integrate
  std::string model = "pii0";
  std::vector<double> init;
  double t0 = 0.0;
  double t1 = 1.0;
  std::optional<double> sddot_at_zero;
  bool lift = false;
  std::vector<std::string> events;

  // transform / zeros
  std::string op;
  std::string in;
  std::optional<double> flip_at;
  bool negate = false;

  // verify
  std::string suite = "all";
  int ensemble = 0;
  std::uint64_t seed = 1;

  double rtol = 1e-10;
  double atol = 1e-10;
  std::int64_t max_steps = 1'000'000;
  int samples = 201;
  std::string format;  // csv or json; empty picks the command default
  std::string out;

  bool operator==(const RunConfig&) const = default;
};

json config_to_json(const RunConfig& config);
// Missing keys keep their defaults; unknown keys are a kFormat error.
RunConfig config_from_json(const json& j);

// Resolves --init for integrate: returns the initial point (lifted when
// requested) and throws kUsage on a bad value count.
ModelPoint initial_point(const RunConfig& config);

int cmd_integrate(const RunConfig& config, std::ostream& out,
                  std::ostream& err);
int cmd_transform(const RunConfig& config, std::ostream& out,
                  std::ostream& err);
int cmd_verify(const RunConfig& config, std::ostream& out, std::ostream& err);
int cmd_zeros(const RunConfig& config, std::ostream& out, std::ostream& err);

// Parses the command line and dispatches; args excludes the program name.
// Output goes to `out` unless --out names a file.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace painleve::cli
