#pragma once

#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "painleve/integrator.hpp"
#include "painleve/transforms.hpp"
#include "painleve/verify.hpp"
#include "painleve/zero_analysis.hpp"

namespace painleve {

using json = nlohmann::json;

inline constexpr int kFormatVersion = 1;

void to_json(json& j, const ToleranceConfig& tol);
void from_json(const json& j, ToleranceConfig& tol);
void to_json(json& j, const StepStats& stats);
void from_json(const json& j, StepStats& stats);
void to_json(json& j, const ZeroEvent& event);

// An event hit as written to disk.
struct EventRecord {
  std::string event;  // rendered EventSpec
  double t = 0.0;
  StateVec y{};
  std::string kind = "crossing";  // crossing | touch

  bool operator==(const EventRecord&) const = default;
};

std::vector<EventRecord> event_records(std::span<const EventHit> hits,
                                       std::span<const EventSpec> specs);

// How an integration run ended.
enum class Termination { kComplete, kTerminalEvent, kBlowUp, kBudget };

std::string_view to_string(Termination t);
Termination termination_from_string(std::string_view name);

// Everything needed to rebuild a trajectory, plus uniform samples for
// consumers that only want columns.
struct TrajectoryDocument {
  Trajectory trajectory;
  std::vector<EventRecord> events;
  Termination termination = Termination::kComplete;
  std::string message;  // abort reason when termination != kComplete
  int samples = 0;      // number of sample rows written; 0 writes none

  bool operator==(const TrajectoryDocument&) const = default;
};

// Column names without the leading "t": s,s_dot / S,S_dot[,S_ddot] /
// sigma,sigma_dot.
std::vector<std::string> state_columns(Model model);
std::string csv_header(Model model, bool with_residual);

json trajectory_to_json(const TrajectoryDocument& doc);
// Throws kFormat on malformed input or an unsupported format_version.
TrajectoryDocument trajectory_from_json(const json& j);

// Paths keep the full (y0, y1, y2) per row so they reload exactly.
json path_to_json(const SampledPath& path);
SampledPath path_from_json(const json& j);

json report_to_json(const VerificationReport& report);

json zeros_to_json(const std::vector<ZeroEvent>& zeros);

// Locale-independent shortest round-trip formatting.
std::string format_double(double v);

// Uniformly samples the trajectory and writes CSV with a header row.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          int samples);
// Path CSV: state columns then residual.
void write_path_csv(std::ostream& out, const SampledPath& path);

// Whole-file helpers; throw kFormat / kUsage on failure.
json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

}  // namespace painleve
