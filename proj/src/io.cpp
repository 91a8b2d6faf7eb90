#include "painleve/io.hpp"

#include <charconv>
#include <fstream>
#include <ostream>
#include <sstream>

namespace painleve {

namespace {

[[noreturn]] void format_error(const std::string& what) {
  throw Error(ErrorKind::kFormat, what);
}

template <class F>
auto guarded(const char* what, F&& f) {
  try {
    return f();
  } catch (const json::exception& e) {
    format_error(std::string(what) + ": " + e.what());
  } catch (const Error& e) {
    // Bad identifiers or states inside a file are format problems.
    if (e.kind() != ErrorKind::kUsage && e.kind() != ErrorKind::kInvalidState) {
      throw;
    }
    format_error(std::string(what) + ": " + e.what());
  }
}

void require_version(const json& j, std::string_view kind) {
  if (!j.is_object()) format_error("expected a JSON object");
  if (j.value("format_version", 0) != kFormatVersion) {
    format_error("unsupported format_version (expected " +
                 std::to_string(kFormatVersion) + ")");
  }
  if (j.value("kind", std::string()) != kind) {
    format_error("expected a document of kind \"" + std::string(kind) + "\"");
  }
}

json state_row(double t, const StateVec& y, std::size_t dim) {
  json row = json::array({t});
  for (std::size_t i = 0; i < dim; ++i) row.push_back(y[i]);
  return row;
}

Node node_from_row(const json& row, std::size_t dim) {
  if (!row.is_array() || row.size() != dim + 1) {
    format_error("node rows need t plus " + std::to_string(dim) + " values");
  }
  Node n{row[0].get<double>(), {}};
  for (std::size_t i = 0; i < dim; ++i) n.y[i] = row[i + 1].get<double>();
  return n;
}

std::string_view to_string(HitKind kind) {
  return kind == HitKind::kTouch ? "touch" : "crossing";
}

std::vector<std::string> path_columns(Model model) {
  switch (model) {
    case Model::kPii0:
      return {"t", "s", "s_dot", "s_ddot", "residual"};
    case Model::kSigma:
      return {"t", "sigma", "sigma_dot", "sigma_ddot", "residual"};
    default:
      return {"t", "S", "S_dot", "S_ddot", "residual"};
  }
}

json branch_to_json(const BranchTag& tag) {
  struct Visitor {
    json operator()(std::monostate) const { return {{"kind", "none"}}; }
    json operator()(const PositiveSqrt&) const {
      return {{"kind", "positive_sqrt"}};
    }
    json operator()(const SignedSqrtFlip& b) const {
      return {{"kind", "signed_sqrt_flip"},
              {"flips", b.flips},
              {"negated", b.negated}};
    }
    json operator()(const NegativeBranch& b) const {
      return {{"kind", "negative_branch"}, {"flips", b.flips}};
    }
  };
  return std::visit(Visitor{}, tag);
}

BranchTag branch_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "none") return std::monostate{};
  if (kind == "positive_sqrt") return PositiveSqrt{};
  if (kind == "signed_sqrt_flip") {
    return SignedSqrtFlip{j.at("flips").get<std::vector<double>>(),
                          j.at("negated").get<bool>()};
  }
  if (kind == "negative_branch") {
    return NegativeBranch{j.at("flips").get<std::vector<double>>()};
  }
  format_error("unknown branch kind \"" + kind + "\"");
}

// JSON has no non-finite numbers; failed cases may measure NaN.
json finite_or_null(double v) {
  return std::isfinite(v) ? json(v) : json(nullptr);
}

}  // namespace

void to_json(json& j, const ToleranceConfig& tol) {
  j = {{"rtol", tol.rtol},
       {"atol", tol.atol},
       {"h_init", tol.h_init},
       {"h_min", tol.h_min},
       {"max_steps", tol.max_steps}};
}

void from_json(const json& j, ToleranceConfig& tol) {
  ToleranceConfig d;
  tol.rtol = j.value("rtol", d.rtol);
  tol.atol = j.value("atol", d.atol);
  tol.h_init = j.value("h_init", d.h_init);
  tol.h_min = j.value("h_min", d.h_min);
  tol.max_steps = j.value("max_steps", d.max_steps);
}

void to_json(json& j, const StepStats& stats) {
  j = {{"accepted", stats.accepted},
       {"rejected", stats.rejected},
       {"rhs_evaluations", stats.rhs_evaluations}};
}

void from_json(const json& j, StepStats& stats) {
  stats.accepted = j.at("accepted").get<std::int64_t>();
  stats.rejected = j.at("rejected").get<std::int64_t>();
  stats.rhs_evaluations = j.at("rhs_evaluations").get<std::int64_t>();
}

void to_json(json& j, const ZeroEvent& z) {
  j = {{"location", z.location},
       {"model", to_string(z.model)},
       {"value_abs", z.value_abs},
       {"first_derivative", z.first_derivative},
       {"second_derivative", z.second_derivative},
       {"third_derivative", z.third_derivative},
       {"scale", z.scale},
       {"classification", to_string(z.classification)}};
  if (z.extent_end) j["extent_end"] = *z.extent_end;
}

std::vector<EventRecord> event_records(std::span<const EventHit> hits,
                                       std::span<const EventSpec> specs) {
  std::vector<EventRecord> out;
  for (const auto& h : hits) {
    const std::string name =
        h.spec_index < specs.size() ? to_string(specs[h.spec_index]) : "";
    out.push_back({name, h.t, h.y, std::string(to_string(h.kind))});
  }
  return out;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::kComplete:
      return "complete";
    case Termination::kTerminalEvent:
      return "terminal_event";
    case Termination::kBlowUp:
      return "blow_up";
    case Termination::kBudget:
      return "budget_exceeded";
  }
  return "complete";
}

Termination termination_from_string(std::string_view name) {
  for (auto t : {Termination::kComplete, Termination::kTerminalEvent,
                 Termination::kBlowUp, Termination::kBudget}) {
    if (to_string(t) == name) return t;
  }
  format_error("unknown termination \"" + std::string(name) + "\"");
}

std::vector<std::string> state_columns(Model model) {
  switch (model) {
    case Model::kPii0:
      return {"s", "s_dot"};
    case Model::kXx:
      return {"S", "S_dot"};
    case Model::kXxPrime:
      return {"S", "S_dot", "S_ddot"};
    case Model::kSigma:
      return {"sigma", "sigma_dot"};
  }
  return {};
}

std::string csv_header(Model model, bool with_residual) {
  std::string h = "t";
  for (const auto& c : state_columns(model)) h += "," + c;
  if (with_residual) h += ",residual";
  return h;
}

json trajectory_to_json(const TrajectoryDocument& doc) {
  const Trajectory& traj = doc.trajectory;
  const std::size_t dim = dimension(traj.model());
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "trajectory";
  j["model"] = to_string(traj.model());
  j["t_start"] = traj.t_start();
  j["t_end"] = traj.t_end();
  j["tolerance"] = traj.tolerance();
  j["stats"] = traj.stats();
  j["truncated"] = traj.truncated();
  j["termination"] = to_string(doc.termination);
  if (!doc.message.empty()) j["message"] = doc.message;

  std::vector<std::string> columns{"t"};
  for (const auto& c : state_columns(traj.model())) columns.push_back(c);
  j["columns"] = columns;
  json rows = json::array();
  if (doc.samples > 0) {
    for (double t : traj.uniform_times(doc.samples)) {
      rows.push_back(state_row(t, traj.evaluate(t), dim));
    }
  }
  j["rows"] = std::move(rows);

  json events = json::array();
  for (const auto& e : doc.events) {
    events.push_back({{"event", e.event},
                      {"t", e.t},
                      {"state", state_row(e.t, e.y, dim)},
                      {"kind", e.kind}});
  }
  j["events"] = std::move(events);

  json nodes = json::array();
  for (const auto& n : traj.nodes()) nodes.push_back(state_row(n.t, n.y, dim));
  j["nodes"] = std::move(nodes);
  json segments = json::array();
  for (const auto& s : traj.segments()) {
    json coeffs = json::array();
    for (std::size_t i = 0; i < dim; ++i) coeffs.push_back(s.coeffs[i]);
    segments.push_back({{"t0", s.t0}, {"h", s.h}, {"coeffs", coeffs}});
  }
  j["segments"] = std::move(segments);
  return j;
}

TrajectoryDocument trajectory_from_json(const json& j) {
  require_version(j, "trajectory");
  return guarded("trajectory", [&] {
    const Model model = model_from_string(j.at("model").get<std::string>());
    const std::size_t dim = dimension(model);
    std::vector<Node> nodes;
    for (const auto& row : j.at("nodes")) nodes.push_back(node_from_row(row, dim));
    std::vector<DenseSegment> segments;
    for (const auto& s : j.at("segments")) {
      DenseSegment seg{s.at("t0").get<double>(), s.at("h").get<double>(), {}};
      const json& coeffs = s.at("coeffs");
      if (coeffs.size() != dim) format_error("segment coefficient count");
      for (std::size_t i = 0; i < dim; ++i) {
        seg.coeffs[i] = coeffs[i].get<std::vector<double>>();
      }
      segments.push_back(std::move(seg));
    }
    TrajectoryDocument doc;
    doc.trajectory = Trajectory(model, std::move(nodes), std::move(segments),
                                j.at("tolerance").get<ToleranceConfig>(),
                                j.at("stats").get<StepStats>(),
                                j.at("truncated").get<bool>());
    doc.termination =
        termination_from_string(j.value("termination", std::string("complete")));
    doc.message = j.value("message", std::string());
    doc.samples = static_cast<int>(j.at("rows").size());
    for (const auto& e : j.at("events")) {
      const Node n = node_from_row(e.at("state"), dim);
      doc.events.push_back({e.at("event").get<std::string>(),
                            e.at("t").get<double>(), n.y,
                            e.at("kind").get<std::string>()});
    }
    return doc;
  });
}

json path_to_json(const SampledPath& path) {
  json j;
  j["format_version"] = kFormatVersion;
  j["kind"] = "path";
  j["model"] = to_string(path.model);
  j["columns"] = path_columns(path.model);
  j["branch"] = branch_to_json(path.branch);
  j["multi_zero_extension"] = path.multi_zero_extension;
  j["max_residual"] = finite_or_null(path.max_residual());
  json rows = json::array();
  for (std::size_t k = 0; k < path.size(); ++k) {
    rows.push_back({path.t[k], path.y[k][0], path.y[k][1], path.y[k][2],
                    path.residual[k]});
  }
  j["rows"] = std::move(rows);
  return j;
}

SampledPath path_from_json(const json& j) {
  require_version(j, "path");
  return guarded("path", [&] {
    SampledPath p;
    p.model = model_from_string(j.at("model").get<std::string>());
    p.branch = branch_from_json(j.at("branch"));
    p.multi_zero_extension = j.at("multi_zero_extension").get<bool>();
    for (const auto& row : j.at("rows")) {
      if (row.size() != 5) format_error("path rows need 5 values");
      p.t.push_back(row[0].get<double>());
      p.y.push_back(
          {row[1].get<double>(), row[2].get<double>(), row[3].get<double>()});
      p.residual.push_back(row[4].get<double>());
    }
    return p;
  });
}

json report_to_json(const VerificationReport& report) {
  json cases = json::array();
  for (const auto& c : report.cases) {
    json jc = {{"id", c.id},
               {"theorem", to_string(c.theorem)},
               {"measured", finite_or_null(c.measured)},
               {"threshold", c.threshold},
               {"comparison", c.comparison == Comparison::kAtMost ? "<=" : ">="},
               {"pass", c.pass}};
    if (!c.note.empty()) jc["note"] = c.note;
    cases.push_back(std::move(jc));
  }
  return {{"format_version", kFormatVersion},
          {"kind", "report"},
          {"suite", report.suite},
          {"tolerances", report.tolerance},
          {"stats", report.stats},
          {"cases", std::move(cases)},
          {"overall", report.overall}};
}

json zeros_to_json(const std::vector<ZeroEvent>& zeros) {
  return {{"format_version", kFormatVersion},
          {"kind", "zeros"},
          {"zeros", zeros}};
}

std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) format_error("cannot format number");
  return std::string(buf, end);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj,
                          int samples) {
  const std::size_t dim = dimension(traj.model());
  out << csv_header(traj.model(), false) << '\n';
  for (double t : traj.uniform_times(samples)) {
    const StateVec y = traj.evaluate(t);
    out << format_double(t);
    for (std::size_t i = 0; i < dim; ++i) out << ',' << format_double(y[i]);
    out << '\n';
  }
}

void write_path_csv(std::ostream& out, const SampledPath& path) {
  const std::size_t dim = dimension(path.model);
  out << csv_header(path.model, true) << '\n';
  for (std::size_t k = 0; k < path.size(); ++k) {
    out << format_double(path.t[k]);
    for (std::size_t i = 0; i < dim; ++i) {
      out << ',' << format_double(path.y[k][i]);
    }
    out << ',' << format_double(path.residual[k]) << '\n';
  }
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::kUsage, "cannot open " + path);
  return guarded(path.c_str(), [&] { return json::parse(in); });
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) {
    throw Error(ErrorKind::kUsage, "cannot write " + path);
  }
}

}  // namespace painleve
