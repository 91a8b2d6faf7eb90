#include "painleve/cli.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

#include "CLI11.hpp"
#include "painleve/integrator.hpp"
#include "painleve/ode_models.hpp"
#include "painleve/transforms.hpp"
#include "painleve/verify.hpp"
#include "painleve/zero_analysis.hpp"

namespace painleve::cli {

namespace {

// --flip-at picks the nearest located zero within this relative distance.
constexpr double kFlipMatch = 1e-2;

[[noreturn]] void usage(const std::string& what) {
  throw Error(ErrorKind::kUsage, what);
}

ToleranceConfig tolerance_of(const RunConfig& c) {
  ToleranceConfig tol;
  tol.rtol = c.rtol;
  tol.atol = c.atol;
  tol.max_steps = c.max_steps;
  return tol;
}

std::string format_of(const RunConfig& c) {
  const std::string f = c.format.empty() ? "csv" : c.format;
  if (f != "csv" && f != "json") usage("--format must be csv or json");
  return f;
}

void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.out.empty()) {
    out << text;
  } else {
    write_text_file(c.out, text);
  }
}

void report(std::ostream& err, const std::exception& e) {
  err << "error: " << e.what() << '\n';
}

// Input trajectory for transform / zeros: a trajectory document or a
// sampled path, which is re-interpolated.
Trajectory load_input(const RunConfig& c) {
  if (c.in.empty()) usage("--in is required");
  const json j = read_json_file(c.in);
  const std::string kind = j.is_object() ? j.value("kind", std::string()) : "";
  if (kind == "trajectory") return trajectory_from_json(j).trajectory;
  if (kind == "path") return path_from_json(j).to_trajectory();
  throw Error(ErrorKind::kFormat,
              c.in + ": expected a trajectory or path document");
}

const ZeroEvent& nearest_zero(const std::vector<ZeroEvent>& zeros,
                              const Trajectory& traj, double a) {
  if (!traj.contains(a)) {
    std::ostringstream msg;
    msg << "--flip-at " << a << " lies outside [" << traj.t_min() << ", "
        << traj.t_max() << "]";
    throw Error(ErrorKind::kOutOfRange, msg.str());
  }
  if (zeros.empty()) usage("no zero located in the input trajectory");
  const auto it = std::min_element(
      zeros.begin(), zeros.end(), [a](const ZeroEvent& x, const ZeroEvent& y) {
        return std::abs(x.location - a) < std::abs(y.location - a);
      });
  if (std::abs(it->location - a) > kFlipMatch * std::max(1.0, std::abs(a))) {
    std::ostringstream msg;
    msg << "no located zero near " << a << "; nearest is " << it->location;
    usage(msg.str());
  }
  return *it;
}

int fail(std::ostream& err, const Error& e) {
  report(err, e);
  return exit_code_for(e.kind());
}

}  // namespace

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kNearSingular:
      return kExitNearSingular;
    case ErrorKind::kStepUnderflow:
    case ErrorKind::kBudgetExceeded:
      return kExitBlowUp;
    case ErrorKind::kBranchViolation:
    case ErrorKind::kWrongSign:
      return kExitBranch;
    default:
      return kExitUsage;
  }
}

json config_to_json(const RunConfig& c) {
  auto opt = [](const std::optional<double>& v) {
    return v ? json(*v) : json(nullptr);
  };
  return {{"format_version", kFormatVersion},
          {"kind", "config"},
          {"command", c.command},
          {"model", c.model},
          {"init", c.init},
          {"t0", c.t0},
          {"t1", c.t1},
          {"sddot_at_zero", opt(c.sddot_at_zero)},
          {"lift", c.lift},
          {"events", c.events},
          {"op", c.op},
          {"in", c.in},
          {"flip_at", opt(c.flip_at)},
          {"negate", c.negate},
          {"suite", c.suite},
          {"ensemble", c.ensemble},
          {"seed", c.seed},
          {"rtol", c.rtol},
          {"atol", c.atol},
          {"max_steps", c.max_steps},
          {"samples", c.samples},
          {"format", c.format},
          {"out", c.out}};
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object() || j.value("kind", std::string()) != "config" ||
      j.value("format_version", 0) != kFormatVersion) {
    throw Error(ErrorKind::kFormat, "expected a config document, version " +
                                        std::to_string(kFormatVersion));
  }
  const json defaults = config_to_json(RunConfig{});
  for (const auto& [key, value] : j.items()) {
    if (!defaults.contains(key)) {
      throw Error(ErrorKind::kFormat, "unknown config key \"" + key + "\"");
    }
  }
  try {
    RunConfig c;
    auto get = [&](const char* key, auto& field) {
      if (j.contains(key)) j.at(key).get_to(field);
    };
    auto get_opt = [&](const char* key, std::optional<double>& field) {
      if (j.contains(key) && !j.at(key).is_null()) {
        field = j.at(key).get<double>();
      }
    };
    get("command", c.command);
    get("model", c.model);
    get("init", c.init);
    get("t0", c.t0);
    get("t1", c.t1);
    get_opt("sddot_at_zero", c.sddot_at_zero);
    get("lift", c.lift);
    get("events", c.events);
    get("op", c.op);
    get("in", c.in);
    get_opt("flip_at", c.flip_at);
    get("negate", c.negate);
    get("suite", c.suite);
    get("ensemble", c.ensemble);
    get("seed", c.seed);
    get("rtol", c.rtol);
    get("atol", c.atol);
    get("max_steps", c.max_steps);
    get("samples", c.samples);
    get("format", c.format);
    get("out", c.out);
    return c;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::kFormat, std::string("config: ") + e.what());
  }
}

ModelPoint initial_point(const RunConfig& c) {
  const Model model = model_from_string(c.model);
  if (model == Model::kSigma) usage("--model must be pii0, xx or xxprime");
  const bool lift = c.lift || c.sddot_at_zero.has_value();
  if (lift && model != Model::kXxPrime) {
    usage("--lift and --sddot-at-zero require --model xxprime");
  }
  // Lifted starts take XX data (S, S'); otherwise the model's own state.
  const std::size_t dim = lift ? 2 : dimension(model);
  if (c.init.size() != dim && c.init.size() != dim + 1) {
    usage("--init needs " + std::to_string(dim) + " values, or " +
          std::to_string(dim + 1) + " with a leading t");
  }
  const bool has_t = c.init.size() == dim + 1;
  const double t = has_t ? c.init[0] : c.t0;
  StateVec y{};
  for (std::size_t i = 0; i < dim; ++i) y[i] = c.init[i + (has_t ? 1 : 0)];
  if (!lift) return {model, t, y};
  return ModelPoint::from(lift_xx_to_xxprime({t, y[0], y[1]}, c.sddot_at_zero));
}

int cmd_integrate(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const std::string format = format_of(c);
    if (c.t0 == c.t1) usage("--t0 and --t1 must differ");
    const ModelPoint init = initial_point(c);
    std::vector<EventSpec> specs;
    for (const auto& e : c.events) specs.push_back(parse_event_spec(e));
    const ToleranceConfig tol = tolerance_of(c);
    const double lo = std::min(c.t0, c.t1), hi = std::max(c.t0, c.t1);
    if (init.t != c.t0 && (init.t < lo || init.t > hi)) {
      usage("the initial time must lie in [t0, t1]");
    }

    TrajectoryDocument doc;
    int code = kExitOk;
    try {
      IntegrationResult r =
          init.t == c.t0 ? integrate(init, c.t1, tol, specs)
                         : integrate_span(init, lo, hi, tol, specs);
      doc.events = event_records(r.hits, specs);
      doc.trajectory = std::move(r.trajectory);
      if (doc.trajectory.truncated()) doc.termination = Termination::kTerminalEvent;
    } catch (const IntegrationAborted& e) {
      report(err, e);
      code = exit_code_for(e.kind());
      doc.termination = e.kind() == ErrorKind::kBudgetExceeded
                            ? Termination::kBudget
                            : Termination::kBlowUp;
      doc.message = e.what();
      if (!e.partial()) return code;
      doc.events = event_records(e.partial()->hits, specs);
      doc.trajectory = e.partial()->trajectory;
    }

    doc.samples = c.samples;
    if (format == "json") {
      emit(c, trajectory_to_json(doc).dump() + "\n", out);
    } else {
      std::ostringstream csv;
      write_trajectory_csv(csv, doc.trajectory, c.samples);
      emit(c, csv.str(), out);
    }
    return code;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int cmd_transform(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    const std::string format = format_of(c);
    if (c.negate && c.op != "sqrt-signed") {
      usage("--negate only applies to --op sqrt-signed");
    }
    if (c.flip_at && c.op != "sqrt-signed") {
      usage("--flip-at only applies to --op sqrt-signed");
    }
    const Trajectory traj = load_input(c);
    SampledPath path;
    if (c.op == "square") {
      if (traj.model() != Model::kPii0) usage("--op square needs a pii0 input");
      path = square_trajectory(traj, c.samples);
    } else if (c.op == "sqrt-pos") {
      path = sqrt_positive(traj, c.samples);
    } else if (c.op == "sqrt-signed") {
      const auto zeros = locate_zeros(traj);
      if (c.flip_at) {
        path = sqrt_signed(traj, nearest_zero(zeros, traj, *c.flip_at),
                           c.samples, c.negate);
      } else {
        if (zeros.empty()) usage("no zero located; use --op sqrt-pos");
        path = sqrt_signed(traj, zeros, c.samples, c.negate);
      }
    } else if (c.op == "sqrt-neg") {
      const auto zeros = locate_zeros(traj);
      path = zeros.empty() ? sqrt_negative(traj, c.samples)
                           : sqrt_negative_signed(traj, zeros, c.samples);
    } else {
      usage("--op must be square, sqrt-pos, sqrt-signed or sqrt-neg");
    }
    if (path.multi_zero_extension) {
      err << "note: flip rule applied at several zeros (extension)\n";
    }
    if (format == "json") {
      emit(c, path_to_json(path).dump() + "\n", out);
    } else {
      std::ostringstream csv;
      write_path_csv(csv, path);
      emit(c, csv.str(), out);
    }
    return kExitOk;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int cmd_verify(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!c.format.empty() && c.format != "json") {
      usage("verify only writes JSON reports");
    }
    const ToleranceConfig tol = tolerance_of(c);
    const VerificationReport rep = c.ensemble > 0
                                       ? run_ensemble(c.ensemble, c.seed, tol)
                                       : run_suite(c.suite, tol);
    for (const auto& cs : rep.cases) {
      if (cs.pass) continue;
      err << "FAIL " << cs.id << " measured " << cs.measured
          << (cs.comparison == Comparison::kAtMost ? " > " : " < ")
          << cs.threshold;
      if (!cs.note.empty()) err << " (" << cs.note << ")";
      err << '\n';
    }
    emit(c, report_to_json(rep).dump(2) + "\n", out);
    return rep.overall ? kExitOk : kExitVerifyFailed;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

int cmd_zeros(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (!c.format.empty() && c.format != "json") {
      usage("zeros only writes JSON");
    }
    const Trajectory traj = load_input(c);
    const auto zeros = locate_zeros(traj);
    json j = zeros_to_json(zeros);
    if (is_xx_type(traj.model())) {
      const auto scan = check_no_sign_change(traj, zeros);
      json gaps = json::array();
      for (const auto& v : scan.violations) {
        gaps.push_back({{"t_lo", v.t_lo}, {"t_hi", v.t_hi}, {"reason", v.reason}});
      }
      j["no_sign_change"] = {{"holds", scan.holds}, {"violations", gaps}};
    }
    emit(c, j.dump(2) + "\n", out);
    return kExitOk;
  } catch (const Error& e) {
    return fail(err, e);
  }
}

namespace {

// Binds options to a RunConfig and remembers how to copy each one, so that
// flags given on the command line can override a loaded --config file.
class Binder {
 public:
  Binder(CLI::App* app, RunConfig& target) : app_(app), target_(target) {}

  template <class T>
  CLI::Option* option(const std::string& name, T RunConfig::*member,
                      const std::string& help) {
    CLI::Option* o = app_->add_option(name, target_.*member, help);
    remember(o, member);
    return o;
  }

  CLI::Option* optional(const std::string& name,
                        std::optional<double> RunConfig::*member,
                        const std::string& help) {
    RunConfig& target = target_;
    CLI::Option* o = app_->add_option_function<double>(
        name, [&target, member](double v) { target.*member = v; }, help);
    remember(o, member);
    return o;
  }

  CLI::Option* flag(const std::string& name, bool RunConfig::*member,
                    const std::string& help) {
    CLI::Option* o = app_->add_flag(name, target_.*member, help);
    remember(o, member);
    return o;
  }

  // Copies every explicitly given option from the parsed target into base.
  void overlay(RunConfig& base) const {
    for (const auto& [o, copy] : copies_) {
      if (o->count() > 0) copy(base, target_);
    }
  }

 private:
  template <class T>
  void remember(CLI::Option* o, T RunConfig::*member) {
    copies_.emplace_back(o, [member](RunConfig& dst, const RunConfig& src) {
      dst.*member = src.*member;
    });
  }

  CLI::App* app_;
  RunConfig& target_;
  std::vector<std::pair<CLI::Option*,
                        std::function<void(RunConfig&, const RunConfig&)>>>
      copies_;
};

struct Subcommand {
  CLI::App* app = nullptr;
  std::unique_ptr<Binder> binder;
  std::string config_path;
  std::string save_path;
};

void common_options(Subcommand& s, bool tolerances) {
  if (tolerances) {
    s.binder->option("--rtol", &RunConfig::rtol, "relative tolerance")
        ->check(CLI::PositiveNumber);
    s.binder->option("--atol", &RunConfig::atol, "absolute tolerance")
        ->check(CLI::PositiveNumber);
    s.binder->option("--max-steps", &RunConfig::max_steps,
                     "step attempt budget")
        ->check(CLI::PositiveNumber);
  }
  s.binder->option("--out", &RunConfig::out, "output file (default stdout)");
  s.app->add_option("--config", s.config_path,
                    "JSON config file; explicit flags take precedence")
      ->check(CLI::ExistingFile);
  s.app->add_option("--save-config", s.save_path,
                    "write the effective config as JSON");
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Integrate PII0, XX and XX', transform between them and "
               "check their zero structure",
               "painleve"};
  app.require_subcommand(1);
  RunConfig parsed;
  std::map<std::string, Subcommand> subs;
  auto add = [&](const std::string& name, const std::string& help) -> Subcommand& {
    Subcommand& s = subs[name];
    s.app = app.add_subcommand(name, help);
    s.binder = std::make_unique<Binder>(s.app, parsed);
    return s;
  };

  Subcommand& integ = add("integrate", "integrate an initial-value problem");
  integ.binder->option("--model", &RunConfig::model, "pii0 | xx | xxprime")
      ->check(CLI::IsMember({"pii0", "xx", "xxprime"}));
  integ.binder->option("--init", &RunConfig::init,
                       "comma-separated state, optionally preceded by t")
      ->delimiter(',')
      ->allow_extra_args(false);
  integ.binder->option("--t0", &RunConfig::t0, "start of the span");
  integ.binder->option("--t1", &RunConfig::t1, "end of the span");
  integ.binder->optional("--sddot-at-zero", &RunConfig::sddot_at_zero,
                         "S''(a) when starting xxprime at a zero of S");
  integ.binder->flag("--lift", &RunConfig::lift,
                     "read --init as XX data (S, S') and lift to xxprime");
  integ.binder->option("--events", &RunConfig::events,
                       "S-crosses-zero | S_dot-crosses-zero | s-crosses-zero "
                       "[:any|rising|falling][:terminal], comma-separated")
      ->delimiter(',');
  integ.binder->option("--samples", &RunConfig::samples,
                       "number of uniform output samples")
      ->check(CLI::Range(2, 10'000'000));
  integ.binder->option("--format", &RunConfig::format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  common_options(integ, true);

  Subcommand& trans = add("transform", "square or take roots of a trajectory");
  trans.binder->option("--op", &RunConfig::op,
                       "square | sqrt-pos | sqrt-signed | sqrt-neg")
      ->check(CLI::IsMember({"square", "sqrt-pos", "sqrt-signed", "sqrt-neg"}));
  trans.binder->option("--in", &RunConfig::in,
                       "trajectory or path JSON from integrate / transform");
  trans.binder->optional("--flip-at", &RunConfig::flip_at,
                         "flip at the located zero nearest this time");
  trans.binder->flag("--negate", &RunConfig::negate,
                     "emit the mirrored signed root");
  trans.binder->option("--samples", &RunConfig::samples,
                       "number of uniform output samples")
      ->check(CLI::Range(2, 10'000'000));
  trans.binder->option("--format", &RunConfig::format, "csv | json")
      ->check(CLI::IsMember({"csv", "json"}));
  common_options(trans, false);

  Subcommand& ver = add("verify", "run a verification suite");
  ver.binder->option("--suite", &RunConfig::suite,
                     "theorems | conservation | roundtrip | negative_branch | "
                     "all");
  ver.binder->option("--ensemble", &RunConfig::ensemble,
                     "check N random lifted XX starts instead of a suite")
      ->check(CLI::NonNegativeNumber);
  ver.binder->option("--seed", &RunConfig::seed, "seed for --ensemble");
  common_options(ver, true);

  Subcommand& zer = add("zeros", "locate and classify zeros of a trajectory");
  zer.binder->option("--in", &RunConfig::in, "trajectory or path JSON");
  common_options(zer, false);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const CLI::App* target = &app;
    for (auto& [name, s] : subs) {
      if (s.app->parsed()) target = s.app;
    }
    out << target->help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }

  for (auto& [name, s] : subs) {
    if (!s.app->parsed()) continue;
    try {
      RunConfig config = parsed;
      if (!s.config_path.empty()) {
        config = config_from_json(read_json_file(s.config_path));
        if (!config.command.empty() && config.command != name) {
          usage("config is for '" + config.command + "', not '" + name + "'");
        }
        s.binder->overlay(config);
      }
      config.command = name;
      if (!s.save_path.empty()) {
        write_text_file(s.save_path, config_to_json(config).dump(2) + "\n");
      }
      if (name == "integrate") return cmd_integrate(config, out, err);
      if (name == "transform") {
        if (config.op.empty() || config.in.empty()) {
          usage("transform needs --op and --in");
        }
        return cmd_transform(config, out, err);
      }
      if (name == "verify") return cmd_verify(config, out, err);
      if (config.in.empty()) usage("zeros needs --in");
      return cmd_zeros(config, out, err);
    } catch (const Error& e) {
      return fail(err, e);
    }
  }
  return kExitUsage;
}

}  // namespace painleve::cli
