#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "painleve/errors.hpp"
#include "painleve/trajectory.hpp"
#include "painleve/types.hpp"

namespace painleve {

enum class EventObservable {
  kUpperS,     // "S-crosses-zero" on XX / XX' runs (crossings and touches)
  kUpperSDot,  // "S_dot-crosses-zero" on XX / XX' runs
  kLowerS,     // "s-crosses-zero" on PII0 runs
};

enum class EventDirection { kAny, kRising, kFalling };

struct EventSpec {
  EventObservable observable = EventObservable::kLowerS;
  EventDirection direction = EventDirection::kAny;
  bool terminal = false;

  bool operator==(const EventSpec&) const = default;
};

std::string to_string(const EventSpec& spec);
// Parses "name[:any|rising|falling][:terminal]".
EventSpec parse_event_spec(std::string_view text);

bool observable_defined_for(EventObservable obs, Model model);

enum class HitKind {
  kCrossing,  // observable changed sign
  kTouch,     // |S| reached a minimum within the zero tolerance
};

struct EventHit {
  std::size_t spec_index = 0;
  double t = 0.0;
  StateVec y{};
  HitKind kind = HitKind::kCrossing;
};

struct IntegrationResult {
  Trajectory trajectory;
  std::vector<EventHit> hits;
};

// Thrown on step-size underflow or budget exhaustion. The steps accepted
// before the failure are attached so callers can analyse up to the
// singularity.
class IntegrationAborted : public Error {
 public:
  IntegrationAborted(ErrorKind kind, const std::string& message,
                     std::shared_ptr<const IntegrationResult> partial)
      : Error(kind, message), partial_(std::move(partial)) {}

  // May be null when no step was accepted.
  const IntegrationResult* partial() const { return partial_.get(); }

 private:
  std::shared_ptr<const IntegrationResult> partial_;
};

// Relative tolerance on |S| used to recognise a touch of zero.
inline constexpr double kTouchTolerance = 1e-9;

// Adaptive Dormand-Prince 5(4) with a PI controller. Dense output is a
// quintic Hermite per step built from the analytic second derivative at each
// node, so it is C^2 across steps. Integrates from init.t to t_end (either direction). Event times
// are located by bisection on the dense output to 1e-12 * max(1, |t|).
IntegrationResult integrate(const ModelPoint& init, double t_end,
                            const ToleranceConfig& tol = {},
                            std::span<const EventSpec> events = {});

// Integrates backward to t_lo and forward to t_hi from init.t, which must
// lie in [t_lo, t_hi], and joins the two runs into one increasing
// trajectory. Falls back to a one-sided run when init.t is an endpoint.
// If one side aborts the other still runs, and the IntegrationAborted
// carries both partial runs joined.
IntegrationResult integrate_span(const ModelPoint& init, double t_lo,
                                 double t_hi, const ToleranceConfig& tol = {},
                                 std::span<const EventSpec> events = {});

// Classical fixed-step RK4 from init.t to t_end; the last step is shortened
// if h does not divide the span exactly.
StateVec oracle_integrate(const ModelPoint& init, double t_end, double h);

struct OracleReference {
  StateVec value{};      // extrapolation from the h/2, h/4 pair
  StateVec coarse{};     // extrapolation from the h, h/2 pair
  double agreement = 0;  // ||coarse - value||_inf / ||value||_inf
  bool accepted = false;
};

inline constexpr double kOracleAgreement = 1e-10;

// Runs RK4 at h, h/2 and h/4 and Richardson-extrapolates each adjacent
// pair. The value is only trustworthy when `accepted` is set, i.e. the two
// extrapolations agree to kOracleAgreement relative.
OracleReference oracle_reference(const ModelPoint& init, double t_end,
                                 double h);

}  // namespace painleve
