#include "painleve/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <sstream>

#include "painleve/ode_models.hpp"

namespace painleve {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 0.2, c3 = 0.3, c4 = 0.8, c5 = 8.0 / 9.0;
constexpr double a21 = 0.2;
constexpr double a31 = 3.0 / 40.0, a32 = 9.0 / 40.0;
constexpr double a41 = 44.0 / 45.0, a42 = -56.0 / 15.0, a43 = 32.0 / 9.0;
constexpr double a51 = 19372.0 / 6561.0, a52 = -25360.0 / 2187.0,
                 a53 = 64448.0 / 6561.0, a54 = -212.0 / 729.0;
constexpr double a61 = 9017.0 / 3168.0, a62 = -355.0 / 33.0,
                 a63 = 46732.0 / 5247.0, a64 = 49.0 / 176.0,
                 a65 = -5103.0 / 18656.0;
constexpr double a71 = 35.0 / 384.0, a73 = 500.0 / 1113.0, a74 = 125.0 / 192.0,
                 a75 = -2187.0 / 6784.0, a76 = 11.0 / 84.0;
constexpr double e1 = 71.0 / 57600.0, e3 = -71.0 / 16695.0, e4 = 71.0 / 1920.0,
                 e5 = -17253.0 / 339200.0, e6 = 22.0 / 525.0, e7 = -1.0 / 40.0;
// PI controller constants (Hairer & Wanner defaults).
constexpr double kSafety = 0.9;
constexpr double kBeta = 0.04;
constexpr double kExpo1 = 0.2 - kBeta * 0.75;
constexpr double kMinFactor = 0.2;   // h may shrink by at most 5x
constexpr double kMaxFactor = 10.0;  // and grow by at most 10x

constexpr double kEventTimeTol = 1e-12;
constexpr int kEventSubdivisions = 4;

StateVec axpy(const StateVec& y, double h,
              std::initializer_list<std::pair<double, const StateVec*>> terms,
              std::size_t dim) {
  StateVec out = y;
  for (std::size_t i = 0; i < dim; ++i) {
    double acc = 0.0;
    for (const auto& [w, k] : terms) acc += w * (*k)[i];
    out[i] = y[i] + h * acc;
  }
  return out;
}

double event_value(EventObservable obs, const StateVec& y) {
  return obs == EventObservable::kUpperSDot ? y[1] : y[0];
}

bool direction_matches(EventDirection want, bool rising) {
  switch (want) {
    case EventDirection::kAny:
      return true;
    case EventDirection::kRising:
      return rising;
    case EventDirection::kFalling:
      return !rising;
  }
  return true;
}

// Bisection for a sign change of `g` between ta and tb (ga * gb < 0).
template <class G>
double bisect(G&& g, double ta, double ga, double tb) {
  double lo = ta, hi = tb, glo = ga;
  while (std::abs(hi - lo) > kEventTimeTol * std::max(1.0, std::abs(lo))) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    const double gm = g(mid);
    if (gm == 0.0) return mid;
    if ((gm < 0.0) == (glo < 0.0)) {
      lo = mid;
      glo = gm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

class Dopri5 {
 public:
  Dopri5(const ModelPoint& init, double t_end, const ToleranceConfig& tol,
         std::span<const EventSpec> events)
      : model_(init.model),
        dim_(dimension(init.model)),
        t_end_(t_end),
        dir_(t_end > init.t ? 1.0 : -1.0),
        tol_(tol),
        events_(events.begin(), events.end()) {
    tol_.validate();
    if (model_ == Model::kSigma) {
      throw Error(ErrorKind::kUsage,
                  "integrate: the sigma equation is only available on paths");
    }
    if (!std::isfinite(init.t) || !std::isfinite(t_end) || !is_finite(init.y)) {
      throw Error(ErrorKind::kInvalidState, "integrate: non-finite input");
    }
    if (t_end == init.t) {
      throw Error(ErrorKind::kUsage, "integrate: empty time span");
    }
    for (const auto& ev : events_) {
      if (!observable_defined_for(ev.observable, model_)) {
        throw Error(ErrorKind::kUsage, "event " + to_string(ev) +
                                           " is not defined for model " +
                                           std::string(to_string(model_)));
      }
    }
    span_ = std::abs(t_end - init.t);
    h_min_ = tol_.h_min > 0.0 ? tol_.h_min : 1e-14 * span_;
    Node first{init.t, init.y};
    for (std::size_t i = dim_; i < first.y.size(); ++i) first.y[i] = 0.0;
    nodes_.push_back(first);
    scale_ = std::max(1.0, std::abs(init.y[0]));
  }

  IntegrationResult run() {
    double t = nodes_.back().t;
    StateVec y = nodes_.back().y;
    StateVec k1 = f(t, y);
    double h = dir_ * (tol_.h_init > 0.0 ? std::min(tol_.h_init, span_)
                                         : initial_step(t, y, k1));
    double err_old = 1e-4;
    bool reject_streak = false;
    std::int64_t attempts = 0;

    while (dir_ * (t_end_ - t) > 0.0) {
      if (++attempts > tol_.max_steps) {
        abort(ErrorKind::kBudgetExceeded, t, "max_steps exceeded");
      }
      if (std::abs(h) < h_min_) {
        abort(ErrorKind::kStepUnderflow, t,
              "step size underflow (possible blow-up)");
      }
      bool last = false;
      if (dir_ * (t + 1.01 * h - t_end_) >= 0.0) {
        h = t_end_ - t;
        last = true;
      }

      StateVec k2, k3, k4, k5, k6, k7, y_new;
      double err = std::numeric_limits<double>::infinity();
      try {
        k2 = f(t + c2 * h, axpy(y, h, {{a21, &k1}}, dim_));
        k3 = f(t + c3 * h, axpy(y, h, {{a31, &k1}, {a32, &k2}}, dim_));
        k4 = f(t + c4 * h,
               axpy(y, h, {{a41, &k1}, {a42, &k2}, {a43, &k3}}, dim_));
        k5 = f(t + c5 * h,
               axpy(y, h, {{a51, &k1}, {a52, &k2}, {a53, &k3}, {a54, &k4}},
                    dim_));
        k6 = f(t + h, axpy(y, h,
                           {{a61, &k1}, {a62, &k2}, {a63, &k3}, {a64, &k4},
                            {a65, &k5}},
                           dim_));
        y_new = axpy(y, h,
                     {{a71, &k1}, {a73, &k3}, {a74, &k4}, {a75, &k5},
                      {a76, &k6}},
                     dim_);
        const double t_new = last ? t_end_ : t + h;
        k7 = f(t_new, y_new);
        err = error_norm(y, y_new, h, k1, k3, k4, k5, k6, k7);
      } catch (const Error& e) {
        // Stage values overflowed; shrink the step. Anything else (notably
        // the XX singular guard) aborts the run.
        if (e.kind() != ErrorKind::kInvalidState) throw;
      }
      if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();

      const double fac11 = std::pow(err, kExpo1);
      if (err <= 1.0) {
        double fac = fac11 / std::pow(err_old, kBeta);
        fac = std::clamp(fac / kSafety, 1.0 / kMaxFactor, 1.0 / kMinFactor);
        double h_new = h / fac;
        if (reject_streak) {
          h_new = dir_ * std::min(std::abs(h_new), std::abs(h));
        }
        err_old = std::max(err, 1e-4);
        ++stats_.accepted;
        reject_streak = false;

        const double t_new = last ? t_end_ : t + h;
        DenseSegment seg = dense_segment(t, t_new - t, y, k1, y_new, k7);
        if (accept_step(t, y, t_new, y_new, std::move(seg))) break;
        t = t_new;
        y = y_new;
        k1 = k7;
        h = h_new;
      } else {
        ++stats_.rejected;
        const double shrink =
            std::isfinite(err) ? std::min(1.0 / kMinFactor, fac11 / kSafety)
                               : 1.0 / kMinFactor;
        h /= shrink;
        reject_streak = true;
      }
    }
    return finish(false);
  }

 private:
  StateVec f(double t, const StateVec& y) {
    ++stats_.rhs_evaluations;
    return rhs(model_, t, y);
  }

  double weighted_norm(const StateVec& v, const StateVec& y) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double sk = tol_.atol + tol_.rtol * std::abs(y[i]);
      sum += (v[i] / sk) * (v[i] / sk);
    }
    return std::sqrt(sum / static_cast<double>(dim_));
  }

  double initial_step(double t, const StateVec& y, const StateVec& f0) {
    const double dnf = weighted_norm(f0, y);
    const double dny = weighted_norm(y, y);
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * dny / dnf;
    h = std::min(h, span_);
    const StateVec y1 = axpy(y, dir_ * h, {{1.0, &f0}}, dim_);
    StateVec f1;
    try {
      f1 = f(t + dir_ * h, y1);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::kInvalidState) throw;
      return std::max(h * 1e-3, h_min_);
    }
    StateVec diff{};
    for (std::size_t i = 0; i < dim_; ++i) diff[i] = f1[i] - f0[i];
    const double der2 = weighted_norm(diff, y) / h;
    const double der = std::max(std::abs(der2), dnf);
    const double h1 = der <= 1e-15 ? std::max(1e-6, h * 1e-3)
                                   : std::pow(0.01 / der, 0.2);
    return std::min({100.0 * h, h1, span_});
  }

  double error_norm(const StateVec& y, const StateVec& y_new, double h,
                    const StateVec& k1, const StateVec& k3,
                    const StateVec& k4, const StateVec& k5,
                    const StateVec& k6, const StateVec& k7) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
      const double e = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] +
                            e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
      const double sk =
          tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(y_new[i]));
      sum += (e / sk) * (e / sk);
    }
    return std::sqrt(sum / static_cast<double>(dim_));
  }

  // Quintic Hermite on the analytic 2-jet at both ends of the step. Unlike
  // the native Dormand-Prince extension this is C^2 across steps, so
  // finite differences of dense samples stay clean.
  DenseSegment dense_segment(double t, double h, const StateVec& y,
                             const StateVec& dy, const StateVec& y_new,
                             const StateVec& dy_new) const {
    return hermite_segment(t, h, y, dy, rhs_jet(model_, t, y, dy), y_new,
                           dy_new, rhs_jet(model_, t + h, y_new, dy_new), dim_);
  }

  // Records the step and scans it for events. Returns true when a terminal
  // event ended the run.
  bool accept_step(double t, const StateVec& y, double t_new,
                   const StateVec& y_new, DenseSegment seg) {
    std::vector<double> ts(kEventSubdivisions + 1);
    std::vector<StateVec> ys(kEventSubdivisions + 1);
    for (int j = 0; j <= kEventSubdivisions; ++j) {
      ts[j] = t + (t_new - t) * j / kEventSubdivisions;
    }
    ts.front() = t;
    ts.back() = t_new;
    ys.front() = y;
    ys.back() = y_new;
    for (int j = 1; j < kEventSubdivisions; ++j) ys[j] = seg.value(ts[j]);
    for (const auto& v : ys) scale_ = std::max(scale_, std::abs(v[0]));

    std::vector<EventHit> step_hits;
    for (std::size_t e = 0; e < events_.size(); ++e) {
      scan_event(e, seg, ts, ys, step_hits);
    }
    std::sort(step_hits.begin(), step_hits.end(),
              [&](const EventHit& a, const EventHit& b) {
                return dir_ * a.t < dir_ * b.t;
              });

    for (const auto& hit : step_hits) {
      hits_.push_back(hit);
      if (events_[hit.spec_index].terminal) {
        if (hit.t != t) {
          nodes_.push_back({hit.t, hit.y});
          segments_.push_back(std::move(seg));
        }
        terminated_ = true;
        return true;
      }
    }
    nodes_.push_back({t_new, y_new});
    segments_.push_back(std::move(seg));
    return false;
  }

  void scan_event(std::size_t index, const DenseSegment& seg,
                  const std::vector<double>& ts,
                  const std::vector<StateVec>& ys,
                  std::vector<EventHit>& out) const {
    const EventSpec& spec = events_[index];
    auto g = [&](double tt) { return event_value(spec.observable, seg.value(tt)); };
    auto state_at = [&](double tt, std::size_t j) {
      return tt == ts[j] ? ys[j] : seg.value(tt);
    };
    for (std::size_t j = 0; j + 1 < ts.size(); ++j) {
      const double ga = event_value(spec.observable, ys[j]);
      const double gb = event_value(spec.observable, ys[j + 1]);
      bool crossed = false;
      if (ga != 0.0 && gb == 0.0) {
        const bool rising = dir_ * (gb - ga) > 0.0;
        if (direction_matches(spec.direction, rising)) {
          out.push_back({index, ts[j + 1], ys[j + 1], HitKind::kCrossing});
        }
        crossed = true;
      } else if (ga * gb < 0.0) {
        const bool rising = dir_ * (gb - ga) > 0.0;
        if (direction_matches(spec.direction, rising)) {
          const double th = bisect(g, ts[j], ga, ts[j + 1]);
          out.push_back({index, th, seg.value(th), HitKind::kCrossing});
        }
        crossed = true;
      }
      // XX-type zeros are touches, never crossings: look for a minimum of
      // |S| through a sign change of S'.
      if (spec.observable != EventObservable::kUpperS || crossed ||
          spec.direction != EventDirection::kAny) {
        continue;
      }
      const double da = ys[j][1];
      const double db = ys[j + 1][1];
      double tm;
      if (da != 0.0 && db == 0.0) {
        tm = ts[j + 1];
      } else if (da * db < 0.0) {
        tm = bisect([&](double tt) { return seg.value(tt)[1]; }, ts[j], da,
                    ts[j + 1]);
      } else {
        continue;
      }
      const StateVec ym = state_at(tm, j + 1);
      if (std::abs(ym[0]) <= kTouchTolerance * scale_) {
        out.push_back({index, tm, ym, HitKind::kTouch});
      }
    }
  }

  IntegrationResult finish(bool truncated) const {
    std::vector<Node> nodes = nodes_;
    std::vector<DenseSegment> segs = segments_;
    return {Trajectory(model_, std::move(nodes), std::move(segs), tol_, stats_,
                       truncated || terminated_),
            hits_};
  }

  [[noreturn]] void abort(ErrorKind kind, double t, const std::string& why) {
    std::ostringstream msg;
    msg << "integrate(" << to_string(model_) << "): " << why << " at t = " << t;
    std::shared_ptr<const IntegrationResult> partial;
    if (nodes_.size() >= 2) {
      partial = std::make_shared<const IntegrationResult>(finish(true));
    }
    throw IntegrationAborted(kind, msg.str(), std::move(partial));
  }

  Model model_;
  std::size_t dim_;
  double t_end_;
  double dir_;
  ToleranceConfig tol_;
  std::vector<EventSpec> events_;
  double span_ = 0.0;
  double h_min_ = 0.0;
  double scale_ = 1.0;
  bool terminated_ = false;
  StepStats stats_;
  std::vector<Node> nodes_;
  std::vector<DenseSegment> segments_;
  std::vector<EventHit> hits_;
};

StateVec rk4_step(Model model, double t, const StateVec& y, double h) {
  const std::size_t dim = dimension(model);
  const StateVec k1 = rhs(model, t, y);
  const StateVec k2 = rhs(model, t + 0.5 * h, axpy(y, 0.5 * h, {{1.0, &k1}}, dim));
  const StateVec k3 = rhs(model, t + 0.5 * h, axpy(y, 0.5 * h, {{1.0, &k2}}, dim));
  const StateVec k4 = rhs(model, t + h, axpy(y, h, {{1.0, &k3}}, dim));
  return axpy(y, h / 6.0, {{1.0, &k1}, {2.0, &k2}, {2.0, &k3}, {1.0, &k4}}, dim);
}

double inf_norm(const StateVec& v) {
  return std::max({std::abs(v[0]), std::abs(v[1]), std::abs(v[2])});
}

}  // namespace

std::string to_string(const EventSpec& spec) {
  std::string out;
  switch (spec.observable) {
    case EventObservable::kUpperS:
      out = "S-crosses-zero";
      break;
    case EventObservable::kUpperSDot:
      out = "S_dot-crosses-zero";
      break;
    case EventObservable::kLowerS:
      out = "s-crosses-zero";
      break;
  }
  switch (spec.direction) {
    case EventDirection::kAny:
      out += ":any";
      break;
    case EventDirection::kRising:
      out += ":rising";
      break;
    case EventDirection::kFalling:
      out += ":falling";
      break;
  }
  if (spec.terminal) out += ":terminal";
  return out;
}

EventSpec parse_event_spec(std::string_view text) {
  std::vector<std::string_view> parts;
  while (true) {
    const auto pos = text.find(':');
    parts.push_back(text.substr(0, pos));
    if (pos == std::string_view::npos) break;
    text.remove_prefix(pos + 1);
  }
  EventSpec spec;
  if (parts[0] == "S-crosses-zero") {
    spec.observable = EventObservable::kUpperS;
  } else if (parts[0] == "S_dot-crosses-zero") {
    spec.observable = EventObservable::kUpperSDot;
  } else if (parts[0] == "s-crosses-zero") {
    spec.observable = EventObservable::kLowerS;
  } else {
    throw Error(ErrorKind::kUsage, "unknown event '" + std::string(parts[0]) + "'");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    if (parts[i] == "any") {
      spec.direction = EventDirection::kAny;
    } else if (parts[i] == "rising") {
      spec.direction = EventDirection::kRising;
    } else if (parts[i] == "falling") {
      spec.direction = EventDirection::kFalling;
    } else if (parts[i] == "terminal") {
      spec.terminal = true;
    } else {
      throw Error(ErrorKind::kUsage,
                  "unknown event modifier '" + std::string(parts[i]) + "'");
    }
  }
  return spec;
}

bool observable_defined_for(EventObservable obs, Model model) {
  if (obs == EventObservable::kLowerS) return model == Model::kPii0;
  return is_xx_type(model);
}

IntegrationResult integrate(const ModelPoint& init, double t_end,
                            const ToleranceConfig& tol,
                            std::span<const EventSpec> events) {
  return Dopri5(init, t_end, tol, events).run();
}

IntegrationResult integrate_span(const ModelPoint& init, double t_lo,
                                 double t_hi, const ToleranceConfig& tol,
                                 std::span<const EventSpec> events) {
  if (!(t_lo < t_hi) || init.t < t_lo || init.t > t_hi) {
    throw Error(ErrorKind::kUsage,
                "integrate_span: need t_lo < t_hi with t_lo <= init.t <= t_hi");
  }
  if (init.t == t_lo) return integrate(init, t_hi, tol, events);
  if (init.t == t_hi) return integrate(init, t_lo, tol, events);
  // A blow-up on one side still runs the other, so the partial result
  // covers as much of the span as possible.
  std::optional<IntegrationAborted> failure;
  auto side = [&](double t_end) -> std::optional<IntegrationResult> {
    try {
      return integrate(init, t_end, tol, events);
    } catch (const IntegrationAborted& e) {
      if (!failure) failure = e;
      if (e.partial()) return *e.partial();
      return std::nullopt;
    }
  };
  std::optional<IntegrationResult> back = side(t_lo);
  std::optional<IntegrationResult> fwd = side(t_hi);
  auto joined = [](const IntegrationResult& b, const IntegrationResult& f) {
    std::vector<EventHit> hits(b.hits.rbegin(), b.hits.rend());
    hits.insert(hits.end(), f.hits.begin(), f.hits.end());
    return IntegrationResult{join_two_sided(b.trajectory, f.trajectory),
                             std::move(hits)};
  };
  if (!failure) return joined(*back, *fwd);
  std::shared_ptr<const IntegrationResult> partial;
  if (back && fwd) {
    partial = std::make_shared<IntegrationResult>(joined(*back, *fwd));
  } else if (back || fwd) {
    partial = std::make_shared<IntegrationResult>(back ? *back : *fwd);
  }
  throw IntegrationAborted(failure->kind(), failure->what(), partial);
}

StateVec oracle_integrate(const ModelPoint& init, double t_end, double h) {
  if (!(h > 0.0) || t_end == init.t) {
    throw Error(ErrorKind::kUsage, "oracle_integrate: need h > 0, nonempty span");
  }
  const double span = t_end - init.t;
  const auto n = static_cast<std::int64_t>(std::ceil(std::abs(span) / h - 1e-9));
  const double step = span / static_cast<double>(n);
  StateVec y = init.y;
  for (std::int64_t i = 0; i < n; ++i) {
    const double t = init.t + span * static_cast<double>(i) / static_cast<double>(n);
    y = rk4_step(init.model, t, y, step);
  }
  return y;
}

OracleReference oracle_reference(const ModelPoint& init, double t_end,
                                 double h) {
  const StateVec y1 = oracle_integrate(init, t_end, h);
  const StateVec y2 = oracle_integrate(init, t_end, h / 2.0);
  const StateVec y4 = oracle_integrate(init, t_end, h / 4.0);
  OracleReference ref;
  StateVec diff{};
  for (std::size_t i = 0; i < 3; ++i) {
    ref.coarse[i] = (16.0 * y2[i] - y1[i]) / 15.0;
    ref.value[i] = (16.0 * y4[i] - y2[i]) / 15.0;
    diff[i] = ref.coarse[i] - ref.value[i];
  }
  const double norm = inf_norm(ref.value);
  ref.agreement = norm > 0.0 ? inf_norm(diff) / norm : inf_norm(diff);
  ref.accepted = ref.agreement <= kOracleAgreement;
  return ref;
}

}  // namespace painleve
