#include "painleve/zero_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "painleve/errors.hpp"
#include "painleve/ode_models.hpp"

namespace painleve {

namespace {

constexpr int kScanSubdivisions = 4;
constexpr double kBisectTol = 1e-13;
constexpr double kMergeWindow = 1e-6;

enum class CandidateKind { kValueZero, kDerivativeZero };

struct Candidate {
  double t;
  CandidateKind kind;
};

template <class G>
double bisect(G&& g, double lo, double glo, double hi) {
  while (std::abs(hi - lo) > kBisectTol * std::max(1.0, std::abs(lo))) {
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

// Collects sign changes and exact zeros of component `comp` over the
// trajectory, in increasing time.
void scan_component(const Trajectory& traj, std::size_t comp,
                    CandidateKind kind, std::vector<Candidate>& out) {
  const auto& nodes = traj.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const double ta = nodes[i].t, tb = nodes[i + 1].t;
    std::array<double, kScanSubdivisions + 1> ts{};
    std::array<double, kScanSubdivisions + 1> gs{};
    for (int j = 0; j <= kScanSubdivisions; ++j) {
      ts[j] = j == kScanSubdivisions ? tb : ta + (tb - ta) * j / kScanSubdivisions;
      gs[j] = traj.evaluate(ts[j])[comp];
    }
    for (int j = 0; j < kScanSubdivisions; ++j) {
      if (gs[j] == 0.0 && (i == 0 && j == 0)) out.push_back({ts[j], kind});
      if (gs[j + 1] == 0.0) {
        out.push_back({ts[j + 1], kind});
      } else if (gs[j] * gs[j + 1] < 0.0) {
        const double t = bisect(
            [&](double tt) { return traj.evaluate(tt)[comp]; }, ts[j], gs[j],
            ts[j + 1]);
        out.push_back({t, kind});
      }
    }
  }
}

ZeroEvent make_event(const Trajectory& traj, double t, double scale) {
  ZeroEvent ev;
  ev.location = t;
  ev.model = traj.model();
  ev.scale = scale;
  const StateVec y = traj.evaluate(t);
  ev.value_abs = std::abs(y[0]);
  ev.first_derivative = y[1];
  switch (traj.model()) {
    case Model::kXxPrime:
      ev.second_derivative = y[2];
      ev.third_derivative = kernel::xxprime_jerk(t, y[0], y[1]);
      break;
    case Model::kXx:
      ev.second_derivative = traj.evaluate_derivative(t)[1];
      ev.third_derivative = kernel::xxprime_jerk(t, y[0], y[1]);
      break;
    case Model::kPii0:
      ev.second_derivative = kernel::pii0_accel(t, y[0]);
      ev.third_derivative = y[1] * (6.0 * y[0] * y[0] + t) + y[0];
      break;
    case Model::kSigma:
      ev.second_derivative = kernel::sigma_accel(t, y[0]);
      ev.third_derivative = y[1] * (t - 6.0 * y[0] * y[0]) + y[0];
      break;
  }
  return ev;
}

}  // namespace

std::string_view to_string(ZeroClass c) {
  switch (c) {
    case ZeroClass::kIsolatedPositive:
      return "isolated_positive";
    case ZeroClass::kIsolatedNegative:
      return "isolated_negative";
    case ZeroClass::kSignChange:
      return "sign_change";
    case ZeroClass::kDegenerateFlagged:
      return "degenerate_flagged";
  }
  return "unknown";
}

ZeroClass classify_zero(const ZeroEvent& event, double tol_class) {
  if (event.extent_end) return ZeroClass::kDegenerateFlagged;
  if (is_xx_type(event.model)) {
    if (event.second_derivative > tol_class) return ZeroClass::kIsolatedPositive;
    if (event.second_derivative < -tol_class) return ZeroClass::kIsolatedNegative;
    return ZeroClass::kDegenerateFlagged;
  }
  return std::abs(event.first_derivative) > tol_class
             ? ZeroClass::kSignChange
             : ZeroClass::kDegenerateFlagged;
}

std::vector<ZeroEvent> locate_zeros(const Trajectory& traj,
                                    const ZeroTolerances& tol) {
  const double scale = std::max(1.0, traj.sup_abs_value());
  const std::size_t dim = dimension(traj.model());

  const bool identically_zero =
      std::all_of(traj.nodes().begin(), traj.nodes().end(), [&](const Node& n) {
        for (std::size_t i = 0; i < dim; ++i) {
          if (std::abs(n.y[i]) > tol.zero) return false;
        }
        return true;
      });
  if (identically_zero) {
    ZeroEvent ev = make_event(traj, traj.t_min(), scale);
    ev.extent_end = traj.t_max();
    ev.classification = ZeroClass::kDegenerateFlagged;
    return {ev};
  }

  std::vector<Candidate> cands;
  scan_component(traj, 0, CandidateKind::kValueZero, cands);
  if (is_xx_type(traj.model())) {
    scan_component(traj, 1, CandidateKind::kDerivativeZero, cands);
  }
  std::sort(cands.begin(), cands.end(),
            [](const Candidate& a, const Candidate& b) { return a.t < b.t; });

  // Clusters of nearby candidates describe one zero; prefer the minimum of
  // |S| (a zero of S') over the flanking crossings a tiny numerical dip
  // below zero produces.
  std::vector<ZeroEvent> events;
  for (std::size_t i = 0; i < cands.size();) {
    std::size_t j = i;
    Candidate pick = cands[i];
    while (j < cands.size() &&
           cands[j].t - cands[i].t <=
               kMergeWindow * std::max(1.0, std::abs(cands[i].t))) {
      if (cands[j].kind == CandidateKind::kDerivativeZero &&
          pick.kind != CandidateKind::kDerivativeZero) {
        pick = cands[j];
      }
      ++j;
    }
    i = j;
    ZeroEvent ev = make_event(traj, pick.t, scale);
    if (ev.value_abs > tol.zero * scale) continue;
    ev.classification = classify_zero(ev, tol.cls * scale);
    events.push_back(ev);
  }
  return events;
}

NoSignChangeReport check_no_sign_change(const Trajectory& traj,
                                        std::span<const ZeroEvent> events,
                                        const ZeroTolerances& tol) {
  if (!is_xx_type(traj.model())) {
    throw Error(ErrorKind::kUsage,
                "check_no_sign_change applies to XX / XX' trajectories");
  }
  NoSignChangeReport report;
  std::vector<const ZeroEvent*> points;
  for (const auto& ev : events) {
    if (ev.extent_end) return report;  // S == 0: no sign to compare
    points.push_back(&ev);
  }
  std::sort(points.begin(), points.end(),
            [](const ZeroEvent* a, const ZeroEvent* b) {
              return a->location < b->location;
            });

  const double scale = std::max(1.0, traj.sup_abs_value());
  const double threshold = tol.zero * scale;
  std::vector<double> bounds{traj.t_min()};
  for (const auto* p : points) bounds.push_back(p->location);
  bounds.push_back(traj.t_max());

  std::vector<int> gap_sign;
  for (std::size_t g = 0; g + 1 < bounds.size(); ++g) {
    const double lo = bounds[g], hi = bounds[g + 1];
    bool pos = false, neg = false;
    for (int k = 1; k <= kSignScanSamples; ++k) {
      const double t = lo + (hi - lo) * k / (kSignScanSamples + 1);
      const double S = traj.evaluate(t)[0];
      pos |= S > threshold;
      neg |= S < -threshold;
    }
    if (pos && neg) {
      report.holds = false;
      report.violations.push_back({lo, hi, "sign of S changes inside the gap"});
    }
    gap_sign.push_back(pos && !neg ? 1 : (neg && !pos ? -1 : 0));
  }
  for (std::size_t e = 0; e < points.size(); ++e) {
    const int left = gap_sign[e], right = gap_sign[e + 1];
    if (left != 0 && right != 0 && left != right) {
      report.holds = false;
      std::ostringstream why;
      why << "sign of S flips across the zero at t = " << points[e]->location
          << " (" << to_string(points[e]->classification) << ")";
      report.violations.push_back({bounds[e], bounds[e + 2], why.str()});
    }
  }
  return report;
}

}  // namespace painleve
