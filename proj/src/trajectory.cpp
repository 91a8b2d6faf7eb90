#include "painleve/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "painleve/errors.hpp"
#include "painleve/ode_models.hpp"

namespace painleve {

void ToleranceConfig::validate() const {
  if (!(rtol > 0.0) || !(atol > 0.0)) {
    throw Error(ErrorKind::kUsage, "tolerances rtol and atol must be > 0");
  }
  if (!(h_min >= 0.0) || !(h_init >= 0.0)) {
    throw Error(ErrorKind::kUsage, "h_init and h_min must be >= 0");
  }
  if (max_steps <= 0) {
    throw Error(ErrorKind::kUsage, "max_steps must be > 0");
  }
}

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

double horner_d1(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 1;) v = v * x + static_cast<double>(k) * c[k];
  return v;
}

double horner_d2(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (std::size_t k = c.size(); k-- > 2;) {
    v = v * x + static_cast<double>(k * (k - 1)) * c[k];
  }
  return v;
}

// Quintic Hermite through (p, v, a) at both ends, in theta on [0, 1];
// v and a already scaled by h and h^2.
std::vector<double> quintic_hermite(double p0, double v0, double a0, double p1,
                                    double v1, double a1) {
  const double dp = p1 - p0;
  return {p0,
          v0,
          0.5 * a0,
          10.0 * dp - 6.0 * v0 - 4.0 * v1 - 0.5 * (3.0 * a0 - a1),
          -15.0 * dp + 8.0 * v0 + 7.0 * v1 + 0.5 * (3.0 * a0 - 2.0 * a1),
          6.0 * dp - 3.0 * (v0 + v1) + 0.5 * (a1 - a0)};
}

std::vector<double> derivative_coeffs(const std::vector<double>& c,
                                      double h) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) {
    d.push_back(static_cast<double>(k) * c[k] / h);
  }
  return d;
}

}  // namespace

DenseSegment hermite_segment(double t0, double h, const StateVec& y0,
                             const StateVec& dy0, const StateVec& ddy0,
                             const StateVec& y1, const StateVec& dy1,
                             const StateVec& ddy1, std::size_t dim) {
  DenseSegment seg{t0, h, {}};
  for (std::size_t i = 0; i < dim; ++i) {
    seg.coeffs[i] = quintic_hermite(y0[i], h * dy0[i], h * h * ddy0[i], y1[i],
                                    h * dy1[i], h * h * ddy1[i]);
  }
  return seg;
}

StateVec DenseSegment::value(double t) const {
  const double theta = (t - t0) / h;
  StateVec out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = horner(coeffs[i], theta);
  return out;
}

StateVec DenseSegment::derivative(double t) const {
  const double theta = (t - t0) / h;
  StateVec out{};
  for (std::size_t i = 0; i < 3; ++i) out[i] = horner_d1(coeffs[i], theta) / h;
  return out;
}

StateVec DenseSegment::second_derivative(double t) const {
  const double theta = (t - t0) / h;
  StateVec out{};
  for (std::size_t i = 0; i < 3; ++i) {
    out[i] = horner_d2(coeffs[i], theta) / (h * h);
  }
  return out;
}

Trajectory::Trajectory(Model model, std::vector<Node> nodes,
                       std::vector<DenseSegment> segments, ToleranceConfig tol,
                       StepStats stats, bool truncated)
    : model_(model),
      nodes_(std::move(nodes)),
      segments_(std::move(segments)),
      tol_(tol),
      stats_(stats),
      truncated_(truncated) {
  if (nodes_.size() < 2 || segments_.size() + 1 != nodes_.size()) {
    throw Error(ErrorKind::kFormat,
                "trajectory needs at least two nodes and one segment per step");
  }
  const double dir = nodes_[1].t > nodes_[0].t ? 1.0 : -1.0;
  for (std::size_t i = 1; i < nodes_.size(); ++i) {
    if (!(dir * (nodes_[i].t - nodes_[i - 1].t) > 0.0)) {
      throw Error(ErrorKind::kFormat, "trajectory nodes must be strictly monotone");
    }
  }
}

Trajectory Trajectory::from_samples(Model model, std::span<const double> t,
                                    std::span<const StateVec> y) {
  if (t.size() != y.size() || t.size() < 2) {
    throw Error(ErrorKind::kUsage, "from_samples: need >= 2 matching samples");
  }
  auto accel = [&](std::size_t k) {
    switch (model) {
      case Model::kPii0:
        return kernel::pii0_accel(t[k], y[k][0]);
      case Model::kSigma:
        return kernel::sigma_accel(t[k], y[k][0]);
      case Model::kXx:
      case Model::kXxPrime:
        return y[k][2];
    }
    return 0.0;
  };
  std::vector<Node> nodes;
  std::vector<DenseSegment> segments;
  for (std::size_t k = 0; k < t.size(); ++k) {
    Node node{t[k], y[k]};
    if (dimension(model) == 2) node.y[2] = 0.0;
    nodes.push_back(node);
  }
  for (std::size_t k = 0; k + 1 < t.size(); ++k) {
    const double h = t[k + 1] - t[k];
    DenseSegment seg{t[k], h, {}};
    seg.coeffs[0] = quintic_hermite(y[k][0], h * y[k][1], h * h * accel(k),
                                    y[k + 1][0], h * y[k + 1][1],
                                    h * h * accel(k + 1));
    seg.coeffs[1] = derivative_coeffs(seg.coeffs[0], h);
    if (dimension(model) == 3) {
      seg.coeffs[2] = derivative_coeffs(seg.coeffs[1], h);
    }
    segments.push_back(std::move(seg));
  }
  return Trajectory(model, std::move(nodes), std::move(segments), {}, {});
}

double Trajectory::t_min() const { return std::min(t_start(), t_end()); }
double Trajectory::t_max() const { return std::max(t_start(), t_end()); }

std::size_t Trajectory::segment_index(double t) const {
  if (!contains(t)) {
    std::ostringstream msg;
    msg << "dense evaluation at t = " << t << " outside [" << t_min() << ", "
        << t_max() << "]";
    throw Error(ErrorKind::kOutOfRange, msg.str());
  }
  const std::size_t last = segments_.size() - 1;
  std::size_t idx;
  if (direction() > 0) {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double v, const Node& n) { return v < n.t; });
    idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  } else {
    auto it = std::upper_bound(nodes_.begin(), nodes_.end(), t,
                               [](double v, const Node& n) { return v > n.t; });
    idx = static_cast<std::size_t>(std::distance(nodes_.begin(), it));
  }
  return std::min(idx == 0 ? 0 : idx - 1, last);
}

StateVec Trajectory::evaluate(double t) const {
  const std::size_t i = segment_index(t);
  if (t == nodes_[i].t) return nodes_[i].y;
  if (t == nodes_[i + 1].t) return nodes_[i + 1].y;
  return segments_[i].value(t);
}

StateVec Trajectory::evaluate_derivative(double t) const {
  return segments_[segment_index(t)].derivative(t);
}

StateVec Trajectory::evaluate_second_derivative(double t) const {
  return segments_[segment_index(t)].second_derivative(t);
}

double Trajectory::sup_abs_value() const {
  double m = 0.0;
  for (const auto& n : nodes_) m = std::max(m, std::abs(n.y[0]));
  return m;
}

Trajectory Trajectory::negated() const {
  Trajectory out = *this;
  for (auto& n : out.nodes_) {
    for (auto& v : n.y) v = -v;
  }
  for (auto& s : out.segments_) {
    for (auto& c : s.coeffs) {
      for (auto& v : c) v = -v;
    }
  }
  return out;
}

std::vector<double> Trajectory::uniform_times(int samples) const {
  if (samples < 2) {
    throw Error(ErrorKind::kUsage, "at least two samples are required");
  }
  std::vector<double> ts(static_cast<std::size_t>(samples));
  const double a = t_start(), b = t_end();
  for (int k = 0; k < samples; ++k) {
    const double frac = static_cast<double>(k) / (samples - 1);
    ts[k] = a + (b - a) * frac;
  }
  ts.back() = b;
  return ts;
}

Trajectory join_two_sided(const Trajectory& backward,
                          const Trajectory& forward) {
  if (backward.model() != forward.model() ||
      backward.t_start() != forward.t_start() || backward.direction() > 0 ||
      forward.direction() < 0) {
    throw Error(ErrorKind::kUsage,
                "join_two_sided: runs must share model and initial node");
  }
  std::vector<Node> nodes(backward.nodes().rbegin(), backward.nodes().rend());
  nodes.insert(nodes.end(), forward.nodes().begin() + 1, forward.nodes().end());
  std::vector<DenseSegment> segs(backward.segments().rbegin(),
                                 backward.segments().rend());
  segs.insert(segs.end(), forward.segments().begin(), forward.segments().end());
  StepStats stats = backward.stats();
  stats += forward.stats();
  return Trajectory(forward.model(), std::move(nodes), std::move(segs),
                    forward.tolerance(), stats,
                    backward.truncated() || forward.truncated());
}

}  // namespace painleve
