#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "painleve/types.hpp"

namespace painleve {

struct ToleranceConfig {
  double rtol = 1e-10;
  double atol = 1e-10;
  double h_init = 0.0;  // 0 selects the automatic starting step
  double h_min = 0.0;   // 0 selects 1e-14 * |span|
  std::int64_t max_steps = 1'000'000;

  // Throws kUsage unless rtol, atol > 0, h_min >= 0, max_steps > 0.
  void validate() const;

  bool operator==(const ToleranceConfig&) const = default;
};

struct StepStats {
  std::int64_t accepted = 0;
  std::int64_t rejected = 0;
  std::int64_t rhs_evaluations = 0;

  StepStats& operator+=(const StepStats& other) {
    accepted += other.accepted;
    rejected += other.rejected;
    rhs_evaluations += other.rhs_evaluations;
    return *this;
  }
  bool operator==(const StepStats&) const = default;
};

struct Node {
  double t = 0.0;
  StateVec y{};

  bool operator==(const Node&) const = default;
};

// One step of dense output: each component is a polynomial in
// theta = (t - t0) / h stored in the power basis.
struct DenseSegment {
  double t0 = 0.0;
  double h = 0.0;
  std::array<std::vector<double>, 3> coeffs;

  StateVec value(double t) const;
  StateVec derivative(double t) const;
  StateVec second_derivative(double t) const;

  bool operator==(const DenseSegment&) const = default;
};

// Quintic Hermite segment on [t0, t0 + h] matching value, first and second
// derivative of every component at both ends.
DenseSegment hermite_segment(double t0, double h, const StateVec& y0,
                             const StateVec& dy0, const StateVec& ddy0,
                             const StateVec& y1, const StateVec& dy1,
                             const StateVec& ddy1, std::size_t dim);

// Densely interpolable solution over [t_start, t_end] (or the reverse for
// backward runs). Segment i interpolates between nodes i and i + 1.
// Immutable after construction.
class Trajectory {
 public:
  Trajectory() = default;
  Trajectory(Model model, std::vector<Node> nodes,
             std::vector<DenseSegment> segments, ToleranceConfig tol,
             StepStats stats, bool truncated = false);

  // Builds a quintic Hermite trajectory through sampled states. For kPii0
  // and kSigma the second derivative comes from the equation; for kXx and
  // kXxPrime, y[2] must carry S'' at each sample.
  static Trajectory from_samples(Model model, std::span<const double> t,
                                 std::span<const StateVec> y);

  Model model() const { return model_; }
  double t_start() const { return nodes_.front().t; }
  double t_end() const { return nodes_.back().t; }
  double t_min() const;
  double t_max() const;
  int direction() const { return t_end() > t_start() ? 1 : -1; }
  bool contains(double t) const { return t >= t_min() && t <= t_max(); }

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<DenseSegment>& segments() const { return segments_; }
  const ToleranceConfig& tolerance() const { return tol_; }
  const StepStats& stats() const { return stats_; }
  // True when integration stopped early (blow-up or terminal event).
  bool truncated() const { return truncated_; }

  // Throws kOutOfRange outside [t_min, t_max]. Node times return the node.
  StateVec evaluate(double t) const;
  StateVec evaluate_derivative(double t) const;
  StateVec evaluate_second_derivative(double t) const;

  ModelPoint point(double t) const { return {model_, t, evaluate(t)}; }

  // Largest |y[0]| over the nodes.
  double sup_abs_value() const;

  // Copy with every state component negated.
  Trajectory negated() const;

  // Uniformly spaced sample times including both endpoints.
  std::vector<double> uniform_times(int samples) const;

  bool operator==(const Trajectory&) const = default;

 private:
  std::size_t segment_index(double t) const;

  Model model_ = Model::kPii0;
  std::vector<Node> nodes_;
  std::vector<DenseSegment> segments_;
  ToleranceConfig tol_;
  StepStats stats_;
  bool truncated_ = false;
};

// Free-function form of Trajectory::evaluate.
inline StateVec evaluate_dense(const Trajectory& traj, double t) {
  return traj.evaluate(t);
}

// Joins a backward run and a forward run that share their initial node into
// one increasing trajectory.
Trajectory join_two_sided(const Trajectory& backward,
                          const Trajectory& forward);

}  // namespace painleve
