#pragma once

#include <utility>
#include <vector>

namespace biocircuit::models {

/// Piecewise-constant signal: a finite list of (switch_time, value) pairs
/// with strictly increasing times. The first value extends left of the
/// first switch time, so a constant signal is a single pair.
class Schedule {
 public:
  Schedule() : points_{{0.0, 0.0}} {}
  explicit Schedule(std::vector<std::pair<double, double>> points);
  static Schedule constant(double value);

  double value(double t) const;
  bool is_constant() const;
  const std::vector<std::pair<double, double>>& points() const { return points_; }
  /// Times where the value actually jumps (integrator breakpoints).
  std::vector<double> switch_times() const;
  double max_value() const;
  double min_value() const;

 private:
  std::vector<std::pair<double, double>> points_;
};

/// The exogenous inputs every model family understands. H_GRN and r are
/// additive rates; d1 and d2 are multiplicative factors on transcription
/// and translation.
struct DisturbanceInputs {
  Schedule H_GRN = Schedule::constant(0.0);
  Schedule r = Schedule::constant(0.0);
  Schedule d1 = Schedule::constant(1.0);
  Schedule d2 = Schedule::constant(1.0);

  // H_GRN >= 0 and d1, d2 > 0 everywhere.
  void validate() const;
  std::vector<double> breakpoints() const;
};

}  // namespace biocircuit::models
