#include "biocircuit/models/schedule.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace biocircuit::models {

Schedule::Schedule(std::vector<std::pair<double, double>> points)
    : points_(std::move(points)) {
  if (points_.empty()) throw std::invalid_argument("schedule must have at least one point");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (!std::isfinite(points_[i].first) || !std::isfinite(points_[i].second))
      throw std::invalid_argument("schedule entries must be finite");
    if (i > 0 && !(points_[i].first > points_[i - 1].first))
      throw std::invalid_argument("schedule switch times must be strictly increasing");
  }
}

Schedule Schedule::constant(double value) { return Schedule({{0.0, value}}); }

double Schedule::value(double t) const {
  double v = points_.front().second;
  for (const auto& [time, val] : points_) {
    if (time <= t)
      v = val;
    else
      break;
  }
  return v;
}

bool Schedule::is_constant() const {
  for (const auto& [time, val] : points_)
    if (val != points_.front().second) return false;
  return true;
}

std::vector<double> Schedule::switch_times() const {
  std::vector<double> out;
  for (std::size_t i = 1; i < points_.size(); ++i)
    if (points_[i].second != points_[i - 1].second) out.push_back(points_[i].first);
  return out;
}

double Schedule::max_value() const {
  double m = points_.front().second;
  for (const auto& [time, val] : points_) m = std::max(m, val);
  return m;
}

double Schedule::min_value() const {
  double m = points_.front().second;
  for (const auto& [time, val] : points_) m = std::min(m, val);
  return m;
}

void DisturbanceInputs::validate() const {
  if (H_GRN.min_value() < 0.0)
    throw std::invalid_argument("H_GRN schedule must be nonnegative");
  if (!(d1.min_value() > 0.0) || !(d2.min_value() > 0.0))
    throw std::invalid_argument("d1 and d2 schedules must be strictly positive");
}

std::vector<double> DisturbanceInputs::breakpoints() const {
  std::vector<double> out;
  for (const Schedule* s : {&H_GRN, &r, &d1, &d2}) {
    const std::vector<double> t = s->switch_times();
    out.insert(out.end(), t.begin(), t.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace biocircuit::models
