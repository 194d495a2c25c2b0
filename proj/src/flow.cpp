#include "wentropy/flow.hpp"

#include <cmath>
#include <stdexcept>

namespace wentropy {

namespace {

void require_ascending(const std::vector<double>& times) {
  for (std::size_t k = 0; k < times.size(); ++k) {
    if (!(times[k] > 0.0) || !std::isfinite(times[k])) {
      throw std::invalid_argument("flow times must be positive");
    }
    if (k > 0 && !(times[k] > times[k - 1])) {
      throw std::invalid_argument("flow times must be strictly ascending");
    }
  }
}

}  // namespace

FlowTrajectory::FlowTrajectory(std::vector<double> times, FlowSource source, SliceMaker maker)
    : times_(std::move(times)), source_(source), maker_(std::move(maker)) {
  require_ascending(times_);
  if (!maker_) throw std::invalid_argument("trajectory without a slice maker");
}

FlowTrajectory::FlowTrajectory(std::vector<double> times, FlowSource source,
                               std::vector<GridDensity> slices)
    : times_(std::move(times)), source_(source), slices_(std::move(slices)) {
  require_ascending(times_);
  if (slices_.size() != times_.size()) throw std::invalid_argument("one slice per time required");
}

GridDensity FlowTrajectory::slice(std::size_t k) const {
  if (k >= times_.size()) throw std::out_of_range("trajectory slice index");
  if (maker_) return maker_(times_[k]);
  return slices_[k];
}

GridDensity FlowTrajectory::at(double t) const {
  if (!maker_) throw std::logic_error("stored trajectories cannot be evaluated at new times");
  return maker_(t);
}

std::vector<double> geometric_times(double t_min, double t_max, std::size_t points) {
  if (!(t_min > 0.0) || !(t_max > t_min) || points < 2) {
    throw std::invalid_argument("geometric grid needs 0 < t_min < t_max and >= 2 points");
  }
  std::vector<double> t(points);
  const double ratio = std::log(t_max / t_min);
  for (std::size_t k = 0; k < points; ++k) {
    t[k] = t_min * std::exp(ratio * static_cast<double>(k) / static_cast<double>(points - 1));
  }
  t.front() = t_min;
  t.back() = t_max;
  return t;
}

}  // namespace wentropy
