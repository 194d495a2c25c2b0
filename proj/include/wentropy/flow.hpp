#pragma once

#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "wentropy/grid.hpp"

namespace wentropy {

enum class FlowSource { ClosedForm, Pde };

/// Heat-flow slices at an ascending list of times.  Closed-form
/// trajectories evaluate slices on demand (fine grids would not fit in
/// memory for long time grids); solver trajectories store them.
class FlowTrajectory {
 public:
  using SliceMaker = std::function<GridDensity(double t)>;

  FlowTrajectory(std::vector<double> times, FlowSource source, SliceMaker maker);
  FlowTrajectory(std::vector<double> times, FlowSource source, std::vector<GridDensity> slices);

  std::size_t size() const { return times_.size(); }
  FlowSource source() const { return source_; }
  std::span<const double> times() const { return times_; }
  double time(std::size_t k) const { return times_[k]; }
  GridDensity slice(std::size_t k) const;

  /// Slice at an arbitrary time; only on-demand trajectories support it.
  bool evaluates_anywhere() const { return static_cast<bool>(maker_); }
  GridDensity at(double t) const;

 private:
  std::vector<double> times_;
  FlowSource source_;
  SliceMaker maker_;
  std::vector<GridDensity> slices_;
};

/// t_min * (t_max / t_min)^{k / (points - 1)}.
std::vector<double> geometric_times(double t_min, double t_max, std::size_t points);

}  // namespace wentropy
