#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace wentropy {

inline constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// One row of a check: a time (NaN for space-level checks), the
/// functionals at that time when they were computed, and the margin.
struct SeriesPoint {
  double t = kNaN;
  double entropy = kNaN;
  double fisher = kNaN;
  double w_entropy = kNaN;
  double margin = kNaN;
  bool pass = false;
};

/// Outcome of one verifier.  A margin is signed: >= -tol passes.
struct CheckReport {
  std::string name;
  std::string anchor;
  std::size_t sampled_points = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  double tol = 0.0;
  bool pass = false;
  std::vector<SeriesPoint> series;
  std::map<std::string, double> metrics;
  std::map<std::string, bool> flags;
  std::string note;

  /// Folds one margin into the report without adding a series row.
  void record(double margin);
  /// Records a margin and appends it to the series.
  void add(SeriesPoint point);
  /// Sets pass from worst_margin and tol, and the row pass flags.
  CheckReport& finish();
  /// Margins all exceed 10 tol: a strict inequality, not noise.
  bool strictly_positive() const { return worst_margin > 10.0 * tol; }
  /// Margin below -10 tol: a violation, not noise.
  bool strictly_violated() const { return worst_margin < -10.0 * tol; }
};

}  // namespace wentropy
