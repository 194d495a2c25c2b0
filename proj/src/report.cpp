#include "wentropy/report.hpp"

#include <cmath>

namespace wentropy {

void CheckReport::record(double margin) {
  ++sampled_points;
  // NaN margins are failures.
  if (std::isnan(margin)) {
    worst_margin = -std::numeric_limits<double>::infinity();
  } else if (margin < worst_margin) {
    worst_margin = margin;
  }
}

void CheckReport::add(SeriesPoint point) {
  record(point.margin);
  series.push_back(point);
}

CheckReport& CheckReport::finish() {
  pass = sampled_points > 0 && worst_margin >= -tol;
  for (auto& p : series) p.pass = !std::isnan(p.margin) && p.margin >= -tol;
  return *this;
}

}  // namespace wentropy
