#include "wentropy/grid.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <stdexcept>
#include <string>

namespace wentropy {

namespace {

std::vector<double> uniform_bounds(double lo, double hi, std::size_t cells) {
  std::vector<double> b(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    b[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
  }
  b.back() = hi;
  return b;
}

// r_i = r_max (i / M)^gamma, concentrating cells near the origin.
std::vector<double> graded_bounds(double r_max, std::size_t cells, double gamma) {
  std::vector<double> b(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    b[i] = r_max * std::pow(static_cast<double>(i) / static_cast<double>(cells), gamma);
  }
  b.back() = r_max;
  return b;
}

}  // namespace

RadialGrid::RadialGrid(ModelSpace space, std::vector<double> bounds)
    : space_(std::move(space)), bounds_(std::move(bounds)) {
  const std::size_t cells = bounds_.size() - 1;
  nodes_.resize(cells);
  masses_.resize(cells);
  for (std::size_t i = 0; i < cells; ++i) {
    if (!(bounds_[i + 1] > bounds_[i])) {
      throw std::invalid_argument("grid cell widths must be positive");
    }
    nodes_[i] = 0.5 * (bounds_[i] + bounds_[i + 1]);
    masses_[i] = space_.measure(bounds_[i], bounds_[i + 1]);
    if (!(masses_[i] > 0.0)) throw std::invalid_argument("grid cell with zero measure");
  }
}

GridPtr RadialGrid::make(const ModelSpace& space, double r_max, std::size_t cells,
                         Spacing spacing, double grading) {
  if (!(r_max > 0.0) || !std::isfinite(r_max)) throw std::invalid_argument("r_max must be > 0");
  if (cells < 16) throw std::invalid_argument("grids need at least 16 cells");
  if (!(grading >= 1.0)) throw std::invalid_argument("grading exponent must be >= 1");
  if (space.kind() == SpaceKind::Interval && r_max > space.length() * (1.0 + 1e-14)) {
    throw std::invalid_argument("interval grids cannot extend beyond L");
  }

  std::vector<double> bounds;
  if (space.kind() == SpaceKind::WeightedLine) {
    // Mirror a half grid so the grid is symmetric with an interface at 0.
    if (cells % 2 != 0) throw std::invalid_argument("weighted-line grids need an even cell count");
    const std::size_t half = cells / 2;
    const std::vector<double> right = spacing == Spacing::Uniform
                                          ? uniform_bounds(0.0, r_max, half)
                                          : graded_bounds(r_max, half, grading);
    bounds.reserve(cells + 1);
    for (std::size_t k = half; k > 0; --k) bounds.push_back(-right[k]);
    bounds.insert(bounds.end(), right.begin(), right.end());
  } else {
    bounds = spacing == Spacing::Uniform ? uniform_bounds(0.0, r_max, cells)
                                         : graded_bounds(r_max, cells, grading);
  }
  return std::shared_ptr<const RadialGrid>(new RadialGrid(space, std::move(bounds)));
}

GridPtr RadialGrid::from_bounds(const ModelSpace& space, std::vector<double> bounds) {
  if (bounds.size() < 17) throw std::invalid_argument("grids need at least 16 cells");
  if (bounds.front() < space.lower_end() || bounds.back() > space.upper_end() * (1.0 + 1e-14)) {
    throw std::invalid_argument("grid bounds leave the space");
  }
  return std::shared_ptr<const RadialGrid>(new RadialGrid(space, std::move(bounds)));
}

GridPtr make_grid(const ModelSpace& space, double r_max, std::size_t cells, Spacing spacing,
                  double grading) {
  return RadialGrid::make(space, r_max, cells, spacing, grading);
}

double RadialGrid::total_mass() const {
  return std::accumulate(masses_.begin(), masses_.end(), 0.0);
}

std::size_t RadialGrid::locate(double x) const {
  auto it = std::upper_bound(bounds_.begin(), bounds_.end(), x);
  if (it == bounds_.begin()) return 0;
  const auto idx = static_cast<std::size_t>(it - bounds_.begin()) - 1;
  return std::min(idx, size() - 1);
}

GridDensity::GridDensity(GridPtr grid, std::vector<double> values, double mass_tolerance)
    : grid_(std::move(grid)), values_(std::move(values)) {
  if (!grid_) throw std::invalid_argument("density without a grid");
  if (values_.size() != grid_->size()) throw std::invalid_argument("density/grid size mismatch");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument("density values must be finite and nonnegative");
    }
  }
  const double m = mass();
  if (!(std::abs(m - 1.0) <= mass_tolerance)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", m);
    throw std::invalid_argument(std::string("density mass ") + buf + " is not 1");
  }
}

GridDensity GridDensity::normalized(GridPtr grid, std::vector<double> values) {
  double total = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (!(values[i] >= 0.0)) throw std::invalid_argument("negative density value");
    total += values[i] * grid->mass(i);
  }
  if (!(total > 0.0) || !std::isfinite(total)) {
    throw std::invalid_argument("density has no mass on the grid");
  }
  for (double& v : values) v /= total;
  return GridDensity(std::move(grid), std::move(values));
}

GridDensity GridDensity::sample(GridPtr grid, const std::function<double(double)>& f) {
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(grid->node(i));
  return normalized(std::move(grid), std::move(v));
}

GridDensity GridDensity::uniform(GridPtr grid, double a, double b) {
  if (!(b > a)) throw std::invalid_argument("uniform density needs a < b");
  const auto& space = grid->space();
  const auto bounds = grid->bounds();
  std::vector<double> v(grid->size(), 0.0);
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double lo = std::max(a, bounds[i]);
    const double hi = std::min(b, bounds[i + 1]);
    if (hi > lo) v[i] = space.measure(lo, hi) / grid->mass(i);
  }
  return normalized(std::move(grid), std::move(v));
}

double bump_profile(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * std::numbers::pi * u);
  return c * c * c * c;
}

double bump_profile_derivative(double u) {
  if (std::abs(u) >= 1.0) return 0.0;
  const double a = 0.5 * std::numbers::pi * u;
  const double c = std::cos(a);
  return -4.0 * c * c * c * std::sin(a) * 0.5 * std::numbers::pi;
}

GridDensity GridDensity::bump(GridPtr grid, double center, double width) {
  if (!(width > 0.0)) throw std::invalid_argument("bump width must be positive");
  return sample(std::move(grid), [=](double x) { return bump_profile((x - center) / width); });
}

double GridDensity::mass() const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) m += values_[i] * grid_->mass(i);
  return m;
}

double GridDensity::second_moment(double about) const {
  double m = 0.0;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    const double d = grid_->node(i) - about;
    m += d * d * values_[i] * grid_->mass(i);
  }
  return m;
}

double GridDensity::boundary_mass(std::size_t cells) const {
  double m = 0.0;
  const std::size_t n = values_.size();
  cells = std::min(cells, n);
  for (std::size_t k = 0; k < cells; ++k) m += values_[n - 1 - k] * grid_->mass(n - 1 - k);
  if (space().kind() == SpaceKind::WeightedLine) {
    for (std::size_t k = 0; k < cells; ++k) m += values_[k] * grid_->mass(k);
  }
  return m;
}

}  // namespace wentropy
