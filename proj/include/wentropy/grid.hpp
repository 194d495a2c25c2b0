#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <vector>

#include "wentropy/model_space.hpp"

namespace wentropy {

enum class Spacing { Uniform, Graded };

/// Finite-volume discretisation of a model space on [0, r_max], or on
/// [-r_max, r_max] for the weighted line.  Nodes are cell midpoints and
/// cell masses are exact integrals of the weight.
class RadialGrid {
 public:
  /// `grading` is the exponent of the power map used by Spacing::Graded.
  static std::shared_ptr<const RadialGrid> make(const ModelSpace& space, double r_max,
                                                std::size_t cells,
                                                Spacing spacing = Spacing::Uniform,
                                                double grading = 2.0);

  /// Builds a grid from explicit interface coordinates (ascending).
  static std::shared_ptr<const RadialGrid> from_bounds(const ModelSpace& space,
                                                       std::vector<double> bounds);

  const ModelSpace& space() const { return space_; }
  std::size_t size() const { return nodes_.size(); }
  std::span<const double> nodes() const { return nodes_; }
  std::span<const double> bounds() const { return bounds_; }
  std::span<const double> masses() const { return masses_; }
  double node(std::size_t i) const { return nodes_[i]; }
  double mass(std::size_t i) const { return masses_[i]; }
  double lower() const { return bounds_.front(); }
  double upper() const { return bounds_.back(); }
  double total_mass() const;

  /// Index of the cell containing x (clamped to the grid).
  std::size_t locate(double x) const;

 private:
  RadialGrid(ModelSpace space, std::vector<double> bounds);

  ModelSpace space_;
  std::vector<double> bounds_;
  std::vector<double> nodes_;
  std::vector<double> masses_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Convenience wrapper matching RadialGrid::make.
GridPtr make_grid(const ModelSpace& space, double r_max, std::size_t cells,
                  Spacing spacing = Spacing::Uniform, double grading = 2.0);

/// A probability density against the reference measure, one value per cell.
class GridDensity {
 public:
  static constexpr double kMassTolerance = 1e-10;

  /// Validates nonnegativity and unit mass to within `mass_tolerance`.
  GridDensity(GridPtr grid, std::vector<double> values, double mass_tolerance = kMassTolerance);

  /// Rescales arbitrary nonnegative cell values to unit mass.
  static GridDensity normalized(GridPtr grid, std::vector<double> values);
  /// Samples a nonnegative function at the nodes and normalises.
  static GridDensity sample(GridPtr grid, const std::function<double(double)>& f);
  /// Constant density on [a, b], using exact cell overlaps.
  static GridDensity uniform(GridPtr grid, double a, double b);
  /// Smooth raised-cosine bump cos^4(pi u / 2), u = (x - center) / width.
  static GridDensity bump(GridPtr grid, double center, double width);

  const RadialGrid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  const ModelSpace& space() const { return grid_->space(); }
  std::size_t size() const { return values_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }

  double mass() const;
  /// Integral of d(about, x)^2 against the density.
  double second_moment(double about) const;
  /// Mass carried by the outermost `cells` cells on each open end.
  double boundary_mass(std::size_t cells = 1) const;

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Raised-cosine profile, C^3 with compact support [-1, 1].
double bump_profile(double u);
double bump_profile_derivative(double u);

}  // namespace wentropy
