#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace wentropy {

/// Gauss-Legendre rule on [-1, 1].
struct GaussRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

const GaussRule& gauss_legendre(std::size_t points);

/// Composite Gauss-Legendre over `panels` equal panels of [a, b].
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::size_t panels = 64, std::size_t points = 16);

/// Composite rule on panels whose edges are given explicitly.
double integrate_panels(const std::function<double(double)>& f, std::span<const double> edges,
                        std::size_t points = 16);

/// Panel edges on [0, b] refined geometrically towards 0, for integrands
/// with an algebraic singularity or high-order zero at the origin.
std::vector<double> graded_edges(double b, std::size_t panels, std::size_t origin_levels = 30);

}  // namespace wentropy
