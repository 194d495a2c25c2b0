#include <doctest.h>

#include <cmath>
#include <numbers>

#include "wentropy/grid.hpp"
#include "wentropy/quadrature.hpp"

using namespace wentropy;

TEST_CASE("Gauss-Legendre integrates polynomials exactly") {
  const auto& rule = gauss_legendre(8);
  double w = 0.0;
  for (double x : rule.weights) w += x;
  CHECK(w == doctest::Approx(2.0).epsilon(1e-15));
  // Degree 15 on [0, 1]: 1/16.
  CHECK(integrate([](double x) { return std::pow(x, 15); }, 0.0, 1.0, 1, 8) ==
        doctest::Approx(1.0 / 16.0).epsilon(1e-14));
}

TEST_CASE("graded panels resolve the origin singularity") {
  // int_0^1 x^{-1/2} dx = 2; the innermost panel bounds the error.
  const auto edges = graded_edges(1.0, 16, 60);
  CHECK(integrate_panels([](double x) { return 1.0 / std::sqrt(x); }, edges) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(integrate([](double x) { return std::exp(-x * x); }, -8.0, 8.0) ==
        doctest::Approx(std::sqrt(std::numbers::pi)).epsilon(1e-14));
}

TEST_CASE("grid masses are exact integrals of the weight") {
  const auto g2 = make_grid(ModelSpace::half_line_cone(2), 10.0, 1000);
  CHECK(g2->total_mass() == doctest::Approx(50.0).epsilon(1e-13));
  const auto g3 = make_grid(ModelSpace::weighted_line(3), 8.0, 512);
  CHECK(g3->total_mass() == doctest::Approx(2.0 * 512.0 / 3.0).epsilon(1e-13));
  CHECK(g3->lower() == -8.0);
  for (std::size_t i = 0; i < g3->size(); ++i) {
    CHECK(g3->node(i) == doctest::Approx(-g3->node(g3->size() - 1 - i)));
  }
  const auto gg = make_grid(ModelSpace::half_line_cone(1.5), 12.0, 2048, Spacing::Graded);
  double sum = 0.0;
  bool positive = true;
  for (double m : gg->masses()) {
    sum += m;
    positive = positive && m > 0.0;
  }
  CHECK(positive);
  CHECK(sum == doctest::Approx(std::pow(12.0, 1.5) / 1.5).epsilon(1e-12));
}

TEST_CASE("densities are normalised") {
  const auto grid = make_grid(ModelSpace::half_line_cone(3), 6.0, 600);
  const auto uni = GridDensity::uniform(grid, 1.0, 2.0);
  CHECK(uni.mass() == doctest::Approx(1.0).epsilon(1e-14));
  const auto bump = GridDensity::bump(grid, 3.0, 1.0);
  CHECK(bump.mass() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(bump.boundary_mass() < 1e-14);
  CHECK_THROWS(GridDensity::normalized(grid, std::vector<double>(grid->size(), 0.0)));
  CHECK_THROWS(GridDensity::normalized(grid, std::vector<double>(3, 1.0)));
}

TEST_CASE("locate") {
  const auto grid = make_grid(ModelSpace::half_line_cone(1), 1.0, 20);
  CHECK(grid->locate(0.02) == 0);
  CHECK(grid->locate(0.97) == 19);
  CHECK(grid->locate(5.0) == 19);
}
