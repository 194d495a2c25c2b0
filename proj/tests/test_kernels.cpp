#include <doctest.h>

#include <boost/math/special_functions/bessel.hpp>

#include <cmath>
#include <numbers>

#include "wentropy/error.hpp"
#include "wentropy/functionals.hpp"
#include "wentropy/kernels.hpp"
#include "wentropy/quadrature.hpp"

using namespace wentropy;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

// Direct formula with Boost's I_nu: (2t)^{-1} (xy)^{-nu} exp(-(x^2+y^2)/4t) I_nu(xy/2t).
double bessel_oracle(double N, double t, double x, double y) {
  const double nu = 0.5 * N - 1.0;
  return std::pow(x * y, -nu) / (2.0 * t) * std::exp(-(x * x + y * y) / (4.0 * t)) *
         boost::math::cyl_bessel_i(nu, x * y / (2.0 * t));
}

// Integral of f against the weight r^{N-1} on [0, b].
double weighted_integral(double N, double b, const std::function<double(double)>& f) {
  return integrate_panels([&](double r) { return f(r) * std::pow(r, N - 1.0); }, graded_edges(b, 64));
}

}  // namespace

TEST_CASE("cone vertex density: N = 1 closed form and normalisation") {
  const auto s1 = ModelSpace::half_line_cone(1);
  for (double t : {0.1, 1.0, 10.0}) {
    for (double r : {0.0, 0.3, 2.0}) {
      CHECK(rel(cone_vertex_density(s1, t, r), std::exp(-r * r / (4 * t)) / std::sqrt(kPi * t)) <= 1e-14);
    }
  }
  for (double N : {1.0, 1.5, 2.0, 3.0, 5.0}) {
    const auto s = ModelSpace::half_line_cone(N);
    for (double t : {0.1, 1.0, 10.0}) {
      const double mass = weighted_integral(N, 40.0 * std::sqrt(t), [&](double r) {
        return cone_vertex_density(s, t, r);
      });
      CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));
      // Z(t) = c_* t^{N/2}.
      CHECK(rel(cone_vertex_normalizer(s, t), cone_vertex_constant(s) * std::pow(t, 0.5 * N)) <= 1e-14);
    }
    const auto line = ModelSpace::weighted_line(N);
    CHECK(rel(cone_vertex_constant(line), 2.0 * cone_vertex_constant(s)) <= 1e-15);
  }
  CHECK_THROWS(cone_vertex_density(s1, 0.0, 1.0));
}

TEST_CASE("Bessel density against the direct Boost formula") {
  for (double N : {1.0, 1.5, 2.0, 3.0, 4.5}) {
    for (double t : {0.05, 0.7, 3.0}) {
      for (double x : {0.2, 1.0, 3.0}) {
        for (double y : {0.1, 0.9, 2.5}) {
          if (x * y / (2 * t) > 600) continue;
          CHECK_MESSAGE(rel(bessel_density(N, t, x, y), bessel_oracle(N, t, x, y)) <= 1e-11,
                        "N=" << N << " t=" << t << " x=" << x << " y=" << y);
        }
      }
    }
  }
}

TEST_CASE("Bessel density: N = 1 images, N = 3 hyperbolic sine") {
  for (double t : {0.1, 1.0}) {
    for (double x : {0.4, 2.0}) {
      for (double y : {0.0, 0.5, 3.0}) {
        const double img = (std::exp(-(x - y) * (x - y) / (4 * t)) + std::exp(-(x + y) * (x + y) / (4 * t))) /
                           std::sqrt(4 * kPi * t);
        CHECK(rel(bessel_density(1.0, t, x, y), img) <= 1e-13);
        if (y > 0.0) {
          // Against r^2 dr: (4 pi t)^{-1/2} [e^{-(x-y)^2/4t} - e^{-(x+y)^2/4t}] / (xy).
          const double hyp = (std::exp(-(x - y) * (x - y) / (4 * t)) - std::exp(-(x + y) * (x + y) / (4 * t))) /
                             (x * y * std::sqrt(4 * kPi * t));
          CHECK(rel(bessel_density(3.0, t, x, y), hyp) <= 1e-12);
        }
      }
    }
  }
}

TEST_CASE("Bessel density: symmetry, normalisation and the vertex limit") {
  for (double N : {1.0, 2.0, 3.0}) {
    CHECK(bessel_density(N, 0.3, 1.1, 2.7) == bessel_density(N, 0.3, 2.7, 1.1));
    const double mass = weighted_integral(N, 30.0, [&](double y) { return bessel_density(N, 1.0, 1.5, y); });
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-8));
    const auto s = ModelSpace::half_line_cone(N);
    for (double y : {0.0, 0.5, 2.0}) {
      CHECK(rel(bessel_density(N, 1.0, 1e-9, y), cone_vertex_density(s, 1.0, y)) <= 1e-12);
    }
  }
  CHECK_THROWS(bessel_density(2.0, -1.0, 1.0, 1.0));
}

TEST_CASE("weighted line: N = 1 is the Gaussian and mass is one") {
  for (double x : {-1.0, 0.0, 0.7}) {
    for (double y : {-2.0, 0.3, 1.0}) {
      const double g = std::exp(-(x - y) * (x - y) / 4.0) / std::sqrt(4 * kPi);
      CHECK(rel(weighted_line_density(1.0, 1.0, x, y), g) <= 1e-13);
    }
  }
  for (double N : {1.5, 2.0, 3.0}) {
    const double x = 0.8;
    const auto f = [&](double y) { return weighted_line_density(N, 0.5, x, y); };
    const double pos = weighted_integral(N, 20.0, f);
    const double neg = weighted_integral(N, 20.0, [&](double y) { return f(-y); });
    CHECK(pos + neg == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("Gaussian density") {
  const double x[] = {0.0};
  const double t = 1.0 / (4.0 * kPi);
  CHECK(gaussian_density(1, t, x, x) == doctest::Approx(1.0).epsilon(1e-15));
  const double y0[] = {0.0};
  const double second = integrate([&](double u) {
    const double y[] = {u};
    return u * u * gaussian_density(1, 0.6, y0, y);
  }, -20.0, 20.0);
  CHECK(second == doctest::Approx(2.0 * 0.6).epsilon(1e-12));
}

TEST_CASE("Chapman-Kolmogorov") {
  for (double N : {1.0, 2.0, 3.0}) {
    const double s = 0.3, t = 0.5, x = 0.7, y = 1.4;
    const double lhs = weighted_integral(N, 25.0, [&](double z) {
      return bessel_density(N, s, x, z) * bessel_density(N, t, z, y);
    });
    CHECK(rel(lhs, bessel_density(N, s + t, x, y)) <= 1e-6);
  }
}

TEST_CASE("log kernel where the kernel underflows") {
  const auto s = ModelSpace::half_line_cone(3);
  CHECK(rel(std::exp(log_heat_kernel(s, 0.4, 1.0, 2.0)), heat_kernel(s, 0.4, 1.0, 2.0)) <= 1e-13);
  const double far = log_heat_kernel(s, 1e-3, 0.0, 5.0);
  CHECK(std::isfinite(far));
  CHECK(far == doctest::Approx(-25.0 / 4e-3 - std::log(cone_vertex_normalizer(s, 1e-3))).epsilon(1e-12));
}

TEST_CASE("log-derivatives against finite differences") {
  const double h = 1e-4;
  for (const auto& space : {ModelSpace::half_line_cone(1.5), ModelSpace::half_line_cone(3),
                            ModelSpace::weighted_line(1), ModelSpace::weighted_line(1.5)}) {
    for (double y : {0.4, 1.3, 2.2}) {
      const double x = 1.0, t = 0.35;
      const auto lp = [&](double v) { return log_heat_kernel(space, t, x, v); };
      const auto d = heat_kernel_log_derivatives(space, t, x, y);
      CHECK(d.score == doctest::Approx((lp(y + h) - lp(y - h)) / (2 * h)).epsilon(1e-6));
      CHECK(d.hessian == doctest::Approx((lp(y + h) - 2 * lp(y) + lp(y - h)) / (h * h)).epsilon(1e-5));
    }
  }
}

TEST_CASE("kernel specs") {
  const auto cone = ModelSpace::half_line_cone(2);
  CHECK(natural_kernel(cone, 0.0).family == KernelFamily::ConeVertex);
  CHECK(natural_kernel(cone, 1.0).family == KernelFamily::Bessel);
  CHECK_THROWS(make_kernel_spec(cone, 1.0, KernelFamily::ConeVertex));
  CHECK_THROWS(make_kernel_spec(ModelSpace::weighted_line(2), 1.0, KernelFamily::Bessel));
  CHECK_FALSE(has_closed_form_kernel(ModelSpace::interval(1.0, 2.0)));
}

TEST_CASE("closed-form trajectories") {
  const auto cone = ModelSpace::half_line_cone(3);
  const double times[] = {0.1, 1.0, 10.0};
  const auto traj = evolve_closed_form(natural_kernel(cone, 0.0), DiracAt{0.0}, times);
  for (std::size_t k = 0; k < traj.size(); ++k) {
    const auto rho = traj.slice(k);
    CHECK(rho.mass() == doctest::Approx(1.0).epsilon(kClosedFormMassTolerance));
    CHECK(rho.boundary_mass() < 1e-10);
    const double t = traj.time(k);
    double err = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) {
      err = std::max(err, std::abs(rho[i] - cone_vertex_density(cone, t, rho.grid().node(i))) /
                              cone_vertex_density(cone, t, 0.0));
    }
    CHECK(err <= 1e-8);
  }

  // Reflected Gaussian from x > 0 on the N = 1 half-line.
  const auto half = ModelSpace::half_line_cone(1);
  const auto refl = closed_form_slice(half, DiracAt{0.8}, 0.5);
  for (std::size_t i = 0; i < refl.size(); i += 997) {
    const double y = refl.grid().node(i);
    const double img = (std::exp(-(0.8 - y) * (0.8 - y) / 2.0) + std::exp(-(0.8 + y) * (0.8 + y) / 2.0)) /
                       std::sqrt(2 * kPi);
    CHECK(refl[i] == doctest::Approx(img).epsilon(1e-7).scale(1e-12));
  }

  const auto src = make_grid(cone, 3.0, 128);
  const auto uni = GridDensity::uniform(src, 1.0, 2.0);
  SliceGrid coarse;
  coarse.cells = 2048;
  const auto spread = closed_form_slice(cone, uni, 0.5, coarse);
  CHECK(spread.mass() == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(closed_form_slice(ModelSpace::interval(1.0, 2.0), DiracAt{0.0}, 0.5), std::exception);
}
