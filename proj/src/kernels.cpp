#include "wentropy/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

#include "wentropy/error.hpp"
#include "wentropy/special_functions.hpp"

namespace wentropy {

namespace {

void require_time(double t) {
  if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("heat kernel needs t > 0");
}

double bessel_index(double N) { return 0.5 * N - 1.0; }

// R_nu(z) = I_{nu+1}/I_nu and R_nu(z)/z, both finite at z = 0.
struct BesselRatio {
  double ratio;
  double ratio_over_z;
};

BesselRatio bessel_ratio(double nu, double z) {
  const double q = modified_bessel_i_entire_scaled(nu + 1.0, z) /
                   modified_bessel_i_entire_scaled(nu, z);
  return {0.5 * z * q, 0.5 * q};
}

// Log-derivatives of (y -> log I-type factor) pieces, see heat_kernel_log_derivatives.
LogDerivatives reflected_log_derivatives(double N, double t, double x, double y) {
  const double nu = bessel_index(N);
  const double a = x / (2.0 * t);
  const double z = a * y;
  const auto [R, R_over_z] = bessel_ratio(nu, z);
  const double dR = 1.0 - R * R - (2.0 * nu + 1.0) * R_over_z;
  return {a * R - y / (2.0 * t), a * a * dR - 1.0 / (2.0 * t)};
}

LogDerivatives killed_log_derivatives(double N, double t, double x, double y) {
  const double mu = -bessel_index(N);
  const double a = x / (2.0 * t);
  const double z = a * y;
  const auto [R, R_over_z] = bessel_ratio(mu, z);
  const double dR = 1.0 - R * R - (2.0 * mu + 1.0) * R_over_z;
  return {2.0 * mu / y + a * R - y / (2.0 * t), -2.0 * mu / (y * y) + a * a * dR - 1.0 / (2.0 * t)};
}

LogDerivatives opposite_log_derivatives(double N, double t, double x, double y) {
  const double mu = -bessel_index(N);
  const double a = x / (2.0 * t);
  const double z = a * y;
  const double Q = modified_bessel_k_ratio(mu, z);
  const double dlogK = -Q + mu / z;
  const double dQ = Q * Q - 1.0 - (2.0 * mu + 1.0) * Q / z;
  const double d2logK = -dQ - mu / (z * z);
  return {mu / y + a * dlogK - y / (2.0 * t), -mu / (y * y) + a * a * d2logK - 1.0 / (2.0 * t)};
}

// Part of the weighted-line kernel living on the side opposite to x (N < 2).
double line_opposite_density(double N, double t, double ax, double ay) {
  const double mu = -bessel_index(N);
  if (mu <= 0.0) return 0.0;
  const double z = ax * ay / (2.0 * t);
  const double s = ax + ay;
  return 0.5 / (2.0 * t) * std::pow(ax * ay, mu) * (2.0 / std::numbers::pi) *
         std::sin(mu * std::numbers::pi) * modified_bessel_k_scaled(mu, z) *
         std::exp(-s * s / (4.0 * t));
}

LogDerivatives mix(double wa, const LogDerivatives& a, double wb, const LogDerivatives& b) {
  const double total = wa + wb;
  const double pa = wa / total;
  const double pb = wb / total;
  const double s = (pa > 0 ? pa * a.score : 0.0) + (pb > 0 ? pb * b.score : 0.0);
  const double second = (pa > 0 ? pa * (a.hessian + a.score * a.score) : 0.0) +
                        (pb > 0 ? pb * (b.hessian + b.score * b.score) : 0.0);
  return {s, second - s * s};
}

}  // namespace

KernelSpec make_kernel_spec(const ModelSpace& space, double origin, KernelFamily family) {
  if (!space.contains(origin)) throw std::invalid_argument("kernel origin outside the space");
  switch (family) {
    case KernelFamily::ConeVertex:
      if (space.kind() == SpaceKind::Interval || origin != space.base_point() || !space.is_cone()) {
        throw std::invalid_argument("cone-vertex kernels start at the vertex of a cone");
      }
      break;
    case KernelFamily::Bessel:
      if (space.kind() != SpaceKind::HalfLineCone) {
        throw std::invalid_argument("Bessel kernels live on the half-line cone");
      }
      break;
    case KernelFamily::SymmetrizedBessel:
      if (space.kind() != SpaceKind::WeightedLine) {
        throw std::invalid_argument("symmetrized Bessel kernels live on the weighted line");
      }
      break;
    case KernelFamily::Gaussian: {
      const bool lebesgue_line = space.kind() == SpaceKind::WeightedLine && space.dimension() == 1.0;
      const bool radial = space.kind() == SpaceKind::Euclidean && origin == 0.0;
      if (!lebesgue_line && !radial) {
        throw std::invalid_argument("Gaussian kernels need R with N = 1 or R^d from the origin");
      }
      break;
    }
  }
  return {space, origin, family};
}

bool has_closed_form_kernel(const ModelSpace& space) {
  return space.kind() != SpaceKind::Interval;
}

KernelSpec natural_kernel(const ModelSpace& space, double origin) {
  switch (space.kind()) {
    case SpaceKind::HalfLineCone:
      return make_kernel_spec(space, origin,
                              origin == 0.0 ? KernelFamily::ConeVertex : KernelFamily::Bessel);
    case SpaceKind::WeightedLine:
      if (space.dimension() == 1.0) return make_kernel_spec(space, origin, KernelFamily::Gaussian);
      return make_kernel_spec(space, origin,
                              origin == 0.0 ? KernelFamily::ConeVertex
                                            : KernelFamily::SymmetrizedBessel);
    case SpaceKind::Euclidean:
      return make_kernel_spec(space, origin, KernelFamily::ConeVertex);
    case SpaceKind::Interval:
      break;
  }
  throw std::invalid_argument("no closed-form heat kernel on " + space.name());
}

double cone_vertex_constant(const ModelSpace& space) {
  const double N = space.dimension();
  double angular = 1.0;
  switch (space.kind()) {
    case SpaceKind::HalfLineCone: angular = 1.0; break;
    case SpaceKind::WeightedLine: angular = 2.0; break;
    case SpaceKind::Euclidean: angular = space.weight(1.0); break;
    case SpaceKind::Interval:
      throw std::invalid_argument("the interval has no vertex normaliser of the form c t^{N/2}");
  }
  return angular * std::pow(2.0, N - 1.0) * std::tgamma(0.5 * N);
}

double cone_vertex_normalizer(const ModelSpace& space, double t) {
  require_time(t);
  return cone_vertex_constant(space) * std::pow(t, 0.5 * space.dimension());
}

double cone_vertex_density(const ModelSpace& space, double t, double r) {
  require_time(t);
  return std::exp(-r * r / (4.0 * t)) / cone_vertex_normalizer(space, t);
}

double bessel_density(double N, double t, double x, double y) {
  require_time(t);
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("Bessel density needs x, y >= 0");
  const double nu = bessel_index(N);
  const double z = x * y / (2.0 * t);
  const double d = x - y;
  // (xy)^{-nu} I_nu(z) = (4t)^{-nu} (z/2)^{-nu} I_nu(z), finite as x y -> 0.
  return std::pow(4.0 * t, -nu) / (2.0 * t) * modified_bessel_i_entire_scaled(nu, z) *
         std::exp(-d * d / (4.0 * t));
}

double bessel_killed_density(double N, double t, double x, double y) {
  require_time(t);
  if (x < 0.0 || y < 0.0) throw std::invalid_argument("Bessel density needs x, y >= 0");
  const double nu = bessel_index(N);
  if (nu >= 0.0) return bessel_density(N, t, x, y);
  const double mu = -nu;
  const double z = x * y / (2.0 * t);
  const double d = x - y;
  return std::pow(x * y, 2.0 * mu) * std::pow(4.0 * t, -mu) / (2.0 * t) *
         modified_bessel_i_entire_scaled(mu, z) * std::exp(-d * d / (4.0 * t));
}

double weighted_line_density(double N, double t, double x, double y) {
  require_time(t);
  if (N == 1.0) {
    const double d = x - y;
    return std::exp(-d * d / (4.0 * t)) / std::sqrt(4.0 * std::numbers::pi * t);
  }
  const double ax = std::abs(x);
  const double ay = std::abs(y);
  if (ax == 0.0) return 0.5 * bessel_density(N, t, 0.0, ay);
  if (x * y >= 0.0) return 0.5 * (bessel_density(N, t, ax, ay) + bessel_killed_density(N, t, ax, ay));
  return line_opposite_density(N, t, ax, ay);
}

double gaussian_density(int d, double t, std::span<const double> x, std::span<const double> y) {
  require_time(t);
  if (d < 1 || x.size() != static_cast<std::size_t>(d) || y.size() != x.size()) {
    throw std::invalid_argument("gaussian_density: point dimension mismatch");
  }
  double dist2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) dist2 += (x[i] - y[i]) * (x[i] - y[i]);
  return std::pow(4.0 * std::numbers::pi * t, -0.5 * d) * std::exp(-dist2 / (4.0 * t));
}

double heat_kernel(const ModelSpace& space, double t, double x, double y) {
  switch (space.kind()) {
    case SpaceKind::HalfLineCone:
      if (x == 0.0) return cone_vertex_density(space, t, y);
      return bessel_density(space.dimension(), t, x, y);
    case SpaceKind::WeightedLine:
      return weighted_line_density(space.dimension(), t, x, y);
    case SpaceKind::Euclidean:
      if (x != 0.0) throw std::invalid_argument("Euclidean kernels are radial about the origin");
      return cone_vertex_density(space, t, y);
    case SpaceKind::Interval:
      break;
  }
  throw std::invalid_argument("no closed-form heat kernel on " + space.name());
}

double heat_kernel(const KernelSpec& spec, double t, double y) {
  if (spec.family == KernelFamily::ConeVertex) return cone_vertex_density(spec.space, t, y);
  return heat_kernel(spec.space, t, spec.origin, y);
}

namespace {

double log_reflected(double N, double t, double x, double y) {
  const double nu = bessel_index(N);
  const double d = x - y;
  return -std::log(2.0 * t) - nu * std::log(4.0 * t) +
         std::log(modified_bessel_i_entire_scaled(nu, x * y / (2.0 * t))) - d * d / (4.0 * t);
}

double log_killed(double N, double t, double x, double y) {
  const double mu = -bessel_index(N);
  if (mu <= 0.0) return log_reflected(N, t, x, y);
  if (x * y == 0.0) return -std::numeric_limits<double>::infinity();
  const double d = x - y;
  return 2.0 * mu * std::log(x * y) - mu * std::log(4.0 * t) - std::log(2.0 * t) +
         std::log(modified_bessel_i_entire_scaled(mu, x * y / (2.0 * t))) - d * d / (4.0 * t);
}

double log_add(double a, double b) {
  const double hi = std::max(a, b);
  if (hi == -std::numeric_limits<double>::infinity()) return hi;
  return hi + std::log1p(std::exp(std::min(a, b) - hi));
}

double log_vertex(const ModelSpace& space, double t, double r) {
  return -r * r / (4.0 * t) - std::log(cone_vertex_normalizer(space, t));
}

}  // namespace

double log_heat_kernel(const ModelSpace& space, double t, double x, double y) {
  require_time(t);
  const double N = space.dimension();
  switch (space.kind()) {
    case SpaceKind::HalfLineCone:
      if (x == 0.0) return log_vertex(space, t, y);
      return log_reflected(N, t, x, y);
    case SpaceKind::Euclidean:
      if (x != 0.0) throw std::invalid_argument("Euclidean kernels are radial about the origin");
      return log_vertex(space, t, y);
    case SpaceKind::WeightedLine: {
      if (N == 1.0) {
        const double d = x - y;
        return -d * d / (4.0 * t) - 0.5 * std::log(4.0 * std::numbers::pi * t);
      }
      if (x == 0.0) return log_vertex(space, t, y);
      const double ax = std::abs(x);
      const double ay = std::abs(y);
      if (x * y >= 0.0) {
        return std::log(0.5) + log_add(log_reflected(N, t, ax, ay), log_killed(N, t, ax, ay));
      }
      const double mu = -bessel_index(N);
      if (mu <= 0.0) return -std::numeric_limits<double>::infinity();
      const double s = ax + ay;
      return std::log(0.5 / (2.0 * t)) + mu * std::log(ax * ay) +
             std::log(2.0 / std::numbers::pi * std::sin(mu * std::numbers::pi)) +
             std::log(modified_bessel_k_scaled(mu, ax * ay / (2.0 * t))) - s * s / (4.0 * t);
    }
    case SpaceKind::Interval:
      break;
  }
  throw std::invalid_argument("no closed-form heat kernel on " + space.name());
}

LogDerivatives heat_kernel_log_derivatives(const ModelSpace& space, double t, double x, double y) {
  require_time(t);
  const double N = space.dimension();
  switch (space.kind()) {
    case SpaceKind::Euclidean:
      if (x != 0.0) throw std::invalid_argument("Euclidean kernels are radial about the origin");
      [[fallthrough]];
    case SpaceKind::HalfLineCone:
      if (x == 0.0) return {-y / (2.0 * t), -1.0 / (2.0 * t)};
      return reflected_log_derivatives(N, t, x, y);
    case SpaceKind::WeightedLine: {
      if (N == 1.0) return {-(y - x) / (2.0 * t), -1.0 / (2.0 * t)};
      if (x == 0.0) return {-y / (2.0 * t), -1.0 / (2.0 * t)};
      const double ax = std::abs(x);
      const double ay = std::abs(y);
      LogDerivatives radial;
      if (x * y >= 0.0) {
        if (N >= 2.0) {
          radial = reflected_log_derivatives(N, t, ax, ay);
        } else {
          radial = mix(bessel_density(N, t, ax, ay), reflected_log_derivatives(N, t, ax, ay),
                       bessel_killed_density(N, t, ax, ay), killed_log_derivatives(N, t, ax, ay));
        }
      } else {
        if (N >= 2.0) throw std::domain_error("the kernel vanishes on the opposite half-line");
        radial = opposite_log_derivatives(N, t, ax, ay);
      }
      // Derivatives were taken in |y|.
      if (y < 0.0) radial.score = -radial.score;
      return radial;
    }
    case SpaceKind::Interval:
      break;
  }
  throw std::invalid_argument("no closed-form heat kernel on " + space.name());
}

double initial_reach(const InitialMeasure& initial) {
  if (const auto* dirac = std::get_if<DiracAt>(&initial)) return std::abs(dirac->x);
  const auto& rho = std::get<GridDensity>(initial);
  double reach = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    if (rho[i] > 0.0) {
      reach = std::max(reach, std::max(std::abs(rho.grid().bounds()[i]),
                                       std::abs(rho.grid().bounds()[i + 1])));
    }
  }
  return reach;
}

namespace {

GridPtr slice_grid(const ModelSpace& space, double reach, double t, const SliceGrid& policy) {
  if (policy.fixed) return policy.fixed;
  return make_grid(space, reach + policy.width * std::sqrt(t), policy.cells, policy.spacing);
}

}  // namespace

GridDensity closed_form_slice(const ModelSpace& space, const InitialMeasure& initial, double t,
                              const SliceGrid& policy) {
  require_time(t);
  if (!has_closed_form_kernel(space)) {
    throw std::invalid_argument("no closed-form heat kernel on " + space.name());
  }
  const GridPtr grid = slice_grid(space, initial_reach(initial), t, policy);
  const auto nodes = grid->nodes();
  std::vector<double> values(grid->size(), 0.0);

  if (const auto* dirac = std::get_if<DiracAt>(&initial)) {
    const KernelSpec spec = natural_kernel(space, dirac->x);
    for (std::size_t i = 0; i < values.size(); ++i) values[i] = heat_kernel(spec, t, nodes[i]);
  } else {
    const auto& source = std::get<GridDensity>(initial);
    if (!(source.space() == space)) throw std::invalid_argument("source density on another space");
    const double cutoff = 60.0 * 4.0 * t;  // drop terms below e^{-60} of the peak
    for (std::size_t j = 0; j < source.size(); ++j) {
      const double weight = source[j] * source.grid().mass(j);
      if (weight == 0.0) continue;
      const double x = source.grid().node(j);
      for (std::size_t i = 0; i < values.size(); ++i) {
        const double gap = std::abs(std::abs(x) - std::abs(nodes[i]));
        if (gap * gap > cutoff) continue;
        values[i] += weight * heat_kernel(space, t, x, nodes[i]);
      }
    }
  }
  // Node sampling is second-order accurate in the mass; a larger defect
  // means the slice grid does not resolve the density.
  double raw = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) raw += values[i] * grid->mass(i);
  if (!(std::abs(raw - 1.0) <= kSliceResolutionTolerance)) {
    throw NumericalError("closed-form slice at t = " + std::to_string(t) +
                         " is not resolved by its grid (mass " + std::to_string(raw) + ")");
  }
  GridDensity slice = GridDensity::normalized(grid, std::move(values));
  return GridDensity(slice.grid_ptr(), std::vector<double>(slice.values().begin(), slice.values().end()),
                     kClosedFormMassTolerance);
}

FlowTrajectory evolve_closed_form(const KernelSpec& spec, const InitialMeasure& initial,
                                  std::span<const double> times, const SliceGrid& grid) {
  if (const auto* dirac = std::get_if<DiracAt>(&initial)) {
    if (dirac->x != spec.origin) throw std::invalid_argument("Dirac source differs from kernel origin");
  }
  std::vector<double> t(times.begin(), times.end());
  const ModelSpace space = spec.space;
  if (!has_closed_form_kernel(space)) {
    throw std::invalid_argument("no closed-form heat kernel on " + space.name());
  }
  return FlowTrajectory(std::move(t), FlowSource::ClosedForm,
                        [space, initial, grid](double time) {
                          return closed_form_slice(space, initial, time, grid);
                        });
}

}  // namespace wentropy
