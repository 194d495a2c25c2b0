#include "wentropy/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace wentropy {

namespace {

void require_order(double nu, double z) {
  if (!(nu >= -0.5)) throw std::invalid_argument("Bessel order must be >= -1/2");
  if (!(z >= 0.0)) throw std::invalid_argument("Bessel argument must be >= 0");
}

}  // namespace

double bessel_i_entire_series(double nu, double z) {
  const double q = 0.25 * z * z;
  double term = 1.0 / std::tgamma(nu + 1.0);
  double sum = term;
  for (int k = 1; k < 500; ++k) {
    term *= q / (static_cast<double>(k) * (static_cast<double>(k) + nu));
    sum += term;
    if (term < 1e-17 * sum) break;
  }
  return sum;
}

double bessel_i_scaled_asymptotic(double nu, double z) {
  // e^{-z} I_nu(z) ~ (2 pi z)^{-1/2} sum_k (-1)^k a_k(nu) / z^k; the
  // exponentially small companion series is below rounding for z > 20.
  const double mu = 4.0 * nu * nu;
  double term = 1.0;
  double sum = 1.0;
  double previous = std::numeric_limits<double>::infinity();
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= -(mu - odd * odd) / (8.0 * k * z);
    const double mag = std::abs(term);
    if (mag == 0.0) break;
    // Past the turning point the terms only grow again: stop there.
    if (mag > previous && odd * odd > mu) break;
    sum += term;
    previous = mag;
    if (mag < 1e-17 * std::abs(sum)) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

double modified_bessel_i_entire_scaled(double nu, double z) {
  require_order(nu, z);
  if (z <= kBesselSeriesLimit) return std::exp(-z) * bessel_i_entire_series(nu, z);
  return std::pow(0.5 * z, -nu) * bessel_i_scaled_asymptotic(nu, z);
}

double modified_bessel_i_scaled(double nu, double z) {
  require_order(nu, z);
  if (z == 0.0) {
    if (nu == 0.0) return 1.0;
    return nu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  }
  if (z <= kBesselSeriesLimit) {
    return std::exp(-z) * std::pow(0.5 * z, nu) * bessel_i_entire_series(nu, z);
  }
  return bessel_i_scaled_asymptotic(nu, z);
}

double modified_bessel_i(double nu, double z) {
  require_order(nu, z);
  if (z <= kBesselSeriesLimit) {
    if (z == 0.0) return modified_bessel_i_scaled(nu, z);
    return std::pow(0.5 * z, nu) * bessel_i_entire_series(nu, z);
  }
  // Overflows to +inf past z ~ 709, as I_nu itself does in double.
  return std::exp(z) * bessel_i_scaled_asymptotic(nu, z);
}

double modified_bessel_i_ratio(double nu, double z) {
  require_order(nu, z);
  if (z == 0.0) return 0.0;
  return 0.5 * z * modified_bessel_i_entire_scaled(nu + 1.0, z) /
         modified_bessel_i_entire_scaled(nu, z);
}

}  // namespace wentropy

namespace wentropy {

double modified_bessel_k_scaled(double nu, double z) {
  if (!(z > 0.0)) throw std::invalid_argument("K_nu needs z > 0");
  nu = std::abs(nu);
  // The integrand has width about 1 / sqrt(z) near u = 0.
  const double step = std::min(0.125, 0.5 / std::sqrt(z));
  double sum = 0.5;  // u = 0 contributes half a trapezoid
  for (int k = 1; k < 100000; ++k) {
    const double u = step * k;
    const double exponent = -z * (std::cosh(u) - 1.0) + nu * u;
    const double term = 0.5 * (std::exp(exponent) + std::exp(-z * (std::cosh(u) - 1.0) - nu * u));
    sum += term;
    if (exponent < -745.0 || term < 1e-18 * sum) break;
  }
  return step * sum;
}

double modified_bessel_k_ratio(double nu, double z) {
  return modified_bessel_k_scaled(nu + 1.0, z) / modified_bessel_k_scaled(nu, z);
}

}  // namespace wentropy
