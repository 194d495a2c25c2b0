#pragma once

namespace wentropy {

/// Argument at which the modified Bessel evaluation switches from the
/// power series to the large-argument expansion.
inline constexpr double kBesselSeriesLimit = 20.0;

/// Modified Bessel function of the first kind I_nu(z), nu >= -1/2, z >= 0.
double modified_bessel_i(double nu, double z);

/// e^{-z} I_nu(z); finite for every z >= 0 (except nu < 0 at z = 0).
double modified_bessel_i_scaled(double nu, double z);

/// e^{-z} (z/2)^{-nu} I_nu(z).  This is the scaled form of the entire
/// function sum_k (z^2/4)^k / (k! Gamma(k + nu + 1)) and equals
/// 1/Gamma(nu + 1) at z = 0, so it is the form used by heat kernels
/// whose argument may vanish.
double modified_bessel_i_entire_scaled(double nu, double z);

/// I_{nu+1}(z) / I_nu(z), computed from scaled values.
double modified_bessel_i_ratio(double nu, double z);

// Branches, exposed for cross-validation.
double bessel_i_entire_series(double nu, double z);       // unscaled entire form
double bessel_i_scaled_asymptotic(double nu, double z);   // e^{-z} I_nu(z), z large

}  // namespace wentropy

namespace wentropy {

/// e^{z} K_nu(z) for z > 0, from the integral of exp(-z (cosh u - 1)) cosh(nu u)
/// over u >= 0 with the trapezoidal rule (exponentially convergent here).
double modified_bessel_k_scaled(double nu, double z);

/// K_{nu+1}(z) / K_nu(z).
double modified_bessel_k_ratio(double nu, double z);

}  // namespace wentropy
