#pragma once

#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wentropy/grid.hpp"
#include "wentropy/kernels.hpp"
#include "wentropy/report.hpp"

namespace wentropy {

enum class TransportMethod { Quantile, Sinkhorn };

struct TransportPlanSummary {
  double w2 = 0.0;
  TransportMethod method = TransportMethod::Quantile;
  double sinkhorn_eps = 0.0;
  double marginal_error = 0.0;
  std::size_t iterations = 0;
};

/// Exact W2 between cell-uniform densities on a 1D space via the
/// quantile coupling.  The two densities may live on different grids.
TransportPlanSummary quantile_w2(const GridDensity& rho, const GridDensity& sigma);
/// W2 against a Dirac mass (the square root of a second moment).
TransportPlanSummary quantile_w2(DiracAt dirac, const GridDensity& sigma);
TransportPlanSummary quantile_w2(const InitialMeasure& a, const InitialMeasure& b);

struct SinkhornOptions {
  double eps = 1e-3;
  std::size_t max_iter = 20000;
  double marginal_tol = 1e-8;
};

/// Entropic OT with cost |x - y|^2 in the log domain with eps-scaling.
/// w2 is the square root of the transport cost of the computed plan.
TransportPlanSummary sinkhorn_w2(const GridDensity& rho, const GridDensity& sigma,
                                 const SinkhornOptions& options = {});

/// A flow evaluated on demand; t = 0 yields the initial measure.
using MeasureFlow = std::function<InitialMeasure(double t)>;

/// W2(P_s mu, P_t nu)^2 <= W2(mu, nu)^2 + 2N (sqrt t - sqrt s)^2 over the pairs.
CheckReport spacetime_control_check(const ModelSpace& space, const MeasureFlow& mu,
                                    const MeasureFlow& nu,
                                    std::span<const std::pair<double, double>> pairs, double tol);

/// bar mu_tau = hat mu_{tau^2 / 2N} has W2(bar mu_s, bar mu_t) = t - s.
CheckReport geodesic_check(const ModelSpace& space, std::span<const std::pair<double, double>> pairs,
                           std::size_t cells, double tol);

}  // namespace wentropy
