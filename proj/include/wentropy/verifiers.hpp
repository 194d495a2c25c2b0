#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wentropy/flow.hpp"
#include "wentropy/functionals.hpp"
#include "wentropy/kernels.hpp"
#include "wentropy/pde.hpp"
#include "wentropy/report.hpp"
#include "wentropy/transport.hpp"

namespace wentropy {

/// A heat flow together with everything the flow-level checks read.
struct FlowData {
  ModelSpace space;
  /// The measure at t = 0 (P_{time_shift} delta_x for shifted kernels).
  InitialMeasure initial;
  /// Point source when the flow is a (possibly time-shifted) kernel.
  std::optional<double> dirac;
  double time_shift = 0.0;
  bool closed_form = true;
  FlowTrajectory trajectory;
  std::vector<FunctionalSample> samples;
  /// Slice at any t > 0 (a fresh solver run for PDE flows).
  std::function<GridDensity(double)> at;

  InitialMeasure measure_at(double t) const;
  /// The vertex the flow is compared with: the source point on the real
  /// line, the base point elsewhere.
  double vertex() const;
  bool is_vertex_flow() const;
};

FlowData make_flow_data(ModelSpace space, InitialMeasure initial, std::optional<double> dirac,
                        double time_shift, bool closed_form, FlowTrajectory trajectory,
                        std::function<GridDensity(double)> at);

// Flow-level checks on sampled functionals.

/// W(P_t mu, t + t') non-increasing on consecutive grid times.
CheckReport check_w_monotonicity(const ModelSpace& space, std::span<const FunctionalSample> samples,
                                 double t_shift, double tol);
/// Both rescaled Fisher statements for every (alpha, t') combination.
CheckReport check_rescaled_fisher(const ModelSpace& space, std::span<const FunctionalSample> samples,
                                  std::span<const double> alphas, std::span<const double> shifts,
                                  double tol);
/// Relative decrease (I_k - I_{k+1}) / I_k >= -tol.
CheckReport check_fisher_monotone(std::span<const FunctionalSample> samples, double tol);
/// Normalised margin 1 - 2 t I / N; flags "rigid" when |margin| <= tol throughout.
CheckReport check_fisher_bound(const ModelSpace& space, std::span<const FunctionalSample> samples,
                               double tol);
/// -(max W - min W); flags "constant".
CheckReport check_rigidity_constancy(const ModelSpace& space,
                                     std::span<const FunctionalSample> samples, double tol);

/// |D log p|^2 - Delta p / p <= N / 2t evaluated from the exact kernel of a
/// point source (time-shifted by `shift`), `points` per time.
CheckReport check_li_yau(const ModelSpace& space, double source, double shift,
                         std::span<const double> times, std::size_t points, double tol);
/// The same inequality from discrete derivatives of trajectory slices.
CheckReport check_li_yau(const FlowTrajectory& flow, double tol);

/// Metric speed of the flow against sqrt(I): closed-form flows use a
/// centred W2 quotient with relative half-width eta; stored flows use
/// consecutive slices with a second-order allowance.
CheckReport check_metric_speed(const FlowData& flow, double eta, double order_constant, double tol);

/// L1 distance of each slice to the vertex profile exp(-d^2/4t) / Z(t).
CheckReport check_vertex_flow(const FlowData& flow, double tol);

/// Forward quotients of W at t_* (1 + 2^{-k}), k = 1..levels.
struct DiniQuotients {
  double t_star = 0.0;
  std::vector<double> steps;
  std::vector<double> quotients;
};
DiniQuotients dini_quotients(const ModelSpace& space, const std::function<GridDensity(double)>& at,
                             double t_star, std::size_t levels);
CheckReport check_dini_rigidity(const FlowData& flow, double t_star, std::size_t levels, double tol);

// Space-level checks.

CheckReport check_bishop_gromov(const ModelSpace& space, double tol);

struct HeatKernelBoundsOptions {
  double delta = 1.0;
  double t_min = 0.01;
  double t_max = 10.0;
  std::size_t times = 9;
  double C_max = 1e3;
};
/// Empirical constant of the two-sided Gaussian bounds on the sampled window.
CheckReport check_heat_kernel_bounds(const ModelSpace& space, const HeatKernelBoundsOptions& options);

/// sup_{d <= 3} |4t log p_t(x, .) + d^2| decreasing along `times` and
/// <= limit at the last time.
CheckReport check_varadhan(const ModelSpace& space, double source, std::span<const double> times,
                           double limit);

struct TestBump {
  double center;
  double width;
};
std::vector<TestBump> default_test_bumps(const ModelSpace& space);
/// -int <D d^2, D f> dm = 2N int f dm; margin -|LHS - RHS| / ||f||_1.
CheckReport check_laplacian_comparison(const ModelSpace& space, std::span<const TestBump> bumps,
                                       std::size_t cells, double tol);

struct GradientEstimateOptions {
  double clip = 2.0;
  double r_max = 8.0;
  std::size_t cells = 2048;
  PdeOptions pde{Scheme::ImplicitEuler, 1e-3};
};
/// P_t|Df| - |D P_t f| >= -tol for f = min(d(x_0, .), clip).
CheckReport check_gradient_estimate(const ModelSpace& space, std::span<const double> times,
                                    const GradientEstimateOptions& options, double tol);

/// Z(t) from V and from the weight against c_* t^{N/2}, the second moment
/// 2Nt and the log-log slope of V.
CheckReport check_volume_identity(const ModelSpace& space, std::span<const double> times, double tol);

/// c(t) upper estimates, monotone up to the family gap.
CheckReport check_c_infimum(const ModelSpace& space, std::span<const double> times,
                            const FamilySpec& family, double tol);

}  // namespace wentropy
