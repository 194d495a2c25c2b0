#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "wentropy/flow.hpp"
#include "wentropy/grid.hpp"
#include "wentropy/kernels.hpp"
#include "wentropy/report.hpp"

namespace wentropy {

/// Ent = sum_i rho_i log rho_i m_i, with 0 log 0 = 0.
double entropy(const GridDensity& rho);
/// I = 4 sum_b ((sqrt rho)'_b)^2 m_b with m_b = (m_i + m_{i+1}) / 2.
double fisher(const GridDensity& rho);
/// The |D rho|^2 / rho form on the same interfaces; interfaces where the
/// mean density falls below `floor` are skipped.
double fisher_direct(const GridDensity& rho, double floor = 1e-300);

struct FunctionalSample {
  double t = 0.0;
  double entropy = 0.0;
  double fisher = 0.0;
  double w_entropy = 0.0;
  double second_moment = 0.0;
};

/// W(mu, t) = t I - Ent - (N/2) log t from already computed parts.
double w_from_parts(double N, double t, double entropy, double fisher);
FunctionalSample w_entropy(const GridDensity& rho, double t);
std::vector<FunctionalSample> sample_trajectory(const FlowTrajectory& flow);

/// Residual of d/dt Ent = -I along a trajectory.  At interior times the
/// derivative is the centred difference in log t; residuals are in units
/// of N / 2t.  Passing requires residual <= order_constant * (Delta log t)^2
/// + tol.  The fitted order compares strides 1 and 2.
CheckReport dissipation_check(const ModelSpace& space, std::span<const FunctionalSample> samples,
                              double tol, double order_constant = 1.0);
CheckReport dissipation_check(const ModelSpace& space, const FlowTrajectory& flow, double tol,
                              double order_constant = 1.0);

/// Parametric family for the upper estimate of c(t) = inf W(mu, t):
/// profiles exp(-d(x, r)^2 / 4s) around each center at each scale, and
/// raised-cosine bumps of each width around each center.
struct FamilySpec {
  std::vector<double> centers{0.0};
  std::vector<double> scales;
  std::vector<double> bump_widths;
  std::size_t cells = 1 << 14;
};

/// Scales s_min q^k, k = 0..count-1.
std::vector<double> geometric_scales(double s_min, double s_max, std::size_t count);

struct FamilyMember {
  std::string label;
  double entropy = 0.0;
  double fisher = 0.0;
};

std::vector<FamilyMember> build_family(const ModelSpace& space, const FamilySpec& spec);

struct CInfimumEstimate {
  double t = 0.0;
  double value = 0.0;       // upper estimate of c(t)
  std::string argmin;
  std::size_t family_size = 0;
  double family_gap = 0.0;  // (N/2) max f(sqrt(q)^{+-1}), f(x) = x - 1 - log x
  double lsi_margin = 0.0;  // min over members of t I - (N/2) log t - value - Ent
};

CInfimumEstimate c_infimum_estimate(const ModelSpace& space, double t,
                                    std::span<const FamilyMember> family,
                                    double scale_ratio = 1.0);
CInfimumEstimate c_infimum_estimate(const ModelSpace& space, double t, const FamilySpec& spec);

/// Scale ratio of a geometric scale list (1 when it has fewer than 2 entries).
double scale_ratio(std::span<const double> scales);

}  // namespace wentropy
