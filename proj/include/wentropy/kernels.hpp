#pragma once

#include <span>
#include <variant>
#include <vector>

#include "wentropy/flow.hpp"
#include "wentropy/grid.hpp"
#include "wentropy/model_space.hpp"

namespace wentropy {

enum class KernelFamily {
  Gaussian,           // Lebesgue R^d (and the weighted line with N = 1)
  Bessel,             // reflected Bessel process on the half-line
  SymmetrizedBessel,  // weighted line: even and odd Bessel parts
  ConeVertex,         // Z(t)^{-1} exp(-r^2 / 4t) from the vertex
};

struct KernelSpec {
  ModelSpace space;
  double origin;
  KernelFamily family;
};

/// Validates family/space/origin compatibility.
KernelSpec make_kernel_spec(const ModelSpace& space, double origin, KernelFamily family);
/// The exact family for heat flow from `origin` on `space`.
KernelSpec natural_kernel(const ModelSpace& space, double origin);
bool has_closed_form_kernel(const ModelSpace& space);

/// c_* with Z(t) = c_* t^{N/2}: 2^{N-1} Gamma(N/2) times the angular mass
/// (1 for the half-line, 2 for the weighted line, |S^{d-1}| for R^d).
double cone_vertex_constant(const ModelSpace& space);
double cone_vertex_normalizer(const ModelSpace& space, double t);
double cone_vertex_density(const ModelSpace& space, double t, double r);

/// Transition density of the reflected N-dimensional Bessel process
/// against y^{N-1} dy.
double bessel_density(double N, double t, double x, double y);
/// The same process killed at the origin (index -nu); equals
/// bessel_density when N >= 2.
double bessel_killed_density(double N, double t, double x, double y);
/// Heat kernel of R with weight |x|^{N-1}.
double weighted_line_density(double N, double t, double x, double y);
/// (4 pi t)^{-d/2} exp(-|x - y|^2 / 4t).
double gaussian_density(int d, double t, std::span<const double> x, std::span<const double> y);

/// p_t(x, y) on any kind with a closed form.  Euclidean spaces accept
/// x = 0 only (radial coordinate).
double heat_kernel(const ModelSpace& space, double t, double x, double y);
double heat_kernel(const KernelSpec& spec, double t, double y);
/// log p_t(x, y), finite where p_t underflows; -inf where p_t = 0.
double log_heat_kernel(const ModelSpace& space, double t, double x, double y);

/// First and second derivatives of log p_t(x, y) in y.
struct LogDerivatives {
  double score = 0.0;
  double hessian = 0.0;
};
LogDerivatives heat_kernel_log_derivatives(const ModelSpace& space, double t, double x, double y);

struct DiracAt {
  double x = 0.0;
};
using InitialMeasure = std::variant<DiracAt, GridDensity>;

/// Grid used for each closed-form slice.  Without a fixed grid, slice t
/// lives on [0, reach + width sqrt(t)] (mirrored on the line), where reach
/// is the extent of the initial measure.
struct SliceGrid {
  std::size_t cells = 1 << 15;
  Spacing spacing = Spacing::Uniform;
  double width = 12.0;
  GridPtr fixed;
};

/// Mass-1 tolerance of closed-form slices (they are renormalised).
inline constexpr double kClosedFormMassTolerance = 1e-8;
/// Largest mass defect of the raw node samples before renormalisation.
inline constexpr double kSliceResolutionTolerance = 1e-4;

/// Heat-flow slices by the exact kernel.  Dirac data is used as is; grid
/// densities are treated as mixtures of point masses at the nodes.
FlowTrajectory evolve_closed_form(const KernelSpec& spec, const InitialMeasure& initial,
                                  std::span<const double> times, const SliceGrid& grid = {});

/// One slice of the same construction.
GridDensity closed_form_slice(const ModelSpace& space, const InitialMeasure& initial, double t,
                              const SliceGrid& grid = {});

/// Largest |coordinate| touched by the initial measure.
double initial_reach(const InitialMeasure& initial);

}  // namespace wentropy
