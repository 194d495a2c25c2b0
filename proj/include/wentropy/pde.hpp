#pragma once

#include <span>
#include <vector>

#include "wentropy/flow.hpp"
#include "wentropy/grid.hpp"
#include "wentropy/kernels.hpp"

namespace wentropy {

enum class Scheme { CrankNicolson, ImplicitEuler };

/// Symmetric no-flux finite-volume Laplacian.  With conductances
/// C_b = w_b / h_b on interior interfaces, m_i (Lf)_i = sum_b C_b (f_j - f_i).
struct WeightedLaplacian {
  GridPtr grid;
  std::vector<double> conductance;  // size - 1 interior interfaces

  std::size_t size() const { return grid->size(); }
  std::vector<double> apply(std::span<const double> f) const;
};

/// Conductances make L r^2 = 2N exact in every cell.
WeightedLaplacian weighted_laplacian(GridPtr grid);

/// Thomas algorithm with a stored factorisation.
class TridiagonalSolver {
 public:
  TridiagonalSolver() = default;
  TridiagonalSolver(std::vector<double> lower, std::vector<double> diag, std::vector<double> upper);
  std::size_t size() const { return diag_.size(); }
  void solve(std::span<double> rhs) const;

 private:
  std::vector<double> lower_;
  std::vector<double> diag_;   // pivots after elimination
  std::vector<double> upper_;  // upper / pivot
};

struct PdeOptions {
  Scheme scheme = Scheme::CrankNicolson;
  double dt = 1e-3;
};

/// Single-owner time stepper for m du/dt = K u.
class HeatSolver {
 public:
  HeatSolver(GridPtr grid, std::vector<double> values, double t0, Scheme scheme);

  double time() const { return t_; }
  Scheme scheme() const { return scheme_; }
  std::span<const double> values() const { return values_; }
  const RadialGrid& grid() const { return *lap_.grid; }

  /// Advances to `t_end` in equal steps no longer than `dt`.
  void advance_to(double t_end, double dt);
  /// Current state as a density; tiny negative values left by
  /// Crank-Nicolson are cut to zero and the mass is restored.
  GridDensity density() const;
  /// Largest |negative value| removed by density() so far.
  double clamped() const { return clamped_; }

 private:
  void step(double dt);
  void prepare(double dt);

  WeightedLaplacian lap_;
  std::vector<double> values_;
  std::vector<double> scratch_;
  double t_;
  Scheme scheme_;
  double prepared_dt_ = 0.0;
  TridiagonalSolver solver_;
  mutable double clamped_ = 0.0;
};

/// Heat flow of a grid density, slices at the requested times (> t0).
FlowTrajectory evolve_pde(const GridDensity& initial, std::span<const double> times,
                          const PdeOptions& options = {}, double t0 = 0.0);

/// Heat flow of a Dirac mass.  The solver starts from a short-time exact
/// kernel (the half-line kernel on the interval, away from the far end).
FlowTrajectory evolve_pde(GridPtr grid, DiracAt source, std::span<const double> times,
                          const PdeOptions& options = {});

/// Start time used by the Dirac overload.
double dirac_start_time(const ModelSpace& space, double x, double first_time);

/// P_t f for a function given at the nodes, one vector per time.
std::vector<std::vector<double>> evolve_function(GridPtr grid, std::vector<double> f,
                                                 std::span<const double> times,
                                                 const PdeOptions& options = {});

/// sum_i |a_i - b_i| m_i.
double l1_distance(const GridDensity& a, const GridDensity& b);

}  // namespace wentropy
