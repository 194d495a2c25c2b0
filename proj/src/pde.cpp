#include "wentropy/pde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wentropy/error.hpp"

namespace wentropy {

std::vector<double> WeightedLaplacian::apply(std::span<const double> f) const {
  const std::size_t n = size();
  if (f.size() != n) throw std::invalid_argument("Laplacian: size mismatch");
  std::vector<double> out(n, 0.0);
  for (std::size_t b = 0; b + 1 < n; ++b) {
    const double flux = conductance[b] * (f[b + 1] - f[b]);
    out[b] += flux;
    out[b + 1] -= flux;
  }
  for (std::size_t i = 0; i < n; ++i) out[i] /= grid->mass(i);
  return out;
}

WeightedLaplacian weighted_laplacian(GridPtr grid) {
  if (!grid) throw std::invalid_argument("Laplacian needs a grid");
  const auto nodes = grid->nodes();
  const auto bounds = grid->bounds();
  const auto& space = grid->space();
  const double N = space.dimension();
  std::vector<double> c(grid->size() - 1);
  for (std::size_t b = 0; b < c.size(); ++b) {
    const double h = nodes[b + 1] - nodes[b];
    if (!(h > 0.0)) throw std::invalid_argument("Laplacian: nonpositive cell width");
    const double r = bounds[b + 1];
    const double lo = nodes[b];
    const double hi = nodes[b + 1];
    if (lo < 0.0 && hi > 0.0) {
      // Interface at the origin of the weighted line.
      c[b] = space.measure(lo, hi) / (h * h);
    } else {
      // Chosen so that the flux of r^2 balances 2N m([0, r]) exactly.
      const double inner = r > 0.0 ? space.measure(0.0, r) : space.measure(r, 0.0);
      c[b] = 2.0 * N * inner / std::abs(hi * hi - lo * lo);
    }
  }
  return {std::move(grid), std::move(c)};
}

TridiagonalSolver::TridiagonalSolver(std::vector<double> lower, std::vector<double> diag,
                                     std::vector<double> upper)
    : lower_(std::move(lower)), diag_(std::move(diag)), upper_(std::move(upper)) {
  const std::size_t n = diag_.size();
  if (n == 0 || lower_.size() + 1 != n || upper_.size() + 1 != n) {
    throw std::invalid_argument("tridiagonal system: inconsistent band sizes");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (i > 0) diag_[i] -= lower_[i - 1] * upper_[i - 1];
    if (!(std::abs(diag_[i]) > 0.0) || !std::isfinite(diag_[i])) {
      throw NumericalError("tridiagonal system is singular");
    }
    if (i + 1 < n) upper_[i] /= diag_[i];
  }
}

void TridiagonalSolver::solve(std::span<double> rhs) const {
  const std::size_t n = diag_.size();
  if (rhs.size() != n) throw std::invalid_argument("tridiagonal solve: size mismatch");
  rhs[0] /= diag_[0];
  for (std::size_t i = 1; i < n; ++i) rhs[i] = (rhs[i] - lower_[i - 1] * rhs[i - 1]) / diag_[i];
  for (std::size_t i = n - 1; i-- > 0;) rhs[i] -= upper_[i] * rhs[i + 1];
}

HeatSolver::HeatSolver(GridPtr grid, std::vector<double> values, double t0, Scheme scheme)
    : lap_(weighted_laplacian(std::move(grid))),
      values_(std::move(values)),
      scratch_(values_.size()),
      t_(t0),
      scheme_(scheme) {
  if (values_.size() != lap_.size()) throw std::invalid_argument("solver: size mismatch");
}

void HeatSolver::prepare(double dt) {
  if (dt == prepared_dt_) return;
  const std::size_t n = lap_.size();
  const double theta = scheme_ == Scheme::CrankNicolson ? 0.5 : 1.0;
  std::vector<double> lower(n - 1), diag(n), upper(n - 1);
  for (std::size_t i = 0; i < n; ++i) diag[i] = lap_.grid->mass(i);
  for (std::size_t b = 0; b + 1 < n; ++b) {
    const double c = theta * dt * lap_.conductance[b];
    diag[b] += c;
    diag[b + 1] += c;
    lower[b] = -c;
    upper[b] = -c;
  }
  solver_ = TridiagonalSolver(std::move(lower), std::move(diag), std::move(upper));
  prepared_dt_ = dt;
}

void HeatSolver::step(double dt) {
  prepare(dt);
  const std::size_t n = lap_.size();
  for (std::size_t i = 0; i < n; ++i) scratch_[i] = lap_.grid->mass(i) * values_[i];
  if (scheme_ == Scheme::CrankNicolson) {
    for (std::size_t b = 0; b + 1 < n; ++b) {
      const double flux = 0.5 * dt * lap_.conductance[b] * (values_[b + 1] - values_[b]);
      scratch_[b] += flux;
      scratch_[b + 1] -= flux;
    }
  }
  solver_.solve(scratch_);
  values_.swap(scratch_);
}

void HeatSolver::advance_to(double t_end, double dt) {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (t_end < t_) throw std::invalid_argument("solver cannot run backwards");
  const double span = t_end - t_;
  if (span == 0.0) return;
  const auto steps = static_cast<std::size_t>(std::ceil(span / dt * (1.0 - 1e-12)));
  const double h = span / static_cast<double>(std::max<std::size_t>(steps, 1));
  for (std::size_t k = 0; k < std::max<std::size_t>(steps, 1); ++k) step(h);
  t_ = t_end;
}

GridDensity HeatSolver::density() const {
  std::vector<double> v(values_.begin(), values_.end());
  for (double& x : v) {
    if (x < 0.0) {
      clamped_ = std::max(clamped_, -x);
      x = 0.0;
    }
  }
  return GridDensity::normalized(lap_.grid, std::move(v));
}

namespace {

void require_times_after(std::span<const double> times, double t0) {
  if (times.empty()) throw std::invalid_argument("no output times");
  if (!(times.front() > t0)) throw std::invalid_argument("output times must follow the start");
}

}  // namespace

FlowTrajectory evolve_pde(const GridDensity& initial, std::span<const double> times,
                          const PdeOptions& options, double t0) {
  require_times_after(times, t0);
  if (!(options.dt > 0.0)) throw std::invalid_argument("time step must be positive");
  HeatSolver solver(initial.grid_ptr(), std::vector<double>(initial.values().begin(),
                                                            initial.values().end()),
                    t0, options.scheme);
  std::vector<GridDensity> slices;
  slices.reserve(times.size());
  for (double t : times) {
    solver.advance_to(t, options.dt);
    slices.push_back(solver.density());
  }
  return FlowTrajectory(std::vector<double>(times.begin(), times.end()), FlowSource::Pde,
                        std::move(slices));
}

double dirac_start_time(const ModelSpace& space, double x, double first_time) {
  double room = std::numeric_limits<double>::infinity();
  if (space.kind() == SpaceKind::Interval) room = space.length() - x;
  return std::min(first_time / 10.0, room * room / 150.0);
}

FlowTrajectory evolve_pde(GridPtr grid, DiracAt source, std::span<const double> times,
                          const PdeOptions& options) {
  if (!grid) throw std::invalid_argument("evolve_pde needs a grid");
  require_times_after(times, 0.0);
  const ModelSpace& space = grid->space();
  if (!space.contains(source.x)) throw std::invalid_argument("Dirac source outside the space");
  const double ts = dirac_start_time(space, source.x, times.front());
  const ModelSpace exact = space.kind() == SpaceKind::Interval
                               ? ModelSpace::half_line_cone(space.dimension())
                               : space;
  const KernelSpec spec = natural_kernel(exact, source.x);
  std::vector<double> values(grid->size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = heat_kernel(spec, ts, grid->node(i));
  const GridDensity start = GridDensity::normalized(grid, std::move(values));

  HeatSolver solver(grid, std::vector<double>(start.values().begin(), start.values().end()), ts,
                    options.scheme);
  std::vector<GridDensity> slices;
  slices.reserve(times.size());
  for (std::size_t k = 0; k < times.size(); ++k) {
    const double dt = k == 0 ? std::min(options.dt, ts / 4.0) : options.dt;
    solver.advance_to(times[k], dt);
    slices.push_back(solver.density());
  }
  return FlowTrajectory(std::vector<double>(times.begin(), times.end()), FlowSource::Pde,
                        std::move(slices));
}

std::vector<std::vector<double>> evolve_function(GridPtr grid, std::vector<double> f,
                                                 std::span<const double> times,
                                                 const PdeOptions& options) {
  require_times_after(times, 0.0);
  HeatSolver solver(std::move(grid), std::move(f), 0.0, options.scheme);
  std::vector<std::vector<double>> out;
  out.reserve(times.size());
  for (double t : times) {
    solver.advance_to(t, options.dt);
    out.emplace_back(solver.values().begin(), solver.values().end());
  }
  return out;
}

double l1_distance(const GridDensity& a, const GridDensity& b) {
  if (a.size() != b.size()) throw std::invalid_argument("L1 distance: grids differ");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]) * a.grid().mass(i);
  return s;
}

}  // namespace wentropy
