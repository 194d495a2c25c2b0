#include "wentropy/transport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "wentropy/error.hpp"

namespace wentropy {

namespace {

void require_line_like(const ModelSpace& space) {
  if (!space.is_one_dimensional()) {
    throw std::invalid_argument("quantile W2 needs a space with d(x, y) = |x - y|");
  }
}

// Piecewise-linear quantile function of a cell-uniform density.
struct Quantile {
  std::vector<double> u;  // cumulative mass at breakpoints
  std::vector<double> x;  // coordinate at breakpoints

  explicit Quantile(const GridDensity& rho) {
    const auto bounds = rho.grid().bounds();
    double total = 0.0;
    u.push_back(0.0);
    x.push_back(bounds[0]);
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double m = rho[i] * rho.grid().mass(i);
      if (m <= 0.0) continue;
      if (x.back() != bounds[i]) {
        // Jump over an empty stretch.
        u.push_back(total);
        x.push_back(bounds[i]);
      }
      total += m;
      u.push_back(total);
      x.push_back(bounds[i + 1]);
    }
    for (double& v : u) v /= total;
    u.back() = 1.0;
  }
};

}  // namespace

TransportPlanSummary quantile_w2(const GridDensity& rho, const GridDensity& sigma) {
  require_line_like(rho.space());
  if (!(rho.space() == sigma.space())) throw std::invalid_argument("W2 across different spaces");
  const Quantile a(rho);
  const Quantile b(sigma);
  // Merge breakpoints; on each piece both quantiles are affine in u.  At
  // repeated u (jumps) the piece has zero length and contributes nothing.
  std::size_t i = 0;
  std::size_t j = 0;
  double u = 0.0;
  double sum = 0.0;
  const auto eval = [](const Quantile& q, std::size_t k, double v) {
    // q.u[k] <= v <= q.u[k + 1]
    const double du = q.u[k + 1] - q.u[k];
    if (du <= 0.0) return q.x[k + 1];
    return q.x[k] + (q.x[k + 1] - q.x[k]) * (v - q.u[k]) / du;
  };
  while (i + 1 < a.u.size() && j + 1 < b.u.size()) {
    const double next = std::min(a.u[i + 1], b.u[j + 1]);
    const double len = next - u;
    if (len > 0.0) {
      const double d0 = eval(a, i, u) - eval(b, j, u);
      const double d1 = eval(a, i, next) - eval(b, j, next);
      sum += len * (d0 * d0 + d0 * d1 + d1 * d1) / 3.0;
    }
    u = next;
    if (a.u[i + 1] <= u) ++i;
    if (j + 1 < b.u.size() && b.u[j + 1] <= u) ++j;
  }
  TransportPlanSummary out;
  out.w2 = std::sqrt(std::max(sum, 0.0));
  return out;
}

TransportPlanSummary quantile_w2(DiracAt dirac, const GridDensity& sigma) {
  require_line_like(sigma.space());
  const auto bounds = sigma.grid().bounds();
  double sum = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    const double m = sigma[i] * sigma.grid().mass(i);
    if (m <= 0.0) continue;
    const double a = bounds[i] - dirac.x;
    const double b = bounds[i + 1] - dirac.x;
    // Mean of (r - x)^2 for r uniform on the cell.
    sum += m * (a * a + a * b + b * b) / 3.0;
  }
  TransportPlanSummary out;
  out.w2 = std::sqrt(sum / sigma.mass());
  return out;
}

TransportPlanSummary quantile_w2(const InitialMeasure& a, const InitialMeasure& b) {
  const auto* da = std::get_if<DiracAt>(&a);
  const auto* db = std::get_if<DiracAt>(&b);
  if (da && db) {
    TransportPlanSummary out;
    out.w2 = std::abs(da->x - db->x);
    return out;
  }
  if (da) return quantile_w2(*da, std::get<GridDensity>(b));
  if (db) return quantile_w2(*db, std::get<GridDensity>(a));
  return quantile_w2(std::get<GridDensity>(a), std::get<GridDensity>(b));
}

namespace {

double log_sum_exp(std::span<const double> v) {
  double m = -std::numeric_limits<double>::infinity();
  for (double x : v) m = std::max(m, x);
  if (!std::isfinite(m)) return m;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

}  // namespace

TransportPlanSummary sinkhorn_w2(const GridDensity& rho, const GridDensity& sigma,
                                 const SinkhornOptions& options) {
  require_line_like(rho.space());
  if (!(options.eps > 0.0)) throw std::invalid_argument("Sinkhorn needs eps > 0");
  std::vector<double> x, y, la, lb;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double m = rho[i] * rho.grid().mass(i);
    if (m > 0.0) {
      x.push_back(rho.grid().node(i));
      la.push_back(std::log(m));
    }
  }
  for (std::size_t j = 0; j < sigma.size(); ++j) {
    const double m = sigma[j] * sigma.grid().mass(j);
    if (m > 0.0) {
      y.push_back(sigma.grid().node(j));
      lb.push_back(std::log(m));
    }
  }
  const std::size_t n = x.size();
  const std::size_t m = y.size();
  std::vector<double> cost(n * m);
  double cmax = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      cost[i * m + j] = (x[i] - y[j]) * (x[i] - y[j]);
      cmax = std::max(cmax, cost[i * m + j]);
    }
  }
  std::vector<double> f(n, 0.0), g(m, 0.0), work(std::max(n, m));
  const auto update_f = [&](double eps) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) work[j] = (g[j] - cost[i * m + j]) / eps + lb[j];
      f[i] = -eps * log_sum_exp(std::span<const double>(work.data(), m));
    }
  };
  const auto update_g = [&](double eps) {
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t i = 0; i < n; ++i) work[i] = (f[i] - cost[i * m + j]) / eps + la[i];
      g[j] = -eps * log_sum_exp(std::span<const double>(work.data(), n));
    }
  };
  // Row-marginal error of the plan; columns are exact after update_g.
  const auto marginal_error = [&](double eps) {
    double err = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double row = 0.0;
      for (std::size_t j = 0; j < m; ++j) {
        row += std::exp((f[i] + g[j] - cost[i * m + j]) / eps + la[i] + lb[j]);
      }
      err += std::abs(row - std::exp(la[i]));
    }
    return err;
  };

  TransportPlanSummary out;
  out.method = TransportMethod::Sinkhorn;
  out.sinkhorn_eps = options.eps;
  double eps = std::max(options.eps, cmax);
  std::size_t iter = 0;
  while (true) {
    const bool last = eps <= options.eps;
    for (std::size_t k = 0; k < (last ? options.max_iter : 50); ++k, ++iter) {
      update_f(eps);
      update_g(eps);
      if (last && k % 10 == 9 && marginal_error(eps) <= options.marginal_tol) break;
    }
    if (last) break;
    eps = std::max(options.eps, eps * 0.5);
  }
  out.iterations = iter;
  out.marginal_error = marginal_error(options.eps);
  if (!(out.marginal_error <= options.marginal_tol)) {
    throw NumericalError("Sinkhorn did not reach the marginal tolerance");
  }
  double value = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      const double p = std::exp((f[i] + g[j] - cost[i * m + j]) / options.eps + la[i] + lb[j]);
      value += p * cost[i * m + j];
    }
  }
  out.w2 = std::sqrt(value);
  return out;
}

CheckReport spacetime_control_check(const ModelSpace& space, const MeasureFlow& mu,
                                    const MeasureFlow& nu,
                                    std::span<const std::pair<double, double>> pairs, double tol) {
  CheckReport rep;
  rep.name = "check_spacetime_control";
  rep.tol = tol;
  if (pairs.empty()) throw std::invalid_argument("space-time control needs (s, t) pairs");
  const double N = space.dimension();
  const double base = std::pow(quantile_w2(mu(0.0), nu(0.0)).w2, 2);
  double tightness = 0.0;
  for (const auto& [s, t] : pairs) {
    if (s < 0.0 || t < 0.0) throw std::invalid_argument("space-time pairs need s, t >= 0");
    const double lhs = std::pow(quantile_w2(mu(s), nu(t)).w2, 2);
    const double gap = std::sqrt(t) - std::sqrt(s);
    const double rhs = base + 2.0 * N * gap * gap;
    const double margin = rhs - lhs;
    tightness = std::max(tightness, std::abs(margin));
    SeriesPoint p;
    p.t = t;
    p.margin = margin;
    rep.add(p);
  }
  rep.metrics["max_abs_gap"] = tightness;
  rep.metrics["pairs"] = static_cast<double>(pairs.size());
  return rep.finish();
}

CheckReport geodesic_check(const ModelSpace& space, std::span<const std::pair<double, double>> pairs,
                           std::size_t cells, double tol) {
  if (!space.is_cone() || !has_closed_form_kernel(space) || !space.is_one_dimensional()) {
    throw std::invalid_argument("the geodesic check needs a one-dimensional cone");
  }
  CheckReport rep;
  rep.name = "check_geodesic";
  rep.tol = tol;
  const double N = space.dimension();
  SliceGrid grid;
  grid.cells = cells;
  const auto bar = [&](double tau) -> InitialMeasure {
    if (tau == 0.0) return DiracAt{space.base_point()};
    return closed_form_slice(space, DiracAt{space.base_point()}, tau * tau / (2.0 * N), grid);
  };
  double additivity = 0.0;
  for (const auto& [s, t] : pairs) {
    if (!(t >= s) || s < 0.0) throw std::invalid_argument("geodesic pairs need 0 <= s <= t");
    const auto ms = bar(s);
    const auto mt = bar(t);
    const double w = quantile_w2(ms, mt).w2;
    SeriesPoint p;
    p.t = t;
    p.margin = -std::abs(w - (t - s));
    rep.add(p);
    if (t > s) {
      const double mid = 0.5 * (s + t);
      const auto mm = bar(mid);
      const double split = quantile_w2(ms, mm).w2 + quantile_w2(mm, mt).w2;
      additivity = std::max(additivity, std::abs(split - w));
    }
  }
  rep.metrics["additivity_defect"] = additivity;
  return rep.finish();
}

}  // namespace wentropy
