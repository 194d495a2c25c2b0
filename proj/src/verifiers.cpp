#include "wentropy/verifiers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "wentropy/quadrature.hpp"

namespace wentropy {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

SeriesPoint row(const FunctionalSample& s, double margin) {
  return {s.t, s.entropy, s.fisher, s.w_entropy, margin, false};
}

SeriesPoint level_row(double margin) {
  SeriesPoint p;
  p.margin = margin;
  return p;
}

void require_samples(std::span<const FunctionalSample> samples, std::size_t n, const char* what) {
  if (samples.size() < n) {
    throw std::invalid_argument(std::string(what) + " needs at least " + std::to_string(n) +
                                " time slices");
  }
}

CheckReport make_report(const char* name, double tol) {
  CheckReport rep;
  rep.name = name;
  rep.tol = tol;
  return rep;
}

}  // namespace

InitialMeasure FlowData::measure_at(double t) const {
  if (t == 0.0) return initial;
  return at(t);
}

// The real line is a cone over two points about each of its points.
static bool translation_invariant(const ModelSpace& space) {
  return space.kind() == SpaceKind::WeightedLine && space.dimension() == 1.0;
}

double FlowData::vertex() const {
  return dirac && translation_invariant(space) ? *dirac : space.base_point();
}

bool FlowData::is_vertex_flow() const {
  return dirac && *dirac == vertex() && time_shift == 0.0 && space.is_cone();
}

FlowData make_flow_data(ModelSpace space, InitialMeasure initial, std::optional<double> dirac,
                        double time_shift, bool closed_form, FlowTrajectory trajectory,
                        std::function<GridDensity(double)> at) {
  auto samples = sample_trajectory(trajectory);
  return FlowData{std::move(space), std::move(initial), dirac, time_shift, closed_form,
                  std::move(trajectory), std::move(samples), std::move(at)};
}

CheckReport check_w_monotonicity(const ModelSpace& space, std::span<const FunctionalSample> samples,
                                 double t_shift, double tol) {
  require_samples(samples, 2, "W monotonicity");
  if (t_shift < 0.0) throw std::invalid_argument("t' must be nonnegative");
  auto rep = make_report("check_w_monotonicity", tol);
  const double N = space.dimension();
  const auto W = [&](const FunctionalSample& s) {
    return w_from_parts(N, s.t + t_shift, s.entropy, s.fisher);
  };
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    rep.add(row(samples[k + 1], W(samples[k]) - W(samples[k + 1])));
  }
  rep.metrics["t_shift"] = t_shift;
  rep.metrics["w_first"] = W(samples.front());
  rep.metrics["w_last"] = W(samples.back());
  return rep.finish();
}

CheckReport check_rescaled_fisher(const ModelSpace& space, std::span<const FunctionalSample> samples,
                                  std::span<const double> alphas, std::span<const double> shifts,
                                  double tol) {
  require_samples(samples, 2, "rescaled Fisher monotonicity");
  if (alphas.empty() || shifts.empty()) throw std::invalid_argument("alpha and t' lists are empty");
  auto rep = make_report("check_rescaled_fisher", tol);
  const double N = space.dimension();
  for (double a : alphas) {
    for (double sh : shifts) {
      if (sh < 0.0) throw std::invalid_argument("t' must be nonnegative");
      double worst_i = kInf;
      double worst_ii = kInf;
      for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
        const auto& lo = samples[k];
        const auto& hi = samples[k + 1];
        const double s = lo.t;
        const double t = hi.t;
        const double ps = std::pow(s + sh, a);
        const double pt = std::pow(t + sh, a);
        // Margins are scaled by (N/2)(t + t')^{2 alpha} / t, the size of
        // each term along the vertex flow.
        const double scale_i = 0.5 * N * pt * pt / t;
        const double lhs = pt * pt * hi.fisher;
        const double rhs = ps * ps * lo.fisher + 0.5 * N * (pt - ps) * (pt - ps) / (t - s);
        const double m_i = (rhs - lhs) / scale_i;
        const auto v = [&](const FunctionalSample& x) {
          return (x.t + sh) * (x.t + sh) * x.fisher - 0.5 * N * x.t;
        };
        const double scale_ii = 0.5 * N * (t + sh) * (t + sh) / t;
        const double m_ii = (v(lo) - v(hi)) / scale_ii;
        worst_i = std::min(worst_i, m_i);
        worst_ii = std::min(worst_ii, m_ii);
        rep.add(row(hi, std::min(m_i, m_ii)));
      }
      const std::string key = "alpha=" + std::to_string(a) + ",t'=" + std::to_string(sh);
      rep.metrics["pre_mono[" + key + "]"] = worst_i;
      rep.metrics["shifted_fisher[" + key + "]"] = worst_ii;
    }
  }
  return rep.finish();
}

CheckReport check_fisher_monotone(std::span<const FunctionalSample> samples, double tol) {
  require_samples(samples, 2, "Fisher monotonicity");
  auto rep = make_report("check_fisher_monotone", tol);
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const double scale = std::max(samples[k].fisher, std::numeric_limits<double>::min());
    rep.add(row(samples[k + 1], (samples[k].fisher - samples[k + 1].fisher) / scale));
  }
  return rep.finish();
}

CheckReport check_fisher_bound(const ModelSpace& space, std::span<const FunctionalSample> samples,
                               double tol) {
  require_samples(samples, 1, "the Fisher bound");
  auto rep = make_report("check_fisher_bound", tol);
  const double N = space.dimension();
  double max_abs = 0.0;
  for (const auto& s : samples) {
    const double m = 1.0 - 2.0 * s.t * s.fisher / N;
    max_abs = std::max(max_abs, std::abs(m));
    rep.add(row(s, m));
  }
  rep.finish();
  rep.flags["rigid"] = max_abs <= tol;
  rep.metrics["max_abs_margin"] = max_abs;
  return rep;
}

CheckReport check_rigidity_constancy(const ModelSpace& space,
                                     std::span<const FunctionalSample> samples, double tol) {
  require_samples(samples, 2, "W constancy");
  (void)space;
  auto rep = make_report("check_rigidity_constancy", tol);
  double lo = kInf;
  double hi = -kInf;
  double sum = 0.0;
  for (const auto& s : samples) {
    lo = std::min(lo, s.w_entropy);
    hi = std::max(hi, s.w_entropy);
    sum += s.w_entropy;
    rep.add(row(s, -(hi - lo)));
  }
  rep.finish();
  rep.flags["constant"] = rep.pass;
  rep.metrics["w_spread"] = hi - lo;
  rep.metrics["w_mean"] = sum / static_cast<double>(samples.size());
  // Strictly decreasing W is the expected failure mode off the vertex.
  bool decreasing = true;
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    decreasing = decreasing && samples[k + 1].w_entropy < samples[k].w_entropy;
  }
  rep.flags["strictly_decreasing"] = decreasing;
  return rep;
}

namespace {

// Sample points for the Li-Yau check, avoiding the coordinate origin.
std::vector<double> li_yau_points(const ModelSpace& space, double source, double reach,
                                  std::size_t points) {
  double lo = std::max(space.lower_end(), source - reach);
  double hi = std::min(space.upper_end(), source + reach);
  if (space.kind() == SpaceKind::WeightedLine && space.dimension() >= 2.0 && source != 0.0) {
    // The kernel vanishes on the far half-line.
    if (source > 0.0) lo = std::max(lo, 0.0);
    else hi = std::min(hi, 0.0);
  }
  std::vector<double> ys;
  for (std::size_t i = 0; i < points; ++i) {
    const double y = lo + (hi - lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(points);
    if (y != 0.0) ys.push_back(y);
  }
  return ys;
}

}  // namespace

CheckReport check_li_yau(const ModelSpace& space, double source, double shift,
                         std::span<const double> times, std::size_t points, double tol) {
  if (times.empty()) throw std::invalid_argument("Li-Yau check needs times");
  if (points < 4) throw std::invalid_argument("Li-Yau check needs at least 4 points per time");
  auto rep = make_report("check_li_yau", tol);
  const double N = space.dimension();
  double saturation = 0.0;
  double min_margin = kInf;
  for (double t : times) {
    const double tk = t + shift;
    const auto ys = li_yau_points(space, source, 10.0 * std::sqrt(tk), points);
    double worst = kInf;
    for (double y : ys) {
      const auto d = heat_kernel_log_derivatives(space, tk, source, y);
      const double lhs = -d.hessian - (N - 1.0) * d.score / y;
      const double margin = N / (2.0 * t) - lhs;
      rep.record(margin);
      worst = std::min(worst, margin);
      saturation = std::max(saturation, std::abs(margin));
    }
    min_margin = std::min(min_margin, worst);
    SeriesPoint p;
    p.t = t;
    p.margin = worst;
    rep.series.push_back(p);
  }
  rep.finish();
  rep.metrics["max_abs_margin"] = saturation;
  rep.metrics["min_margin"] = min_margin;
  rep.flags["saturated"] = saturation <= tol;
  rep.flags["strict"] = min_margin > 0.0;
  return rep;
}

CheckReport check_li_yau(const FlowTrajectory& flow, double tol) {
  auto rep = make_report("check_li_yau", tol);
  rep.note = "discrete derivatives; margins scaled by 2t/N";
  double saturation = 0.0;
  for (std::size_t k = 0; k < flow.size(); ++k) {
    const double t = flow.time(k);
    const GridDensity rho = flow.slice(k);
    const double N = rho.space().dimension();
    const auto lap = weighted_laplacian(rho.grid_ptr());
    const auto lrho = lap.apply(rho.values());
    const auto x = rho.grid().nodes();
    double peak = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) peak = std::max(peak, rho[i]);
    const double floor = 1e-8 * peak;
    double worst = kInf;
    for (std::size_t i = 2; i + 2 < rho.size(); ++i) {
      if (rho[i - 1] < floor || rho[i] < floor || rho[i + 1] < floor) continue;
      const double s = (std::log(rho[i + 1]) - std::log(rho[i - 1])) / (x[i + 1] - x[i - 1]);
      const double lhs = s * s - lrho[i] / rho[i];
      const double margin = 1.0 - 2.0 * t * lhs / N;
      rep.record(margin);
      worst = std::min(worst, margin);
      saturation = std::max(saturation, std::abs(margin));
    }
    SeriesPoint p;
    p.t = t;
    p.margin = worst;
    rep.series.push_back(p);
  }
  rep.finish();
  rep.metrics["max_abs_margin"] = saturation;
  rep.flags["saturated"] = saturation <= tol;
  return rep;
}

CheckReport check_metric_speed(const FlowData& flow, double eta, double order_constant, double tol) {
  auto rep = make_report("check_metric_speed", tol);
  const auto& samples = flow.samples;
  require_samples(samples, 2, "the metric speed check");
  if (flow.closed_form) {
    if (!(eta > 0.0 && eta < 0.5)) throw std::invalid_argument("eta must lie in (0, 1/2)");
    for (const auto& s : samples) {
      const double w = quantile_w2(flow.at(s.t * (1.0 - eta)), flow.at(s.t * (1.0 + eta))).w2;
      const double speed = w / (2.0 * eta * s.t);
      rep.add(row(s, -std::abs(speed * speed / s.fisher - 1.0)));
    }
    rep.metrics["eta"] = eta;
  } else {
    for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
      const auto& lo = samples[k];
      const auto& hi = samples[k + 1];
      const double w = quantile_w2(flow.trajectory.slice(k), flow.trajectory.slice(k + 1)).w2;
      const double speed = w / (hi.t - lo.t);
      const double fisher = std::sqrt(lo.fisher * hi.fisher);
      const double dlog = std::log(hi.t / lo.t);
      rep.add(row(hi, order_constant * dlog * dlog - std::abs(speed * speed / fisher - 1.0)));
    }
    rep.metrics["order_constant"] = order_constant;
  }
  return rep.finish();
}

CheckReport check_vertex_flow(const FlowData& flow, double tol) {
  auto rep = make_report("check_vertex_flow", tol);
  const ModelSpace& space = flow.space;
  for (std::size_t k = 0; k < flow.trajectory.size(); ++k) {
    const double t = flow.trajectory.time(k);
    const GridDensity rho = flow.trajectory.slice(k);
    std::vector<double> profile(rho.size());
    const double x0 = flow.vertex();
    for (std::size_t i = 0; i < rho.size(); ++i) {
      const double d = rho.grid().node(i) - x0;
      profile[i] = std::exp(-d * d / (4.0 * t));
    }
    const GridDensity hat = space.kind() == SpaceKind::Interval
                                ? GridDensity::normalized(rho.grid_ptr(), std::move(profile))
                                : GridDensity::normalized(rho.grid_ptr(), [&] {
                                    std::vector<double> v(rho.size());
                                    for (std::size_t i = 0; i < v.size(); ++i) {
                                      v[i] = cone_vertex_density(space, t, rho.grid().node(i) - x0);
                                    }
                                    return v;
                                  }());
    rep.add(row(flow.samples[k], -l1_distance(rho, hat)));
  }
  if (space.kind() == SpaceKind::HalfLineCone) {
    // The off-vertex Bessel kernel tends to the vertex kernel as x -> 0.
    double defect = 0.0;
    for (double t : {0.1, 1.0, 10.0}) {
      for (double y : {0.0, 0.5, 1.0, 3.0}) {
        const double r = std::sqrt(t) * y;
        const double a = bessel_density(space.dimension(), t, 1e-9, r);
        const double b = cone_vertex_density(space, t, r);
        defect = std::max(defect, std::abs(a / b - 1.0));
      }
    }
    rep.metrics["bessel_limit_defect"] = defect;
    rep.record(-defect);
  }
  return rep.finish();
}

DiniQuotients dini_quotients(const ModelSpace& space, const std::function<GridDensity(double)>& at,
                             double t_star, std::size_t levels) {
  if (!(t_star > 0.0) || levels == 0) throw std::invalid_argument("Dini detector needs t_* > 0");
  DiniQuotients out;
  out.t_star = t_star;
  const double N = space.dimension();
  const auto W = [&](double t) {
    const GridDensity rho = at(t);
    return w_from_parts(N, t, entropy(rho), fisher(rho));
  };
  const double w0 = W(t_star);
  for (std::size_t k = 1; k <= levels; ++k) {
    const double h = t_star * std::ldexp(1.0, -static_cast<int>(k));
    out.steps.push_back(h);
    out.quotients.push_back((W(t_star + h) - w0) / h);
  }
  return out;
}

CheckReport check_dini_rigidity(const FlowData& flow, double t_star, std::size_t levels, double tol) {
  auto rep = make_report("check_dini_rigidity", tol);
  const auto d = dini_quotients(flow.space, flow.at, t_star, levels);
  double largest = -kInf;
  for (std::size_t k = 0; k < d.steps.size(); ++k) {
    SeriesPoint p;
    p.t = t_star + d.steps[k];
    p.margin = -std::abs(d.quotients[k]);
    rep.add(p);
    largest = std::max(largest, d.quotients[k]);
  }
  rep.finish();
  rep.metrics["t_star"] = t_star;
  rep.metrics["finest_quotient"] = d.quotients.back();
  rep.metrics["max_quotient"] = largest;
  rep.flags["rigid_at_t_star"] = rep.pass;
  return rep;
}

CheckReport check_bishop_gromov(const ModelSpace& space, double tol) {
  auto rep = make_report("check_bishop_gromov", tol);
  std::vector<double> points{space.base_point()};
  if (space.kind() != SpaceKind::Euclidean) {
    for (double x : {0.5, 1.0, -0.7}) {
      if (space.contains(x) && x != space.base_point()) points.push_back(x);
    }
  }
  const auto radii = geometric_times(0.01, 50.0, 25);
  double base_defect = 0.0;
  for (double x : points) {
    for (std::size_t i = 0; i < radii.size(); ++i) {
      for (std::size_t j = i + 1; j < radii.size(); ++j) {
        const auto bg = x == space.base_point() ? bishop_gromov_ratio(space, radii[i], radii[j])
                                                : bishop_gromov_ratio_at(space, x, radii[i], radii[j]);
        const double rel = (bg.bound - bg.ratio) / bg.bound;
        rep.record(rel);
        if (x == space.base_point()) base_defect = std::max(base_defect, std::abs(rel));
      }
    }
  }
  rep.finish();
  rep.metrics["base_equality_defect"] = base_defect;
  rep.flags["equality_at_base"] = base_defect <= 1e-12;
  rep.series.push_back(level_row(rep.worst_margin));
  return rep.finish();
}

CheckReport check_heat_kernel_bounds(const ModelSpace& space, const HeatKernelBoundsOptions& o) {
  if (!has_closed_form_kernel(space)) throw std::invalid_argument("no closed-form kernel");
  if (!(o.delta > 0.0 && o.delta < 4.0)) throw std::invalid_argument("delta must lie in (0, 4)");
  auto rep = make_report("check_heat_kernel_bounds", 0.0);
  std::vector<double> sources{space.base_point()};
  if (space.kind() != SpaceKind::Euclidean) sources.push_back(1.0);
  double log_c = -kInf;
  for (double t : geometric_times(o.t_min, o.t_max, o.times)) {
    double worst_t = -kInf;
    for (double x : sources) {
      const double log_v = std::log(space.kind() == SpaceKind::Euclidean
                                        ? space.ball_volume(std::sqrt(t))
                                        : space.ball_volume_at(x, std::sqrt(t)));
      const double reach = 6.0 * std::sqrt(t);
      for (int i = 0; i <= 96; ++i) {
        const double y = x - reach + 2.0 * reach * i / 96.0;
        if (!space.contains(y)) continue;
        const double d = space.kind() == SpaceKind::Euclidean ? std::abs(y) : space.distance(x, y);
        const double lp = log_heat_kernel(space, t, x, y);
        if (!std::isfinite(lp)) continue;  // kernel vanishes identically there
        const double upper = lp + log_v + d * d / ((4.0 + o.delta) * t);
        const double lower = lp + log_v + d * d / ((4.0 - o.delta) * t);
        worst_t = std::max({worst_t, upper, -lower});
      }
    }
    log_c = std::max(log_c, worst_t);
    SeriesPoint p;
    p.t = t;
    p.margin = std::log(o.C_max) - worst_t;
    rep.add(p);
  }
  rep.finish();
  rep.metrics["empirical_C"] = std::exp(log_c);
  rep.metrics["C_max"] = o.C_max;
  rep.metrics["delta"] = o.delta;
  return rep;
}

CheckReport check_varadhan(const ModelSpace& space, double source, std::span<const double> times,
                           double limit) {
  if (times.size() < 2) throw std::invalid_argument("Varadhan check needs >= 2 times");
  auto rep = make_report("check_varadhan", 0.0);
  const bool line = space.kind() == SpaceKind::WeightedLine;
  std::vector<double> sups;
  for (double t : times) {
    double sup = 0.0;
    for (int i = 0; i <= 240; ++i) {
      const double d = 3.0 * i / 240.0;
      for (double y : {source + d, source - d}) {
        if (!space.contains(y) || (!line && y < 0.0)) continue;
        const double lp = log_heat_kernel(space, t, source, y);
        if (!std::isfinite(lp)) continue;
        const double dist = space.kind() == SpaceKind::Euclidean ? std::abs(y) : std::abs(y - source);
        sup = std::max(sup, std::abs(4.0 * t * lp + dist * dist));
      }
    }
    sups.push_back(sup);
    SeriesPoint p;
    p.t = t;
    p.margin = sups.size() > 1 ? sups[sups.size() - 2] - sup : kInf;
    if (sups.size() > 1) rep.add(p);
  }
  // The last time must reach the limit.
  rep.record(limit - sups.back());
  rep.finish();
  rep.metrics["sup_last"] = sups.back();
  rep.metrics["limit"] = limit;
  return rep;
}

std::vector<TestBump> default_test_bumps(const ModelSpace& space) {
  switch (space.kind()) {
    case SpaceKind::WeightedLine:
      return {{-1.5, 1.0}, {0.25, 1.0}, {2.0, 0.75}};
    case SpaceKind::Interval: {
      const double L = space.length();
      return {{0.4 * L, 0.2 * L}, {0.6 * L, 0.3 * L}, {L, 0.3 * L}};
    }
    default:
      return {{1.5, 1.0}, {3.0, 1.5}, {2.5, 0.5}};
  }
}

CheckReport check_laplacian_comparison(const ModelSpace& space, std::span<const TestBump> bumps,
                                       std::size_t cells, double tol) {
  if (bumps.empty()) throw std::invalid_argument("Laplacian comparison needs test functions");
  if (cells < 16) throw std::invalid_argument("Laplacian comparison needs >= 16 cells");
  auto rep = make_report("check_laplacian_comparison", tol);
  const double N = space.dimension();
  const double x0 = space.base_point();
  double max_defect = 0.0;
  double min_signed = kInf;
  for (const auto& b : bumps) {
    if (!(b.width > 0.0)) throw std::invalid_argument("test bumps need positive width");
    const double lo = std::max(space.lower_end(), b.center - b.width);
    const double hi = std::min(space.upper_end(), b.center + b.width);
    if (!(hi > lo)) throw std::invalid_argument("test bump misses the space");
    double lhs = 0.0;
    double rhs = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < cells; ++i) {
      const double a = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(cells);
      const double c = lo + (hi - lo) * static_cast<double>(i + 1) / static_cast<double>(cells);
      const double r = 0.5 * (a + c);
      const double m = space.measure(a, c);
      const double u = (r - b.center) / b.width;
      const double f = bump_profile(u);
      const double df = bump_profile_derivative(u) / b.width;
      lhs -= 2.0 * (r - x0) * df * m;
      rhs += 2.0 * N * f * m;
      norm += std::abs(f) * m;
    }
    const double defect = (lhs - rhs) / norm;
    max_defect = std::max(max_defect, std::abs(defect));
    min_signed = std::min(min_signed, defect);
    rep.add(level_row(-std::abs(defect)));
  }
  rep.finish();
  rep.metrics["max_abs_defect"] = max_defect;
  rep.metrics["most_negative_defect"] = min_signed;
  return rep;
}

CheckReport check_gradient_estimate(const ModelSpace& space, std::span<const double> times,
                                    const GradientEstimateOptions& o, double tol) {
  if (times.empty()) throw std::invalid_argument("gradient estimate needs times");
  auto rep = make_report("check_gradient_estimate", tol);
  const double r_max = space.kind() == SpaceKind::Interval ? space.length() : o.r_max;
  if (!(o.clip > 0.0)) throw std::invalid_argument("clip level must be positive");
  const GridPtr grid = make_grid(space, r_max, o.cells);
  const double x0 = space.base_point();
  std::vector<double> f(grid->size()), g(grid->size());
  for (std::size_t i = 0; i < grid->size(); ++i) {
    const double d = std::abs(grid->node(i) - x0);
    f[i] = std::min(d, o.clip);
    g[i] = d < o.clip ? 1.0 : 0.0;
  }
  const auto pf = evolve_function(grid, f, times, o.pde);
  const auto pg = evolve_function(grid, g, times, o.pde);
  const auto x = grid->nodes();
  for (std::size_t k = 0; k < times.size(); ++k) {
    double worst = kInf;
    for (std::size_t b = 0; b + 1 < grid->size(); ++b) {
      const double lhs = std::abs(pf[k][b + 1] - pf[k][b]) / (x[b + 1] - x[b]);
      const double rhs = 0.5 * (pg[k][b] + pg[k][b + 1]);
      const double m = rhs - lhs;
      rep.record(m);
      worst = std::min(worst, m);
    }
    SeriesPoint p;
    p.t = times[k];
    p.margin = worst;
    rep.series.push_back(p);
  }
  rep.metrics["clip"] = o.clip;
  return rep.finish();
}

CheckReport check_volume_identity(const ModelSpace& space, std::span<const double> times, double tol) {
  if (!space.is_one_dimensional() && space.kind() != SpaceKind::Euclidean) {
    throw std::invalid_argument("volume identity needs a radial space");
  }
  if (space.base_point() != 0.0) throw std::invalid_argument("volume identity is taken at r = 0");
  auto rep = make_report("check_volume_identity", tol);
  const double N = space.dimension();
  const double c = space.kind() == SpaceKind::Interval
                       ? cone_vertex_constant(ModelSpace::half_line_cone(N))
                       : cone_vertex_constant(space);
  const double top = space.kind() == SpaceKind::Interval ? space.length() : kInf;
  const auto V = [&](double r) { return space.ball_volume(r); };
  // dV/dr of the ball volume about the origin.
  const auto dV = [&](double r) {
    if (r >= top) return 0.0;
    const double w = space.weight(r);
    return space.kind() == SpaceKind::WeightedLine ? 2.0 * w : w;
  };
  std::vector<double> sample_times(times.begin(), times.end());
  if (sample_times.size() > 10) {
    std::vector<double> thin;
    for (std::size_t k = 0; k < 10; ++k) {
      thin.push_back(sample_times[k * (sample_times.size() - 1) / 9]);
    }
    sample_times = thin;
  }
  double worst_z1 = 0.0, worst_z2 = 0.0, worst_m = 0.0;
  for (double t : sample_times) {
    const double b = std::min(top, 40.0 * std::sqrt(t));
    const auto edges = graded_edges(b, 64);
    const double zc = c * std::pow(t, 0.5 * N);
    const double z1 = integrate_panels([&](double r) { return r * V(r) * std::exp(-r * r / (4.0 * t)); },
                                       graded_edges(40.0 * std::sqrt(t), 64)) /
                      (2.0 * t);
    const double z2 = integrate_panels([&](double r) { return std::exp(-r * r / (4.0 * t)) * dV(r); },
                                       edges);
    const double mom =
        integrate_panels([&](double r) { return r * r * std::exp(-r * r / (4.0 * t)) * dV(r); },
                         edges) /
        z2;
    const double e1 = std::abs(z1 / zc - 1.0);
    const double e2 = std::abs(z2 / zc - 1.0);
    const double em = std::abs(mom / (2.0 * N * t) - 1.0);
    worst_z1 = std::max(worst_z1, e1);
    worst_z2 = std::max(worst_z2, e2);
    worst_m = std::max(worst_m, em);
    SeriesPoint p;
    p.t = t;
    p.margin = -std::max({e1, e2, em});
    rep.add(p);
  }
  // Least-squares slope of log V against log r.
  const auto radii = geometric_times(0.1, 10.0, 21);
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (double r : radii) {
    const double lx = std::log(r);
    const double ly = std::log(V(r));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double n = static_cast<double>(radii.size());
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  rep.add(level_row(-std::abs(slope - N)));
  rep.finish();
  rep.metrics["z_from_volume_defect"] = worst_z1;
  rep.metrics["z_from_weight_defect"] = worst_z2;
  rep.metrics["second_moment_defect"] = worst_m;
  rep.metrics["volume_slope"] = slope;
  rep.metrics["c_star"] = c;
  return rep;
}

CheckReport check_c_infimum(const ModelSpace& space, std::span<const double> times,
                            const FamilySpec& spec, double tol) {
  if (times.size() < 2) throw std::invalid_argument("c(t) check needs >= 2 times");
  auto rep = make_report("check_c_infimum", tol);
  const auto family = build_family(space, spec);
  const double q = scale_ratio(spec.scales);
  std::vector<CInfimumEstimate> est;
  for (double t : times) est.push_back(c_infimum_estimate(space, t, family, q));
  double lsi = kInf;
  for (std::size_t k = 0; k < est.size(); ++k) {
    lsi = std::min(lsi, est[k].lsi_margin);
    if (k == 0) continue;
    SeriesPoint p;
    p.t = est[k].t;
    p.w_entropy = est[k].value;
    p.margin = est[k - 1].value + est[k].family_gap - est[k].value;
    rep.add(p);
  }
  rep.record(lsi);  // defective log-Sobolev readout
  rep.finish();
  rep.metrics["family_size"] = static_cast<double>(family.size());
  rep.metrics["family_gap"] = est.front().family_gap;
  rep.metrics["estimate_first"] = est.front().value;
  rep.metrics["estimate_last"] = est.back().value;
  rep.metrics["lsi_margin"] = lsi;
  rep.note = "upper estimate of c(t) over a parametric family";
  return rep;
}

}  // namespace wentropy
