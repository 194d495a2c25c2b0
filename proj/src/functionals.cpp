#include "wentropy/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace wentropy {

double entropy(const GridDensity& rho) {
  const auto& grid = rho.grid();
  double s = 0.0;
  for (std::size_t i = 0; i < rho.size(); ++i) {
    const double r = rho[i];
    if (r > 0.0) s += r * std::log(r) * grid.mass(i);
  }
  return s;
}

double fisher(const GridDensity& rho) {
  const auto& grid = rho.grid();
  const auto nodes = grid.nodes();
  double s = 0.0;
  for (std::size_t b = 0; b + 1 < rho.size(); ++b) {
    const double d = (std::sqrt(rho[b + 1]) - std::sqrt(rho[b])) / (nodes[b + 1] - nodes[b]);
    s += d * d * 0.5 * (grid.mass(b) + grid.mass(b + 1));
  }
  return 4.0 * s;
}

double fisher_direct(const GridDensity& rho, double floor) {
  const auto& grid = rho.grid();
  const auto nodes = grid.nodes();
  double s = 0.0;
  for (std::size_t b = 0; b + 1 < rho.size(); ++b) {
    const double mean = 0.5 * (rho[b] + rho[b + 1]);
    if (mean < floor) continue;
    const double d = (rho[b + 1] - rho[b]) / (nodes[b + 1] - nodes[b]);
    s += d * d / mean * 0.5 * (grid.mass(b) + grid.mass(b + 1));
  }
  return s;
}

double w_from_parts(double N, double t, double entropy, double fisher) {
  if (!(t > 0.0)) throw std::invalid_argument("W-entropy needs t > 0");
  return t * fisher - entropy - 0.5 * N * std::log(t);
}

FunctionalSample w_entropy(const GridDensity& rho, double t) {
  FunctionalSample s;
  s.t = t;
  s.entropy = entropy(rho);
  s.fisher = fisher(rho);
  s.w_entropy = w_from_parts(rho.space().dimension(), t, s.entropy, s.fisher);
  s.second_moment = rho.second_moment(rho.space().base_point());
  if (!std::isfinite(s.w_entropy)) throw std::domain_error("W-entropy is not finite");
  return s;
}

std::vector<FunctionalSample> sample_trajectory(const FlowTrajectory& flow) {
  std::vector<FunctionalSample> out;
  out.reserve(flow.size());
  for (std::size_t k = 0; k < flow.size(); ++k) out.push_back(w_entropy(flow.slice(k), flow.time(k)));
  return out;
}

namespace {

// Residual |dEnt/dt + I| in units of N / 2t, centred in log t with the
// given stride.
double residual(double N, std::span<const FunctionalSample> s, std::size_t k, std::size_t stride) {
  const auto& lo = s[k - stride];
  const auto& hi = s[k + stride];
  const double dlog = std::log(hi.t) - std::log(lo.t);
  const double dent_dt = (hi.entropy - lo.entropy) / dlog / s[k].t;
  return std::abs(dent_dt + s[k].fisher) * 2.0 * s[k].t / N;
}

}  // namespace

CheckReport dissipation_check(const ModelSpace& space, std::span<const FunctionalSample> samples,
                              double tol, double order_constant) {
  if (samples.size() < 3) throw std::invalid_argument("dissipation check needs >= 3 slices");
  const double N = space.dimension();
  CheckReport rep;
  rep.name = "check_dissipation";
  rep.tol = tol;
  double worst_1 = 0.0;
  double worst_2 = 0.0;
  double max_residual = 0.0;
  for (std::size_t k = 1; k + 1 < samples.size(); ++k) {
    const double r = residual(N, samples, k, 1);
    const double dlog = 0.5 * (std::log(samples[k + 1].t) - std::log(samples[k - 1].t));
    max_residual = std::max(max_residual, r);
    const auto& s = samples[k];
    rep.add({s.t, s.entropy, s.fisher, s.w_entropy, order_constant * dlog * dlog - r, false});
    if (k >= 2 && k + 2 < samples.size()) {
      worst_1 = std::max(worst_1, r);
      worst_2 = std::max(worst_2, residual(N, samples, k, 2));
    }
  }
  rep.metrics["max_residual"] = max_residual;
  rep.metrics["order_constant"] = order_constant;
  if (worst_1 > 0.0 && worst_2 > 0.0) rep.metrics["fitted_order"] = std::log2(worst_2 / worst_1);
  return rep.finish();
}

CheckReport dissipation_check(const ModelSpace& space, const FlowTrajectory& flow, double tol,
                              double order_constant) {
  const auto samples = sample_trajectory(flow);
  return dissipation_check(space, samples, tol, order_constant);
}

std::vector<double> geometric_scales(double s_min, double s_max, std::size_t count) {
  if (count == 1) return {s_min};
  return geometric_times(s_min, s_max, count);
}

double scale_ratio(std::span<const double> scales) {
  if (scales.size() < 2) return 1.0;
  double q = 1.0;
  for (std::size_t k = 1; k < scales.size(); ++k) q = std::max(q, scales[k] / scales[k - 1]);
  return q;
}

namespace {

GridPtr member_grid(const ModelSpace& space, double center, double reach, std::size_t cells) {
  if (space.kind() == SpaceKind::Interval) return make_grid(space, space.length(), cells);
  return make_grid(space, std::abs(center) + reach, cells);
}

}  // namespace

std::vector<FamilyMember> build_family(const ModelSpace& space, const FamilySpec& spec) {
  std::vector<FamilyMember> out;
  for (double x : spec.centers) {
    if (!space.contains(x)) throw std::invalid_argument("family center outside the space");
    for (double s : spec.scales) {
      if (!(s > 0.0)) throw std::invalid_argument("family scales must be positive");
      const GridPtr grid = member_grid(space, x, 12.0 * std::sqrt(s), spec.cells);
      const auto rho = GridDensity::sample(grid, [&](double r) {
        const double d = r - x;
        return std::exp(-d * d / (4.0 * s));
      });
      out.push_back({"profile(x=" + std::to_string(x) + ",s=" + std::to_string(s) + ")",
                     entropy(rho), fisher(rho)});
    }
    for (double w : spec.bump_widths) {
      if (!(w > 0.0)) throw std::invalid_argument("bump widths must be positive");
      const GridPtr grid = member_grid(space, x, w, spec.cells);
      const auto rho = GridDensity::bump(grid, x, w);
      out.push_back({"bump(x=" + std::to_string(x) + ",w=" + std::to_string(w) + ")",
                     entropy(rho), fisher(rho)});
    }
  }
  if (out.empty()) throw std::invalid_argument("the c(t) family is empty");
  return out;
}

CInfimumEstimate c_infimum_estimate(const ModelSpace& space, double t,
                                    std::span<const FamilyMember> family, double ratio) {
  if (family.empty()) throw std::invalid_argument("the c(t) family is empty");
  const double N = space.dimension();
  CInfimumEstimate est;
  est.t = t;
  est.family_size = family.size();
  est.value = std::numeric_limits<double>::infinity();
  for (const auto& m : family) {
    const double w = w_from_parts(N, t, m.entropy, m.fisher);
    if (w < est.value) {
      est.value = w;
      est.argmin = m.label;
    }
  }
  const auto f = [](double x) { return x - 1.0 - std::log(x); };
  const double root = std::sqrt(ratio);
  est.family_gap = 0.5 * N * std::max(f(root), f(1.0 / root));
  est.lsi_margin = std::numeric_limits<double>::infinity();
  for (const auto& m : family) {
    const double lhs = t * m.fisher - 0.5 * N * std::log(t) - est.value - m.entropy;
    est.lsi_margin = std::min(est.lsi_margin, lhs);
  }
  return est;
}

CInfimumEstimate c_infimum_estimate(const ModelSpace& space, double t, const FamilySpec& spec) {
  const auto family = build_family(space, spec);
  return c_infimum_estimate(space, t, family, scale_ratio(spec.scales));
}

}  // namespace wentropy
