#include "wentropy/registry.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "wentropy/error.hpp"

namespace wentropy {

double param(const CheckParams& params, std::string_view key, double fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.size() != 1) {
    throw ConfigError("parameter '" + std::string(key) + "' must be a single number");
  }
  return it->second.front();
}

std::vector<double> param_list(const CheckParams& params, std::string_view key,
                               std::vector<double> fallback) {
  const auto it = params.find(key);
  if (it == params.end()) return fallback;
  if (it->second.empty()) throw ConfigError("parameter '" + std::string(key) + "' is empty");
  return it->second;
}

namespace {

std::size_t count_param(const CheckParams& p, std::string_view key, double fallback) {
  const double v = param(p, key, fallback);
  if (!(v >= 1.0) || v != std::floor(v)) {
    throw ConfigError("parameter '" + std::string(key) + "' must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

std::string needs_flow(const ScenarioTraits& s) {
  return s.has_flow ? "" : "needs an initial measure";
}

std::string needs_1d_flow(const ScenarioTraits& s) {
  if (!s.has_flow) return "needs an initial measure";
  if (!s.space.is_one_dimensional()) return "needs a space with d(x, y) = |x - y|";
  return "";
}

std::string needs_kernel(const ScenarioTraits& s) {
  return has_closed_form_kernel(s.space) ? "" : "needs a closed-form heat kernel";
}

std::string needs_1d_cone(const ScenarioTraits& s) {
  if (!s.space.is_cone() || !s.space.is_one_dimensional()) return "needs a one-dimensional cone";
  return "";
}

std::string needs_origin(const ScenarioTraits& s) {
  return s.space.base_point() == 0.0 ? "" : "needs the base point at r = 0";
}

std::string always(const ScenarioTraits&) { return ""; }

const FlowData& flow_of(const CheckContext& c) {
  if (!c.flow) throw ConfigError("check needs an initial measure");
  return *c.flow;
}

// Scenario times restricted to [lo, hi], thinned to at most `count`.
std::vector<double> window(std::span<const double> times, double lo, double hi, std::size_t count) {
  std::vector<double> in;
  for (double t : times) {
    if (t >= lo && t <= hi) in.push_back(t);
  }
  if (in.size() <= count) return in;
  std::vector<double> out;
  for (std::size_t k = 0; k < count; ++k) out.push_back(in[k * (in.size() - 1) / (count - 1)]);
  return out;
}

std::vector<CheckInfo> build_registry() {
  std::vector<CheckInfo> r;

  r.push_back({"check_bishop_gromov", "eq:BG 'the Bishop-Gromov inequality'",
               {"eq:BG", "thm:G-DP", "cone"}, 1e-12, 1e-12, false, always,
               [](const CheckContext& c) { return check_bishop_gromov(c.space, c.tol); }});

  r.push_back({"check_c_infimum", "thm:mono-LSI 'Then $c$ is non-increasing'",
               {"thm:mono-LSI", "rem:LSI"}, 1e-8, 1e-8, false, always,
               [](const CheckContext& c) {
                 if (c.times.size() < 2) throw ConfigError("check_c_infimum needs >= 2 times");
                 FamilySpec f;
                 f.centers = param_list(c.params, "family_centers", {c.space.base_point()});
                 const double lo = param(c.params, "family_scale_min", c.times.front() / 4.0);
                 const double hi = param(c.params, "family_scale_max", 4.0 * c.times.back());
                 f.scales = geometric_scales(lo, hi, count_param(c.params, "family_scales", 41));
                 f.bump_widths = param_list(c.params, "family_bump_widths", {0.5, 1.0, 2.0});
                 f.cells = count_param(c.params, "family_cells", 1 << 14);
                 return check_c_infimum(c.space, c.times, f, c.tol);
               }});

  r.push_back({"check_dini_rigidity", "thm:rigid-W 'the right upper derivative of'",
               {"thm:rigid-W"}, 1e-6, 1e-3, true, needs_flow,
               [](const CheckContext& c) {
                 return check_dini_rigidity(flow_of(c), param(c.params, "t_star", 1.0),
                                            count_param(c.params, "dini_levels", 10), c.tol);
               }});

  r.push_back({"check_dissipation", "eq:E-dissipation 'solves the energy dissipation identity'",
               {"eq:E-dissipation", "relative-entropy"}, 1e-6, 1e-3, true, needs_flow,
               [](const CheckContext& c) {
                 return dissipation_check(c.space, flow_of(c).samples, c.tol,
                                          param(c.params, "order_constant", 1.0));
               }});

  r.push_back({"check_fisher_bound", "eq:less-I 'I ( P_t \\mu ) \\le \\frac{N}{2t}'",
               {"lem:less-I", "eq:less-I", "eq:id-I"}, 1e-8, 1e-3, true, needs_flow,
               [](const CheckContext& c) { return check_fisher_bound(c.space, flow_of(c).samples, c.tol); }});

  r.push_back({"check_fisher_monotone", "lem:mono-I 'non-increasing on $[ 0 , \\infty )$'",
               {"lem:mono-I"}, 1e-8, 1e-3, true, needs_flow,
               [](const CheckContext& c) { return check_fisher_monotone(flow_of(c).samples, c.tol); }});

  r.push_back({"check_geodesic", "prop:hat-G 'unit-speed minimal geodesic in'", {"prop:hat-G"},
               1e-5, 1e-5, false, needs_1d_cone,
               [](const CheckContext& c) {
                 const auto taus = param_list(c.params, "geodesic_times",
                                              {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0});
                 std::vector<std::pair<double, double>> pairs;
                 for (std::size_t i = 0; i < taus.size(); ++i) {
                   for (std::size_t j = i + 1; j < taus.size(); ++j) pairs.emplace_back(taus[i], taus[j]);
                 }
                 return geodesic_check(c.space, pairs, count_param(c.params, "geodesic_cells", 8192),
                                       c.tol);
               }});

  r.push_back({"check_gradient_estimate", "eq:BE1 '$L^1$-gradient estimate'", {"eq:BE1"}, 1e-3,
               1e-3, false, always,
               [](const CheckContext& c) {
                 GradientEstimateOptions o;
                 o.clip = param(c.params, "clip", 2.0);
                 o.r_max = param(c.params, "gradient_r_max", 8.0);
                 o.cells = count_param(c.params, "gradient_cells", 2048);
                 o.pde.scheme = Scheme::ImplicitEuler;
                 o.pde.dt = param(c.params, "gradient_dt", 1e-3);
                 const auto times = window(c.times, 0.0, param(c.params, "gradient_t_max", 4.0), 12);
                 if (times.empty()) throw ConfigError("check_gradient_estimate: no times in range");
                 return check_gradient_estimate(c.space, times, o, c.tol);
               }});

  r.push_back({"check_heat_kernel_bounds", "eq:HKe 'admits a sharp two-sided'", {"eq:HKe"}, 0.0, 0.0,
               false, needs_kernel,
               [](const CheckContext& c) {
                 HeatKernelBoundsOptions o;
                 o.delta = param(c.params, "delta", 1.0);
                 o.C_max = param(c.params, "C_max", 1e3);
                 auto rep = check_heat_kernel_bounds(c.space, o);
                 rep.tol = c.tol;
                 return rep.finish();
               }});

  r.push_back({"check_laplacian_comparison", "eq:id-d 'in a distributional sense'",
               {"prop:id-d", "eq:id-d", "rem:id-d"}, 1e-6, 1e-6, false, always,
               [](const CheckContext& c) {
                 std::vector<TestBump> bumps;
                 const auto centers = param_list(c.params, "bump_centers", {});
                 const auto widths = param_list(c.params, "bump_widths", {});
                 if (centers.size() != widths.size()) {
                   throw ConfigError("bump_centers and bump_widths differ in length");
                 }
                 for (std::size_t i = 0; i < centers.size(); ++i) bumps.push_back({centers[i], widths[i]});
                 if (bumps.empty()) bumps = default_test_bumps(c.space);
                 return check_laplacian_comparison(c.space, bumps,
                                                   count_param(c.params, "laplacian_cells", 8192), c.tol);
               }});

  r.push_back({"check_li_yau", "eq:LY 'following Li-Yau inequality'", {"eq:LY"}, 1e-8, 1e-3, true,
               needs_flow,
               [](const CheckContext& c) {
                 const auto& f = flow_of(c);
                 if (f.closed_form && f.dirac) {
                   return check_li_yau(c.space, *f.dirac, f.time_shift, c.times,
                                       count_param(c.params, "li_yau_points", 257), c.tol);
                 }
                 return check_li_yau(f.trajectory, c.tol);
               }});

  r.push_back({"check_metric_speed", "eq:E-dissipation 'the metric speed'",
               {"metric-speed", "eq:Fisher"}, 1e-3, 2e-2, true, needs_1d_flow,
               [](const CheckContext& c) {
                 return check_metric_speed(flow_of(c), param(c.params, "eta", 1e-2),
                                           param(c.params, "order_constant", 1.0), c.tol);
               }});

  r.push_back({"check_rescaled_fisher", "eq:pre-mono 'and $\\alpha \\in \\mathbb{R}$'",
               {"prop:mono-I2", "eq:pre-mono"}, 1e-8, 1e-3, true, needs_flow,
               [](const CheckContext& c) {
                 const auto alphas = param_list(c.params, "alpha", {0.0, 0.5, 1.0});
                 const auto shifts = param_list(c.params, "t_shift", {0.0, 1.0});
                 return check_rescaled_fisher(c.space, flow_of(c).samples, alphas, shifts, c.tol);
               }});

  r.push_back({"check_rigidity_constancy", "thm:rigid-W 'is a constant function of'",
               {"thm:rigid-W", "cone"}, 1e-7, 1e-3, true, needs_flow,
               [](const CheckContext& c) {
                 return check_rigidity_constancy(c.space, flow_of(c).samples, c.tol);
               }});

  r.push_back({"check_spacetime_control",
               "eq:control 'space-time $W_2$-control for heat distributions'", {"eq:control"}, 1e-6,
               1e-3, true, needs_1d_flow,
               [](const CheckContext& c) {
                 const auto& f = flow_of(c);
                 const double lo = param(c.params, "control_t_min", 0.1);
                 const double hi = param(c.params, "control_t_max", 4.0);
                 const auto ts = window(c.times, lo, hi, count_param(c.params, "control_times", 6));
                 std::vector<double> pts{0.0};
                 pts.insert(pts.end(), ts.begin(), ts.end());
                 if (pts.size() < 2) throw ConfigError("check_spacetime_control: no times in range");
                 std::vector<std::pair<double, double>> pairs;
                 for (double s : pts) {
                   for (double t : pts) {
                     if (s != t) pairs.emplace_back(s, t);
                   }
                 }
                 std::map<double, InitialMeasure> cache;
                 for (double t : pts) cache.emplace(t, f.measure_at(t));
                 const MeasureFlow flow = [&cache](double t) { return cache.at(t); };
                 return spacetime_control_check(c.space, flow, flow, pairs, c.tol);
               }});

  r.push_back({"check_varadhan", "Varadhan 'the Varadhan type short time asymptotic'",
               {"varadhan"}, 0.0, 0.0, false, needs_kernel,
               [](const CheckContext& c) {
                 const double x = c.flow && c.flow->dirac ? *c.flow->dirac : c.space.base_point();
                 const auto times = param_list(c.params, "varadhan_times", {1e-1, 1e-2, 1e-3});
                 auto rep = check_varadhan(c.space, x, times, param(c.params, "varadhan_limit", 0.1));
                 rep.tol = c.tol;
                 return rep.finish();
               }});

  r.push_back({"check_vertex_flow", "prop:hat-GF '$\\hat{\\mu}_t = P_t \\delta_{x_0}$'",
               {"prop:hat-GF"}, 1e-8, 1e-3, true, needs_flow,
               [](const CheckContext& c) { return check_vertex_flow(flow_of(c), c.tol); }});

  r.push_back({"check_volume_identity", "eq:vol1 'Z(t) = c_* t^{N/2}'", {"lem:hat-F", "eq:vol1"},
               1e-8, 1e-8, false, needs_origin,
               [](const CheckContext& c) { return check_volume_identity(c.space, c.times, c.tol); }});

  r.push_back({"check_w_monotonicity", "thm:mono-W 'is non-increasing in'",
               {"thm:mono-W", "W-entropy"}, 1e-6, 1e-3, true, needs_flow,
               [](const CheckContext& c) {
                 const auto shifts = param_list(c.params, "t_shift", {0.0});
                 CheckReport all;
                 bool first = true;
                 for (double sh : shifts) {
                   auto rep = check_w_monotonicity(c.space, flow_of(c).samples, sh, c.tol);
                   if (first) {
                     all = rep;
                     first = false;
                     continue;
                   }
                   for (const auto& p : rep.series) all.add(p);
                   for (const auto& [k, v] : rep.metrics) all.metrics[k + "@" + std::to_string(sh)] = v;
                 }
                 return all.finish();
               }});

  std::sort(r.begin(), r.end(), [](const CheckInfo& a, const CheckInfo& b) { return a.name < b.name; });
  return r;
}

}  // namespace

const std::vector<CheckInfo>& check_registry() {
  static const std::vector<CheckInfo> registry = build_registry();
  return registry;
}

const CheckInfo* find_check(std::string_view name) {
  for (const auto& c : check_registry()) {
    if (c.name == name) return &c;
  }
  return nullptr;
}

const std::vector<std::string>& certified_statements() {
  static const std::vector<std::string> items{
      "relative-entropy", "eq:Fisher",   "metric-speed", "eq:E-dissipation", "eq:control",
      "eq:BE1",           "eq:HKe",      "eq:LY",        "eq:BG",            "cone",
      "W-entropy",        "lem:mono-I",  "prop:mono-I2", "eq:pre-mono",      "thm:mono-W",
      "lem:less-I",       "eq:less-I",   "eq:id-I",      "prop:id-d",        "eq:id-d",
      "rem:id-d",         "lem:hat-F",   "eq:vol1",      "prop:hat-GF",      "varadhan",
      "thm:rigid-W",      "thm:G-DP",    "prop:hat-G",   "thm:mono-LSI",     "rem:LSI"};
  return items;
}

std::string list_checks_text() {
  std::ostringstream out;
  for (const auto& c : check_registry()) out << c.name << " — " << c.anchor << '\n';
  return out.str();
}

}  // namespace wentropy
