#include "wentropy/scenario.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "wentropy/error.hpp"
#include "wentropy/kernels.hpp"

namespace wentropy {

namespace {

constexpr std::size_t kClosedFormDiracCells = 1 << 15;
constexpr std::size_t kClosedFormMixtureCells = 4096;
constexpr std::size_t kPdeCells = 4096;

std::size_t whole(double v, const char* what) {
  if (!(v >= 1.0) || v != std::floor(v) || v > 1e8) {
    throw ConfigError(std::string(what) + " must be a positive integer");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

InitialSpec InitialSpec::parse(std::string_view text) {
  const auto ks = config::parse_keyed_spec(text);
  InitialSpec s;
  if (ks.kind == "dirac") {
    ks.require_only({"r"});
    s.kind = InitialKind::Dirac;
    s.a = ks.number_or("r", 0.0);
  } else if (ks.kind == "bump") {
    ks.require_only({"center", "width"});
    s.kind = InitialKind::Bump;
    s.a = ks.number("center");
    s.b = ks.number("width");
    if (!(s.b > 0.0)) throw ConfigError("bump width must be positive");
  } else if (ks.kind == "uniform") {
    ks.require_only({"a", "b"});
    s.kind = InitialKind::Uniform;
    s.a = ks.number("a");
    s.b = ks.number("b");
    if (!(s.b > s.a)) throw ConfigError("uniform data needs a < b");
  } else if (ks.kind == "kernel") {
    ks.require_only({"x", "t0"});
    s.kind = InitialKind::Kernel;
    s.a = ks.number_or("x", 0.0);
    s.b = ks.number("t0");
    if (!(s.b > 0.0)) throw ConfigError("kernel t0 must be positive");
  } else {
    throw ConfigError("unknown initial measure '" + ks.kind + "'");
  }
  return s;
}

double InitialSpec::reach() const {
  switch (kind) {
    case InitialKind::None:
      return 0.0;
    case InitialKind::Dirac:
      return std::abs(a);
    case InitialKind::Bump:
      return std::abs(a) + b;
    case InitialKind::Uniform:
      return std::max(std::abs(a), std::abs(b));
    case InitialKind::Kernel:
      return std::abs(a) + 12.0 * std::sqrt(b);
  }
  return 0.0;
}

EngineSpec EngineSpec::parse(std::string_view text) {
  const auto ks = config::parse_keyed_spec(text);
  EngineSpec e;
  if (ks.kind == "closed_form") {
    ks.require_only({"M", "width", "sources"});
    e.closed_form = true;
    if (ks.has("width")) e.width = ks.number("width");
    if (ks.has("sources")) e.sources = whole(ks.number("sources"), "sources");
    if (!(e.width > 0.0)) throw ConfigError("width must be positive");
  } else if (ks.kind == "pde") {
    ks.require_only({"M", "dt", "scheme", "r_max"});
    e.closed_form = false;
    if (ks.has("dt")) e.dt = ks.number("dt");
    if (!(e.dt > 0.0)) throw ConfigError("dt must be positive");
    if (ks.has("scheme")) {
      const auto sc = ks.text_or("scheme", "");
      if (sc == "cn") {
        e.scheme = Scheme::CrankNicolson;
      } else if (sc == "ie") {
        e.scheme = Scheme::ImplicitEuler;
      } else {
        throw ConfigError("unknown scheme '" + sc + "' (cn or ie)");
      }
    }
    if (ks.has("r_max")) {
      e.r_max = ks.number("r_max");
      if (!(*e.r_max > 0.0)) throw ConfigError("r_max must be positive");
    }
  } else {
    throw ConfigError("unknown engine '" + ks.kind + "'");
  }
  if (ks.has("M")) e.cells = whole(ks.number("M"), "M");
  return e;
}

std::vector<double> parse_time_grid(std::string_view text) {
  const auto ks = config::parse_keyed_spec(text);
  if (ks.kind != "geometric") throw ConfigError("unknown time grid '" + ks.kind + "'");
  ks.require_only({"t_min", "t_max", "points"});
  const double lo = ks.number("t_min");
  const double hi = ks.number("t_max");
  const auto n = whole(ks.number("points"), "points");
  if (!(lo > 0.0)) throw ConfigError("t_min must be positive");
  if (!(hi > lo)) throw ConfigError("t_max must exceed t_min");
  if (n < 2) throw ConfigError("a time grid needs at least 2 points");
  return geometric_times(lo, hi, n);
}

ScenarioTraits Scenario::traits() const {
  return {space, initial.kind != InitialKind::None, initial.point_source(), engine.closed_form};
}

namespace {

std::vector<double> numbers_of(const config::Value& v, const std::string& key) {
  if (v.is_number()) return {v.as_number()};
  if (!v.is_array()) throw ConfigError("parameter '" + key + "' must be a number or array");
  std::vector<double> out;
  for (const auto& x : v.as_array()) {
    if (!x.is_number()) throw ConfigError("parameter '" + key + "' must hold numbers");
    out.push_back(x.as_number());
  }
  return out;
}

const std::string& string_field(const config::Table& t, const std::string& key, const std::string& where) {
  const auto it = t.find(key);
  if (it == t.end()) throw ConfigError(where + ": missing '" + key + "'");
  if (!it->second.is_string()) throw ConfigError(where + ": '" + key + "' must be a string");
  return it->second.as_string();
}

Scenario parse_one(const config::Table& t, std::size_t index) {
  Scenario s;
  std::string where = "scenario " + std::to_string(index + 1);
  static const std::set<std::string, std::less<>> known{
      "name", "space", "initial", "engine", "times", "checks", "expect_fail", "expect",
      "tolerances", "params"};
  for (const auto& [k, v] : t) {
    if (!known.count(k)) throw ConfigError(where + ": unknown key '" + k + "'");
  }
  s.name = string_field(t, "name", where);
  where = "scenario '" + s.name + "'";
  if (s.name.empty() || s.name.find_first_of("/\\ ") != std::string::npos) {
    throw ConfigError(where + ": names must be non-empty without spaces or slashes");
  }
  try {
    s.space_text = string_field(t, "space", where);
    s.space = ModelSpace::parse(s.space_text);
    if (t.count("initial")) {
      s.initial_text = string_field(t, "initial", where);
      s.initial = InitialSpec::parse(s.initial_text);
      const auto in = [&](double x) { return s.space.contains(x); };
      switch (s.initial.kind) {
        case InitialKind::Bump:
          if (!in(s.initial.a - s.initial.b) || !in(s.initial.a + s.initial.b)) {
            throw ConfigError("bump support leaves the space");
          }
          break;
        case InitialKind::Uniform:
          if (!in(s.initial.a) || !in(s.initial.b)) throw ConfigError("uniform support leaves the space");
          break;
        default:
          if (!in(s.initial.a)) throw ConfigError("source point outside the space");
      }
    }
    s.engine = EngineSpec::parse(t.count("engine") ? string_field(t, "engine", where) : "closed_form");
    s.times = parse_time_grid(string_field(t, "times", where));

    const auto ct = t.find("checks");
    if (ct == t.end() || !ct->second.is_array()) throw ConfigError("'checks' must be an array");
    for (const auto& c : ct->second.as_array()) {
      if (!c.is_string()) throw ConfigError("'checks' must hold strings");
      s.checks.push_back(c.as_string());
    }
    if (s.checks.empty()) throw ConfigError("no checks listed");

    if (const auto e = t.find("expect_fail"); e != t.end()) {
      if (e->second.is_bool()) {
        s.expect_fail_all = e->second.as_bool();
      } else if (e->second.is_array()) {
        for (const auto& c : e->second.as_array()) {
          if (!c.is_string()) throw ConfigError("'expect_fail' must hold check names");
          s.expect_fail.insert(c.as_string());
        }
      } else {
        throw ConfigError("'expect_fail' must be a boolean or an array of check names");
      }
    }
    if (const auto e = t.find("expect"); e != t.end()) {
      if (!e->second.is_string()) throw ConfigError("'expect' must be \"pass\" or \"fail\"");
      const auto& v = e->second.as_string();
      if (v == "fail") {
        s.expect_fail_all = true;
      } else if (v != "pass") {
        throw ConfigError("'expect' must be \"pass\" or \"fail\"");
      }
    }
    for (const auto& c : s.expect_fail) {
      if (std::find(s.checks.begin(), s.checks.end(), c) == s.checks.end()) {
        throw ConfigError("expect_fail names '" + c + "', which is not among the checks");
      }
    }
    if (const auto e = t.find("tolerances"); e != t.end()) {
      if (!e->second.is_table()) throw ConfigError("'tolerances' must be a table");
      for (const auto& [k, v] : e->second.as_table()) {
        if (!v.is_number() || !(v.as_number() >= 0.0)) {
          throw ConfigError("tolerance '" + k + "' must be a nonnegative number");
        }
        if (std::find(s.checks.begin(), s.checks.end(), k) == s.checks.end()) {
          throw ConfigError("tolerance given for '" + k + "', which is not among the checks");
        }
        s.tolerances[k] = v.as_number();
      }
    }
    if (const auto e = t.find("params"); e != t.end()) {
      if (!e->second.is_table()) throw ConfigError("'params' must be a table");
      for (const auto& [k, v] : e->second.as_table()) s.params[k] = numbers_of(v, k);
    }

    const auto traits = s.traits();
    for (const auto& c : s.checks) {
      const auto* info = find_check(c);
      if (!info) throw ConfigError("unknown check '" + c + "'");
      if (const auto why = info->unsupported(traits); !why.empty()) {
        throw ConfigError(c + " " + why);
      }
    }
    if (s.initial.kind != InitialKind::None && s.engine.closed_form &&
        !has_closed_form_kernel(s.space)) {
      throw ConfigError(s.space.name() + " has no closed-form heat kernel; use the pde engine");
    }
    if (s.initial.kind == InitialKind::Kernel && !has_closed_form_kernel(s.space)) {
      throw ConfigError("kernel data needs a closed-form heat kernel");
    }
  } catch (const ConfigError& e) {
    throw ConfigError(where + ": " + e.what());
  }
  return s;
}

}  // namespace

std::vector<Scenario> parse_scenarios(const config::Table& root) {
  for (const auto& [k, v] : root) {
    if (k != "scenario") throw ConfigError("unknown top-level key '" + k + "'");
  }
  const auto it = root.find("scenario");
  if (it == root.end() || !it->second.is_array() || it->second.as_array().empty()) {
    throw ConfigError("no [[scenario]] tables");
  }
  std::vector<Scenario> out;
  std::set<std::string> names;
  const auto& arr = it->second.as_array();
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_table()) throw ConfigError("'scenario' must be an array of tables");
    auto s = parse_one(arr[i].as_table(), i);
    if (!names.insert(s.name).second) throw ConfigError("duplicate scenario name '" + s.name + "'");
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<Scenario> load_scenarios(const std::string& path) {
  return parse_scenarios(config::parse_toml_file(path));
}

namespace {

GridPtr source_grid(const ModelSpace& space, const InitialSpec& in, std::size_t cells) {
  double r = in.reach();
  if (space.kind() == SpaceKind::Interval) r = space.length();
  return make_grid(space, r, cells);
}

GridDensity grid_data(const ModelSpace& space, const InitialSpec& in, GridPtr grid) {
  switch (in.kind) {
    case InitialKind::Bump:
      return GridDensity::bump(std::move(grid), in.a, in.b);
    case InitialKind::Uniform:
      return GridDensity::uniform(std::move(grid), in.a, in.b);
    case InitialKind::Kernel: {
      const double x = in.a;
      const double t0 = in.b;
      return GridDensity::sample(std::move(grid),
                                 [&](double y) { return heat_kernel(space, t0, x, y); });
    }
    default:
      throw ConfigError("not grid data");
  }
}

FlowData closed_form_flow(const Scenario& s) {
  const auto& space = s.space;
  const auto& in = s.initial;
  SliceGrid grid;
  grid.width = s.engine.width;
  if (in.point_source()) {
    // The line grid covers both sides of the source.
    const std::size_t sides = space.kind() == SpaceKind::WeightedLine ? 2 : 1;
    grid.cells = s.engine.cells ? s.engine.cells : sides * kClosedFormDiracCells;
    const DiracAt src{in.a};
    const double shift = in.kind == InitialKind::Kernel ? in.b : 0.0;
    const auto at = [space, src, shift, grid](double t) {
      return closed_form_slice(space, src, t + shift, grid);
    };
    InitialMeasure initial = src;
    if (shift > 0.0) initial = closed_form_slice(space, src, shift, grid);
    FlowTrajectory traj(s.times, FlowSource::ClosedForm, at);
    return make_flow_data(space, std::move(initial), in.a, shift, true, std::move(traj), at);
  }
  grid.cells = s.engine.cells ? s.engine.cells : kClosedFormMixtureCells;
  const InitialMeasure initial = grid_data(space, in, source_grid(space, in, s.engine.sources));
  const auto at = [space, initial, grid](double t) { return closed_form_slice(space, initial, t, grid); };
  FlowTrajectory traj(s.times, FlowSource::ClosedForm, at);
  return make_flow_data(space, initial, std::nullopt, 0.0, true, std::move(traj), at);
}

FlowData pde_flow(const Scenario& s) {
  const auto& space = s.space;
  const auto& in = s.initial;
  PdeOptions opts;
  opts.dt = s.engine.dt;
  opts.scheme = s.engine.scheme.value_or(in.kind == InitialKind::Uniform ? Scheme::ImplicitEuler
                                                                         : Scheme::CrankNicolson);
  double r_max = s.engine.r_max.value_or(in.reach() + 10.0 * std::sqrt(s.times.back()));
  if (space.kind() == SpaceKind::Interval) r_max = space.length();
  const auto grid = make_grid(space, r_max, s.engine.cells ? s.engine.cells : kPdeCells);

  if (in.kind == InitialKind::Dirac) {
    const DiracAt src{in.a};
    auto traj = evolve_pde(grid, src, s.times, opts);
    const auto at = [grid, src, opts](double t) {
      const double ts[] = {t};
      return evolve_pde(grid, src, ts, opts).slice(0);
    };
    return make_flow_data(space, src, in.a, 0.0, false, std::move(traj), at);
  }
  const auto initial = grid_data(space, in, grid);
  auto traj = evolve_pde(initial, s.times, opts);
  const auto at = [initial, opts](double t) {
    const double ts[] = {t};
    return evolve_pde(initial, ts, opts).slice(0);
  };
  std::optional<double> dirac;
  double shift = 0.0;
  if (in.kind == InitialKind::Kernel) {
    dirac = in.a;
    shift = in.b;
  }
  return make_flow_data(space, initial, dirac, shift, false, std::move(traj), at);
}

}  // namespace

FlowData build_flow(const Scenario& s) {
  if (s.initial.kind == InitialKind::None) throw ConfigError("scenario has no initial measure");
  return s.engine.closed_form ? closed_form_flow(s) : pde_flow(s);
}

bool ScenarioResult::ok() const {
  return !outcomes.empty() &&
         std::all_of(outcomes.begin(), outcomes.end(), [](const CheckOutcome& o) { return o.ok; });
}

ScenarioResult run_scenario(const Scenario& s, double tol_scale) {
  const auto start = std::chrono::steady_clock::now();
  ScenarioResult result;
  result.name = s.name;
  if (s.initial.kind != InitialKind::None) result.flow = build_flow(s);
  for (const auto& name : s.checks) {
    const auto* info = find_check(name);
    if (!info) throw ConfigError("unknown check '" + name + "'");
    const auto over = s.tolerances.find(name);
    const double tol =
        (over != s.tolerances.end() ? over->second : info->default_tol(s.engine.closed_form)) * tol_scale;
    CheckOutcome out;
    out.expected_fail = s.expects_failure(name);
    const CheckContext ctx{s.space, result.flow ? &*result.flow : nullptr, s.times, s.params, tol,
                           s.engine.closed_form};
    try {
      out.report = info->run(ctx);
    } catch (const NumericalError& e) {
      out.report.name = name;
      out.report.tol = tol;
      out.report.worst_margin = kNaN;
      out.report.note = e.what();
      out.report.finish();
      out.ok = false;
      out.report.anchor = info->anchor;
      result.outcomes.push_back(std::move(out));
      continue;
    }
    out.report.name = name;
    out.report.anchor = info->anchor;
    out.ok = out.expected_fail ? out.report.strictly_violated() : out.report.pass;
    result.outcomes.push_back(std::move(out));
  }
  result.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

}  // namespace wentropy
