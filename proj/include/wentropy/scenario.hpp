#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "wentropy/config.hpp"
#include "wentropy/pde.hpp"
#include "wentropy/registry.hpp"

namespace wentropy {

enum class InitialKind { None, Dirac, Bump, Uniform, Kernel };

/// dirac:r=, bump:center=,width=, uniform:a=,b=, kernel:x=,t0=.
struct InitialSpec {
  InitialKind kind = InitialKind::None;
  double a = 0.0;  // r, center, a or x
  double b = 0.0;  // width, b or t0

  static InitialSpec parse(std::string_view text);
  /// Largest |coordinate| the data touches.
  double reach() const;
  bool point_source() const { return kind == InitialKind::Dirac || kind == InitialKind::Kernel; }
};

/// closed_form[:M=,width=,sources=] or pde[:M=,dt=,scheme=cn|ie,r_max=].
struct EngineSpec {
  bool closed_form = true;
  std::size_t cells = 0;  // 0 picks a default
  double width = 12.0;
  std::size_t sources = 256;
  double dt = 1e-3;
  std::optional<Scheme> scheme;
  std::optional<double> r_max;

  static EngineSpec parse(std::string_view text);
};

struct Scenario {
  std::string name;
  std::string space_text;
  ModelSpace space = ModelSpace::half_line_cone(1.0);
  std::string initial_text;
  InitialSpec initial;
  EngineSpec engine;
  std::vector<double> times;
  std::vector<std::string> checks;
  bool expect_fail_all = false;
  std::set<std::string> expect_fail;
  std::map<std::string, double> tolerances;
  CheckParams params;

  bool expects_failure(const std::string& check) const {
    return expect_fail_all || expect_fail.count(check) > 0;
  }
  ScenarioTraits traits() const;
};

/// geometric:t_min=,t_max=,points=.
std::vector<double> parse_time_grid(std::string_view text);

/// Reads every [[scenario]] table; names must be unique and every check
/// must exist and apply.
std::vector<Scenario> parse_scenarios(const config::Table& root);
std::vector<Scenario> load_scenarios(const std::string& path);

/// Runs the heat flow of a scenario with an initial measure.
FlowData build_flow(const Scenario& scenario);

struct CheckOutcome {
  CheckReport report;
  bool expected_fail = false;
  /// Pass, or a strict violation where one was expected.
  bool ok = false;
};

struct ScenarioResult {
  std::string name;
  std::optional<FlowData> flow;
  std::vector<CheckOutcome> outcomes;
  double seconds = 0.0;

  bool ok() const;
};

/// Tolerances are the check defaults (or overrides) times tol_scale.
ScenarioResult run_scenario(const Scenario& scenario, double tol_scale = 1.0);

}  // namespace wentropy
