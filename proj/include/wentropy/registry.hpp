#pragma once

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wentropy/verifiers.hpp"

namespace wentropy {

/// Per-scenario check parameters; scalars are one-element lists.
using CheckParams = std::map<std::string, std::vector<double>, std::less<>>;

double param(const CheckParams& params, std::string_view key, double fallback);
std::vector<double> param_list(const CheckParams& params, std::string_view key,
                               std::vector<double> fallback);

/// What a scenario offers to its checks, known before any flow is run.
struct ScenarioTraits {
  ModelSpace space;
  bool has_flow = false;     // an initial measure is given
  bool point_source = false; // the initial measure is a Dirac mass or kernel
  bool closed_form = true;   // engine
};

struct CheckContext {
  const ModelSpace& space;
  const FlowData* flow;  // null when the scenario has no initial measure
  std::span<const double> times;
  const CheckParams& params;
  double tol;
  bool closed_form;
};

struct CheckInfo {
  std::string name;
  /// Label and quote of the statement the check certifies.
  std::string anchor;
  /// Statement labels certified by the check.
  std::vector<std::string> covers;
  double tol_closed_form;
  double tol_pde;
  bool needs_flow;
  /// Empty when the check applies, else the reason it does not.
  std::function<std::string(const ScenarioTraits&)> unsupported;
  std::function<CheckReport(const CheckContext&)> run;

  double default_tol(bool closed_form) const { return closed_form ? tol_closed_form : tol_pde; }
};

/// All checks, sorted by name.
const std::vector<CheckInfo>& check_registry();
const CheckInfo* find_check(std::string_view name);
/// Statement labels the suite is expected to certify.
const std::vector<std::string>& certified_statements();
/// "name — anchor" lines in registry order.
std::string list_checks_text();

}  // namespace wentropy
