#pragma once

#include <ostream>
#include <string>

#include "wentropy/scenario.hpp"

namespace wentropy {

inline constexpr const char* kCsvHeader = "scenario,check,t,entropy,fisher,w_entropy,margin,pass";

/// %.17e, with "nan" and "inf" spelled without a sign where it has none.
std::string format_number(double v);

/// Header plus one row per (check, series point).
void write_csv(std::ostream& out, const ScenarioResult& result);
/// Panels of W(t), 2t I(t) / N and the check margins against log t.
void write_svg(std::ostream& out, const ScenarioResult& result, double dimension);

}  // namespace wentropy
