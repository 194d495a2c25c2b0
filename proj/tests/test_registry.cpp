#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include "wentropy/error.hpp"
#include "wentropy/registry.hpp"

using namespace wentropy;

namespace {

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::size_t occurrences(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

struct Anchor {
  std::string label;
  std::string quote;
};

Anchor split(const std::string& anchor) {
  const auto open = anchor.find(" '");
  REQUIRE(open != std::string::npos);
  REQUIRE(anchor.back() == '\'');
  return {anchor.substr(0, open), anchor.substr(open + 2, anchor.size() - open - 3)};
}

}  // namespace

TEST_CASE("registry is sorted and complete") {
  const auto& reg = check_registry();
  CHECK(reg.size() == 19);
  for (std::size_t i = 1; i < reg.size(); ++i) CHECK(reg[i - 1].name < reg[i].name);
  for (const auto& c : reg) {
    CHECK(c.name.rfind("check_", 0) == 0);
    CHECK(find_check(c.name) == &c);
    CHECK(c.tol_closed_form >= 0.0);
    CHECK(c.tol_pde >= c.tol_closed_form);
    CHECK(static_cast<bool>(c.run));
    CHECK(static_cast<bool>(c.unsupported));
  }
  CHECK(find_check("check_missing") == nullptr);
}

TEST_CASE("every anchor resolves in the source text") {
  const auto text = read_text(WENTROPY_SOURCE_DIR "/paper.md");
  std::set<std::string> anchors;
  for (const auto& c : check_registry()) {
    INFO(c.name);
    const auto a = split(c.anchor);
    CHECK(occurrences(text, a.quote) >= 1);
    if (a.label.find(':') != std::string::npos)
      CHECK(occurrences(text, "\\label{" + a.label + "}") == 1);
    CHECK(anchors.insert(c.anchor).second);
  }
}

TEST_CASE("covered statements match the catalogue with no orphans") {
  const auto text = read_text(WENTROPY_SOURCE_DIR "/paper.md");
  const auto& expected = certified_statements();
  const std::set<std::string> catalogue(expected.begin(), expected.end());
  CHECK(catalogue.size() == expected.size());
  std::set<std::string> covered;
  for (const auto& c : check_registry()) {
    INFO(c.name);
    CHECK_FALSE(c.covers.empty());
    for (const auto& item : c.covers) {
      CHECK(catalogue.count(item) == 1);
      covered.insert(item);
    }
  }
  CHECK(covered == catalogue);
  for (const auto& item : catalogue)
    if (item.find(':') != std::string::npos) {
      INFO(item);
      CHECK(occurrences(text, "\\label{" + item + "}") == 1);
    }
}

TEST_CASE("list-checks text") {
  const auto text = list_checks_text();
  CHECK(text.find("check_li_yau — eq:LY 'following Li-Yau inequality'\n") != std::string::npos);
  CHECK(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')) == check_registry().size());
  std::istringstream lines(text);
  std::string line;
  std::size_t i = 0;
  while (std::getline(lines, line)) {
    const auto& c = check_registry()[i++];
    CHECK(line == c.name + " — " + c.anchor);
  }
}

TEST_CASE("applicability") {
  ScenarioTraits cone{ModelSpace::half_line_cone(2), true, true, true};
  ScenarioTraits interval{ModelSpace::interval(2.0, 2.0), true, false, false};
  ScenarioTraits bare{ModelSpace::half_line_cone(2), false, false, true};
  for (const auto& c : check_registry()) {
    INFO(c.name);
    CHECK(c.unsupported(cone).empty());
    if (c.needs_flow) CHECK_FALSE(c.unsupported(bare).empty());
  }
  CHECK_FALSE(find_check("check_heat_kernel_bounds")->unsupported(interval).empty());
  // The volume identity runs on an interval from 0 as a negative control.
  CHECK(find_check("check_volume_identity")->unsupported(interval).empty());
  ScenarioTraits shifted{ModelSpace::interval(2.0, 2.0, 1.0), true, false, false};
  CHECK_FALSE(find_check("check_volume_identity")->unsupported(shifted).empty());
  CHECK(find_check("check_w_monotonicity")->unsupported(interval).empty());
}

TEST_CASE("parameter lookup") {
  const CheckParams p{{"eta", {0.5}}, {"alpha", {0.0, 1.0}}};
  CHECK(param(p, "eta", 1.0) == 0.5);
  CHECK(param(p, "missing", 1.0) == 1.0);
  CHECK(param_list(p, "alpha", {}).size() == 2);
  CHECK_THROWS_AS(param(p, "alpha", 1.0), ConfigError);
}
