#include <doctest.h>

#include <cmath>
#include <ios>
#include <string>

#include "wentropy/config.hpp"
#include "wentropy/error.hpp"
#include "wentropy/scenario.hpp"

using namespace wentropy;

namespace {

std::vector<Scenario> parse(const std::string& text) {
  return parse_scenarios(config::parse_toml(text));
}

const std::string kBase =
    "[[scenario]]\n"
    "name = \"a\"\n"
    "space = \"cone:N=2\"\n"
    "initial = \"dirac:r=0\"\n"
    "engine = \"closed_form\"\n"
    "times = \"geometric:t_min=0.1,t_max=10,points=5\"\n";

}  // namespace

TEST_CASE("strict numbers") {
  CHECK(config::parse_number("1.5") == 1.5);
  CHECK(config::parse_number("-2e-3") == -2e-3);
  CHECK_THROWS_AS(config::parse_number("abc"), ConfigError);
  CHECK_THROWS_AS(config::parse_number("1.5x"), ConfigError);
  CHECK_THROWS_AS(config::parse_number(""), ConfigError);
}

TEST_CASE("keyed specs") {
  const auto s = config::parse_keyed_spec("pde:M=512,dt=1e-3,scheme=ie");
  CHECK(s.kind == "pde");
  CHECK(s.number("M") == 512.0);
  CHECK(s.text_or("scheme", "cn") == "ie");
  CHECK(s.number_or("r_max", 7.0) == 7.0);
  CHECK_THROWS_AS(s.require_only({"M", "dt"}), ConfigError);
  CHECK(config::parse_keyed_spec("closed_form").entries.empty());
}

TEST_CASE("toml subset") {
  const auto t = config::parse_toml(
      "# comment\n"
      "top = 3\n"
      "[section]\n"
      "s = \"x # not a comment\"  # trailing\n"
      "flag = true\n"
      "list = [1, 2.5,\n  -3e2]\n"
      "inline = { a = 1, b = \"q\" }\n"
      "[[item]]\nk = 1\n[[item]]\nk = 2\n");
  CHECK(t.at("top").as_number() == 3.0);
  const auto& sec = t.at("section").as_table();
  CHECK(sec.at("s").as_string() == "x # not a comment");
  CHECK(sec.at("flag").as_bool());
  CHECK(sec.at("list").as_array().size() == 3);
  CHECK(sec.at("list").as_array()[2].as_number() == -300.0);
  CHECK(sec.at("inline").as_table().at("b").as_string() == "q");
  CHECK(t.at("item").as_array().size() == 2);
  CHECK(t.at("item").as_array()[1].as_table().at("k").as_number() == 2.0);

  CHECK_THROWS_AS(config::parse_toml("a = \n"), ConfigError);
  CHECK_THROWS_AS(config::parse_toml("a = 1\na = 2\n"), ConfigError);
  CHECK_THROWS_AS(config::parse_toml("a = \"open\n"), ConfigError);
  CHECK_THROWS_AS(config::parse_toml("[x\n"), ConfigError);
  CHECK_THROWS_AS(config::parse_toml_file("/nonexistent/file.toml"), std::ios_base::failure);
}

TEST_CASE("time grids") {
  const auto g = parse_time_grid("geometric:t_min=0.05,t_max=20,points=50");
  REQUIRE(g.size() == 50);
  CHECK(g.front() == doctest::Approx(0.05).epsilon(1e-14));
  CHECK(g.back() == doctest::Approx(20.0).epsilon(1e-14));
  for (std::size_t i = 1; i < g.size(); ++i) {
    CHECK(g[i] > g[i - 1]);
    CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-12));
  }
  CHECK_THROWS_AS(parse_time_grid("geometric:t_min=0,t_max=1,points=5"), ConfigError);
  CHECK_THROWS_AS(parse_time_grid("geometric:t_min=2,t_max=1,points=5"), ConfigError);
  CHECK_THROWS_AS(parse_time_grid("geometric:t_min=1,t_max=2,points=1"), ConfigError);
  CHECK_THROWS_AS(parse_time_grid("linear:t_min=1,t_max=2,points=3"), ConfigError);
}

TEST_CASE("initial and engine specs") {
  const auto b = InitialSpec::parse("bump:center=2,width=1");
  CHECK(b.kind == InitialKind::Bump);
  CHECK(b.reach() == doctest::Approx(3.0));
  CHECK_FALSE(b.point_source());
  CHECK(InitialSpec::parse("dirac:r=1").point_source());
  CHECK(InitialSpec::parse("kernel:x=1,t0=0.5").point_source());
  CHECK_THROWS_AS(InitialSpec::parse("uniform:a=2,b=1"), ConfigError);
  CHECK_THROWS_AS(InitialSpec::parse("bump:center=1,width=-1"), ConfigError);
  CHECK_THROWS_AS(InitialSpec::parse("gauss:s=1"), ConfigError);

  const auto p = EngineSpec::parse("pde:M=512,dt=2e-3,scheme=ie,r_max=9");
  CHECK_FALSE(p.closed_form);
  CHECK(p.cells == 512);
  CHECK(p.dt == 2e-3);
  CHECK(p.r_max.value() == 9.0);
  CHECK(EngineSpec::parse("closed_form").closed_form);
  CHECK_THROWS_AS(EngineSpec::parse("pde:scheme=rk4"), ConfigError);
  CHECK_THROWS_AS(EngineSpec::parse("spectral"), ConfigError);
}

TEST_CASE("scenario parsing") {
  const auto s = parse(kBase + "checks = [\"check_li_yau\", \"check_fisher_bound\"]\n"
                               "expect_fail = [\"check_li_yau\"]\n"
                               "tolerances = { check_li_yau = 1e-6 }\n"
                               "params = { alpha = [0, 1], eta = 0.01 }\n");
  REQUIRE(s.size() == 1);
  CHECK(s[0].name == "a");
  CHECK(s[0].times.size() == 5);
  CHECK(s[0].checks.size() == 2);
  CHECK(s[0].expects_failure("check_li_yau"));
  CHECK_FALSE(s[0].expects_failure("check_fisher_bound"));
  CHECK(s[0].tolerances.at("check_li_yau") == 1e-6);
  CHECK(s[0].params.at("alpha").size() == 2);
  CHECK(s[0].params.at("eta").front() == 0.01);

  const auto all = parse(kBase + "checks = [\"check_li_yau\"]\nexpect = \"fail\"\n");
  CHECK(all[0].expect_fail_all);
  CHECK(all[0].expects_failure("anything"));
}

TEST_CASE("scenario validation") {
  CHECK_THROWS_AS(parse(kBase + "checks = [\"check_nonexistent\"]\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "checks = [\"check_li_yau\"]\nbogus = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse(kBase + "checks = [\"check_li_yau\"]\n" + kBase + "checks = []\n"), ConfigError);
  // volume identity needs the origin.
  CHECK_THROWS_AS(parse("[[scenario]]\nname = \"b\"\nspace = \"interval:L=2,N=2\"\n"
                        "initial = \"dirac:r=0\"\nengine = \"closed_form\"\n"
                        "times = \"geometric:t_min=0.1,t_max=1,points=3\"\nchecks = []\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[[scenario]]\nname = \"c\"\nspace = \"cone:N=abc\"\nchecks = []\n"),
                  ConfigError);
  CHECK_THROWS_AS(parse("[[scenario]]\nname = \"d\"\nspace = \"interval:L=2,N=2\"\n"
                        "initial = \"bump:center=1.9,width=1\"\nengine = \"pde\"\n"
                        "times = \"geometric:t_min=0.1,t_max=1,points=3\"\nchecks = []\n"),
                  ConfigError);
  try {
    parse(kBase + "checks = [\"check_nonexistent\"]\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("scenario 'a'") != std::string::npos);
  }
}

TEST_CASE("bundled configs parse") {
  const std::string dir = WENTROPY_SOURCE_DIR "/configs/";
  const auto rig = load_scenarios(dir + "rigidity.toml");
  CHECK(rig.size() >= 4);
  for (const auto& s : rig) CHECK_FALSE(s.expect_fail_all);
  const auto neg = load_scenarios(dir + "negative-controls.toml");
  bool any_expected = false;
  for (const auto& s : neg) any_expected = any_expected || s.expect_fail_all || !s.expect_fail.empty();
  CHECK(any_expected);
}

TEST_CASE("run_scenario honours expected failures") {
  const std::string off =
      "[[scenario]]\nname = \"off\"\nspace = \"cone:N=2\"\ninitial = \"dirac:r=1\"\n"
      "engine = \"closed_form\"\ntimes = \"geometric:t_min=0.1,t_max=10,points=12\"\n"
      "checks = [\"check_rigidity_constancy\", \"check_fisher_bound\"]\n";
  const auto plain = parse(off);
  const auto r = run_scenario(plain[0]);
  REQUIRE(r.outcomes.size() == 2);
  CHECK_FALSE(r.outcomes[0].ok);
  CHECK(r.outcomes[1].ok);
  CHECK_FALSE(r.ok());

  const auto marked = parse(off + "expect_fail = [\"check_rigidity_constancy\"]\n");
  const auto m = run_scenario(marked[0]);
  CHECK(m.outcomes[0].expected_fail);
  CHECK(m.outcomes[0].ok);
  CHECK(m.ok());

  // An expected failure that passes is not ok.
  const auto wrong = parse(off + "expect_fail = [\"check_fisher_bound\"]\n");
  CHECK_FALSE(run_scenario(wrong[0]).ok());

  // Anchors come from the registry; the tolerance scale multiplies defaults.
  const auto scaled = run_scenario(plain[0], 10.0);
  CHECK(scaled.outcomes[1].report.tol == doctest::Approx(10.0 * r.outcomes[1].report.tol));
  CHECK_FALSE(r.outcomes[1].report.anchor.empty());
}
