#include <doctest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <sys/wait.h>

#include "wentropy/cli.hpp"
#include "wentropy/output.hpp"
#include "wentropy/registry.hpp"

namespace fs = std::filesystem;
using namespace wentropy;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"wentropy"};
  argv.insert(argv.end(), args);
  std::ostringstream out, err;
  const int code = cli_main(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("wentropy-test-" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

fs::path write_config(const fs::path& dir, const std::string& text) {
  const auto p = dir / "config.toml";
  std::ofstream(p) << text;
  return p;
}

const std::string kSmall =
    "[[scenario]]\nname = \"vertex\"\nspace = \"cone:N=2\"\ninitial = \"dirac:r=0\"\n"
    "engine = \"closed_form\"\ntimes = \"geometric:t_min=0.1,t_max=10,points=8\"\n"
    "checks = [\"check_fisher_bound\", \"check_w_monotonicity\", \"check_li_yau\"]\n"
    "[[scenario]]\nname = \"bump\"\nspace = \"cone:N=3\"\ninitial = \"bump:center=2,width=1\"\n"
    "engine = \"pde:M=512\"\ntimes = \"geometric:t_min=0.1,t_max=2,points=6\"\n"
    "checks = [\"check_w_monotonicity\", \"check_fisher_monotone\"]\n";

int run_binary(const std::string& args) {
  const std::string cmd = std::string("\"") + WENTROPY_BINARY + "\" " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("list-checks") {
  const auto r = cli({"list-checks"});
  CHECK(r.code == 0);
  CHECK(r.out.find("check_li_yau — eq:LY 'following Li-Yau inequality'") != std::string::npos);
  CHECK(r.out == list_checks_text());
  CHECK(static_cast<std::size_t>(std::count(r.out.begin(), r.out.end(), '\n')) ==
        check_registry().size());
}

TEST_CASE("malformed input is a parse error") {
  const auto dir = scratch("parse");
  const auto cfg = write_config(dir, "[[scenario]]\nname = \"x\"\nspace = \"cone:N=abc\"\nchecks = []\n");
  const auto out = (dir / "out").string();
  const auto r = cli({"run", cfg.c_str(), "--out", out.c_str()});
  CHECK(r.code == kExitParseError);
  CHECK(r.err.find("N='abc'") != std::string::npos);
  CHECK(cli({"run"}).code == kExitParseError);
  CHECK(cli({"frobnicate"}).code == kExitParseError);
  CHECK(cli({"run", cfg.c_str(), "--format", "png"}).code == kExitParseError);
  CHECK(run_binary("run '" + cfg.string() + "' --out '" + out + "'") == 2);
}

TEST_CASE("missing config and unwritable output are I/O errors") {
  const auto dir = scratch("io");
  CHECK(cli({"run", (dir / "absent.toml").c_str()}).code == kExitIoError);
  const auto cfg = write_config(dir, kSmall);
  // A regular file where the output directory should be.
  std::ofstream(dir / "blocker") << "x";
  const auto out = (dir / "blocker" / "sub").string();
  CHECK(cli({"run", cfg.c_str(), "--out", out.c_str()}).code == kExitIoError);
}

TEST_CASE("failing checks exit 1") {
  const auto dir = scratch("fail");
  const auto cfg = write_config(
      dir, "[[scenario]]\nname = \"off\"\nspace = \"cone:N=2\"\ninitial = \"dirac:r=1\"\n"
           "engine = \"closed_form\"\ntimes = \"geometric:t_min=0.1,t_max=10,points=8\"\n"
           "checks = [\"check_rigidity_constancy\"]\n");
  const auto out = (dir / "out").string();
  const auto r = cli({"run", cfg.c_str(), "--out", out.c_str()});
  CHECK(r.code == kExitCheckFailed);
  CHECK(r.out.find("FAIL") != std::string::npos);
}

TEST_CASE("run writes schema-fixed, deterministic CSV and self-contained SVG") {
  const auto dir = scratch("run");
  const auto cfg = write_config(dir, kSmall);
  const auto a = (dir / "a").string();
  const auto b = (dir / "b").string();
  const auto r = cli({"run", cfg.c_str(), "--out", a.c_str()});
  CHECK(r.code == 0);
  CHECK(cli({"run", cfg.c_str(), "--out", b.c_str(), "--jobs", "2"}).code == 0);
  for (const char* name : {"vertex", "bump"}) {
    INFO(name);
    const auto csv = slurp(fs::path(a) / (std::string(name) + ".csv"));
    CHECK(csv.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(csv == slurp(fs::path(b) / (std::string(name) + ".csv")));
    CHECK(csv.find("e-") != std::string::npos);
    const auto svg = slurp(fs::path(a) / (std::string(name) + ".svg"));
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("</svg>") != std::string::npos);
    CHECK(svg.find("href") == std::string::npos);
    CHECK(svg.find("<image") == std::string::npos);
  }
  // Summary table: scenario, check, worst margin, result.
  CHECK(r.out.find("vertex") != std::string::npos);
  CHECK(r.out.find("check_li_yau") != std::string::npos);
  CHECK(r.out.find("pass") != std::string::npos);

  const auto c = (dir / "c").string();
  CHECK(cli({"run", cfg.c_str(), "--out", c.c_str(), "--format", "csv"}).code == 0);
  CHECK(fs::exists(fs::path(c) / "vertex.csv"));
  CHECK_FALSE(fs::exists(fs::path(c) / "vertex.svg"));
}

TEST_CASE("WENTROPY_OUT overrides --out") {
  const auto dir = scratch("env");
  const auto cfg = write_config(dir, kSmall);
  const auto env = dir / "from-env";
  const auto flag = (dir / "from-flag").string();
  ::setenv("WENTROPY_OUT", env.c_str(), 1);
  const auto r = cli({"run", cfg.c_str(), "--out", flag.c_str(), "--format", "csv"});
  ::unsetenv("WENTROPY_OUT");
  CHECK(r.code == 0);
  CHECK(fs::exists(env / "vertex.csv"));
  CHECK_FALSE(fs::exists(fs::path(flag) / "vertex.csv"));
}

TEST_CASE("bundled configs exit 0") {
  const auto dir = scratch("bundled");
  for (const char* name : {"rigidity.toml", "negative-controls.toml"}) {
    INFO(name);
    const std::string cfg = std::string(WENTROPY_SOURCE_DIR) + "/configs/" + name;
    CHECK(run_binary("run '" + cfg + "' --out '" + (dir / name).string() + "' --jobs 4") == 0);
  }
}
