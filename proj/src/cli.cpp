#include "wentropy/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <thread>
#include <variant>
#include <vector>

#include "wentropy/error.hpp"
#include "wentropy/output.hpp"
#include "wentropy/registry.hpp"
#include "wentropy/scenario.hpp"

namespace wentropy {

namespace {

struct Failure {
  int code;
  std::string message;
};

using Slot = std::variant<std::monostate, ScenarioResult, Failure>;

Slot run_one(const Scenario& s, double tol_scale) {
  try {
    return run_scenario(s, tol_scale);
  } catch (const ConfigError& e) {
    return Failure{kExitParseError, e.what()};
  } catch (const NumericalError& e) {
    return Failure{kExitCheckFailed, e.what()};
  } catch (const std::exception& e) {
    // Invalid arguments reaching a verifier come from scenario values.
    return Failure{kExitParseError, e.what()};
  }
}

bool write_file(const std::filesystem::path& path, const auto& writer) {
  std::ofstream f(path, std::ios::binary);
  if (!f) return false;
  writer(f);
  f.close();
  return static_cast<bool>(f);
}

std::string margin_text(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "% .3e", v);
  return buf;
}

}  // namespace

int run_config(const std::string& config_path, const RunOptions& options, std::ostream& out,
               std::ostream& err) {
  std::vector<Scenario> scenarios;
  try {
    scenarios = load_scenarios(config_path);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  } catch (const std::ios_base::failure& e) {
    err << "error: " << e.what() << '\n';
    return kExitIoError;
  }
  if (!(options.tol_scale > 0.0)) {
    err << "error: --tol-scale must be positive\n";
    return kExitParseError;
  }

  const std::filesystem::path dir(options.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    err << "error: cannot create output directory " << dir.string() << '\n';
    return kExitIoError;
  }

  std::vector<Slot> slots(scenarios.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) {
      slots[i] = run_one(scenarios[i], options.tol_scale);
    }
  };
  const std::size_t jobs = std::max<std::size_t>(1, std::min(options.jobs, scenarios.size()));
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  int code = kExitOk;
  const auto raise = [&code](int c) {
    // Parse errors outrank I/O errors, which outrank check failures.
    const auto rank = [](int x) { return x == kExitParseError ? 3 : x == kExitIoError ? 2 : x; };
    if (rank(c) > rank(code)) code = c;
  };

  out << "scenario                          check                         worst_margin  tol        result\n";
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    const auto& s = scenarios[i];
    if (const auto* f = std::get_if<Failure>(&slots[i])) {
      err << "error: scenario '" << s.name << "': " << f->message << '\n';
      raise(f->code);
      continue;
    }
    const auto& res = std::get<ScenarioResult>(slots[i]);
    for (const auto& o : res.outcomes) {
      const char* verdict = o.ok ? (o.expected_fail ? "xfail" : "pass")
                                 : (o.expected_fail ? "XPASS" : "FAIL");
      char line[256];
      std::snprintf(line, sizeof line, "%-33s %-29s %s  %-9.2e  %s", s.name.c_str(),
                    o.report.name.c_str(), margin_text(o.report.worst_margin).c_str(), o.report.tol,
                    verdict);
      out << line;
      if (!o.report.note.empty()) out << "  (" << o.report.note << ')';
      out << '\n';
    }
    if (!res.ok()) raise(kExitCheckFailed);
    if (options.csv &&
        !write_file(dir / (s.name + ".csv"), [&](std::ostream& f) { write_csv(f, res); })) {
      err << "error: cannot write " << (dir / (s.name + ".csv")).string() << '\n';
      raise(kExitIoError);
    }
    if (options.svg && !write_file(dir / (s.name + ".svg"), [&](std::ostream& f) {
          write_svg(f, res, s.space.dimension());
        })) {
      err << "error: cannot write " << (dir / (s.name + ".svg")).string() << '\n';
      raise(kExitIoError);
    }
  }
  return code;
}

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Numerical checks of W-entropy monotonicity and rigidity on model spaces", "wentropy"};
  app.require_subcommand(1);

  RunOptions options;
  std::string config_path;
  std::string format = "both";
  auto* run = app.add_subcommand("run", "Run the scenarios of a config file");
  run->add_option("config", config_path, "Scenario file")->required();
  run->add_option("--out", options.out_dir, "Output directory (WENTROPY_OUT overrides)");
  run->add_option("--jobs", options.jobs, "Scenarios run in parallel")->check(CLI::PositiveNumber);
  run->add_option("--format", format, "Outputs to write")
      ->check(CLI::IsMember({"csv", "svg", "both"}));
  run->add_option("--tol-scale", options.tol_scale, "Multiplier on every tolerance")
      ->check(CLI::PositiveNumber);
  auto* list = app.add_subcommand("list-checks", "Print every check with its anchor");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitParseError;
  }

  if (list->parsed()) {
    out << list_checks_text();
    return kExitOk;
  }
  if (const char* env = std::getenv("WENTROPY_OUT"); env && *env) options.out_dir = env;
  options.csv = format != "svg";
  options.svg = format != "csv";
  (void)run;
  return run_config(config_path, options, out, err);
}

}  // namespace wentropy
