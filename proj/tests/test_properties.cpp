#include <doctest.h>

#include <cmath>
#include <random>

#include "wentropy/functionals.hpp"
#include "wentropy/grid.hpp"
#include "wentropy/pde.hpp"
#include "wentropy/scenario.hpp"
#include "wentropy/transport.hpp"
#include "wentropy/verifiers.hpp"

using namespace wentropy;

namespace {

GridDensity random_density(const GridPtr& grid, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double c = u(rng) * grid->upper() * 0.6 + 0.5;
  const double w = 0.3 + u(rng);
  std::vector<double> v(grid->size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = grid->node(i);
    v[i] = std::exp(-(x - c) * (x - c) / (2 * w * w)) * (1.0 + 0.2 * u(rng));
  }
  return GridDensity::normalized(grid, std::move(v));
}

}  // namespace

TEST_CASE("random densities: normalization and entropy lower bound") {
  std::mt19937_64 rng(20261014);
  std::uniform_real_distribution<double> n_dist(1.0, 5.0);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = ModelSpace::half_line_cone(n_dist(rng));
    const auto grid = make_grid(space, 8.0, 512);
    const auto rho = random_density(grid, rng);
    CHECK(rho.mass() == doctest::Approx(1.0).epsilon(1e-12));
    // Jensen: Ent >= -log m(support).
    CHECK(entropy(rho) >= -std::log(grid->total_mass()) - 1e-12);
    CHECK(fisher(rho) >= 0.0);
  }
}

TEST_CASE("random densities: W2 is a metric") {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const auto space = ModelSpace::half_line_cone(1.0 + trial * 0.2);
    const auto grid = make_grid(space, 8.0, 1024);
    const auto a = random_density(grid, rng);
    const auto b = random_density(grid, rng);
    const auto c = random_density(grid, rng);
    const double ab = quantile_w2(a, b).w2;
    CHECK(quantile_w2(a, a).w2 <= 1e-12);
    CHECK(std::abs(ab - quantile_w2(b, a).w2) <= 1e-12);
    CHECK(ab <= quantile_w2(a, c).w2 + quantile_w2(c, b).w2 + 1e-12);
  }
}

TEST_CASE("random initial data: the heat flow conserves mass and dissipates entropy") {
  std::mt19937_64 rng(99);
  const double times[] = {0.05, 0.2, 0.5, 1.0, 2.0};
  for (int trial = 0; trial < 8; ++trial) {
    const auto space = trial % 2 ? ModelSpace::half_line_cone(2.5) : ModelSpace::interval(4.0, 1.5);
    const auto grid = make_grid(space, 4.0, 512);
    const auto rho = random_density(grid, rng);
    PdeOptions o;
    o.scheme = Scheme::ImplicitEuler;
    const auto flow = evolve_pde(rho, times, o);
    double previous = entropy(rho);
    for (std::size_t k = 0; k < flow.size(); ++k) {
      const auto s = flow.slice(k);
      CHECK(s.mass() == doctest::Approx(1.0).epsilon(1e-10));
      for (double v : s.values()) CHECK(v >= 0.0);
      const double e = entropy(s);
      CHECK(e <= previous + 1e-12);
      previous = e;
    }
    const auto samples = sample_trajectory(flow);
    CHECK(check_fisher_monotone(samples, 1e-3).pass);
    CHECK(check_fisher_bound(space, samples, 1e-3).pass);
  }
}

TEST_CASE("random off-vertex Dirac flows on cones are never rigid") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> n_dist(1.0, 4.0), r_dist(0.5, 3.0);
  const auto times = geometric_times(0.1, 10.0, 12);
  for (int trial = 0; trial < 6; ++trial) {
    Scenario s;
    s.space = ModelSpace::half_line_cone(n_dist(rng));
    s.initial = InitialSpec{InitialKind::Dirac, r_dist(rng), 0.0};
    s.engine = EngineSpec::parse("closed_form");
    s.times = times;
    const auto flow = build_flow(s);
    CHECK(check_w_monotonicity(s.space, flow.samples, 0.0, 1e-6).pass);
    CHECK_FALSE(check_fisher_bound(s.space, flow.samples, 1e-8).flags.at("rigid"));
    CHECK(check_rigidity_constancy(s.space, flow.samples, 1e-7).strictly_violated());
  }
}

TEST_CASE("rigid exactly on vertex rows of the scenario matrix") {
  const auto times = geometric_times(0.1, 10.0, 12);
  const char* spaces[] = {"cone:N=2", "line:N=1", "interval:L=3,N=2"};
  const char* initials[] = {"dirac:r=0", "dirac:r=1", "bump:center=1.5,width=1"};
  for (const char* sp : spaces)
    for (const char* in : initials) {
      Scenario s;
      s.space = ModelSpace::parse(sp);
      s.initial = InitialSpec::parse(in);
      const bool interval = s.space.kind() == SpaceKind::Interval;
      s.engine = EngineSpec::parse(interval ? "pde:M=2048" : "closed_form");
      s.times = times;
      const auto flow = build_flow(s);
      const double tol = interval ? 1e-3 : 1e-8;
      const bool rigid = check_fisher_bound(s.space, flow.samples, tol).flags.at("rigid");
      const bool constant = check_rigidity_constancy(s.space, flow.samples, tol).flags.at("constant");
      const bool vertex = !interval && s.initial.kind == InitialKind::Dirac && flow.is_vertex_flow();
      const std::string label = std::string(sp) + " " + in;
      INFO(label);
      CHECK(rigid == vertex);
      CHECK(constant == vertex);
    }
}

TEST_CASE("decisions are deterministic") {
  Scenario s;
  s.name = "d";
  s.space = ModelSpace::half_line_cone(3);
  s.initial = InitialSpec::parse("bump:center=2,width=1");
  s.engine = EngineSpec::parse("pde:M=512");
  s.times = geometric_times(0.1, 2.0, 6);
  s.checks = {"check_w_monotonicity", "check_fisher_bound", "check_li_yau"};
  const auto a = run_scenario(s);
  const auto b = run_scenario(s);
  REQUIRE(a.outcomes.size() == b.outcomes.size());
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    CHECK(a.outcomes[i].report.worst_margin == b.outcomes[i].report.worst_margin);
    CHECK(a.outcomes[i].ok == b.outcomes[i].ok);
  }
}
