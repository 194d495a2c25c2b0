#include "wentropy/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace wentropy {

namespace {

GaussRule build_rule(std::size_t n) {
  GaussRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    // Newton iteration on P_n starting from the Chebyshev-like guess.
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / static_cast<double>(k);
        p0 = p1;
        p1 = pk;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[i] = x;
    rule.weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t points) {
  if (points < 1) throw std::invalid_argument("Gauss rule needs at least one point");
  static std::mutex mutex;
  static std::map<std::size_t, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(points);
  if (it == cache.end()) it = cache.emplace(points, build_rule(points)).first;
  return it->second;
}

double integrate_panels(const std::function<double(double)>& f, std::span<const double> edges,
                        std::size_t points) {
  const GaussRule& rule = gauss_legendre(points);
  double total = 0.0;
  for (std::size_t p = 0; p + 1 < edges.size(); ++p) {
    const double a = edges[p];
    const double b = edges[p + 1];
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double panel = 0.0;
    for (std::size_t k = 0; k < rule.nodes.size(); ++k) {
      panel += rule.weights[k] * f(mid + half * rule.nodes[k]);
    }
    total += half * panel;
  }
  return total;
}

double integrate(const std::function<double(double)>& f, double a, double b, std::size_t panels,
                 std::size_t points) {
  if (panels < 1) throw std::invalid_argument("need at least one panel");
  std::vector<double> edges(panels + 1);
  for (std::size_t i = 0; i <= panels; ++i) {
    edges[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(panels);
  }
  edges.back() = b;
  return integrate_panels(f, edges, points);
}

std::vector<double> graded_edges(double b, std::size_t panels, std::size_t origin_levels) {
  std::vector<double> edges{0.0};
  const double first = b / static_cast<double>(panels);
  // Dyadic refinement of the first panel.
  for (std::size_t k = origin_levels; k > 0; --k) {
    edges.push_back(first * std::ldexp(1.0, -static_cast<int>(k)));
  }
  for (std::size_t i = 1; i <= panels; ++i) {
    edges.push_back(b * static_cast<double>(i) / static_cast<double>(panels));
  }
  return edges;
}

}  // namespace wentropy
