#include "wentropy/model_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "wentropy/config.hpp"
#include "wentropy/error.hpp"

namespace wentropy {

namespace {

void require_dimension(double N) {
  if (!(N >= 1.0) || !std::isfinite(N)) {
    throw std::invalid_argument("dimension parameter N must be finite and >= 1");
  }
}

// Surface area of the unit sphere in R^d.
double sphere_area(int d) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * d) / std::tgamma(0.5 * d);
}

std::string format_number(double x) {
  std::ostringstream os;
  os.precision(15);
  os << x;
  return os.str();
}

}  // namespace

ModelSpace::ModelSpace(SpaceKind kind, double N, double L, double angular, double base)
    : kind_(kind), N_(N), L_(L), angular_(angular), base_point_(base) {}

ModelSpace ModelSpace::half_line_cone(double N) {
  require_dimension(N);
  return ModelSpace(SpaceKind::HalfLineCone, N, std::numeric_limits<double>::infinity(), 1.0, 0.0);
}

ModelSpace ModelSpace::weighted_line(double N) {
  require_dimension(N);
  return ModelSpace(SpaceKind::WeightedLine, N, std::numeric_limits<double>::infinity(), 1.0, 0.0);
}

ModelSpace ModelSpace::euclidean(int d) {
  if (d < 1) throw std::invalid_argument("Euclidean dimension d must be >= 1");
  return ModelSpace(SpaceKind::Euclidean, static_cast<double>(d),
                    std::numeric_limits<double>::infinity(), sphere_area(d), 0.0);
}

ModelSpace ModelSpace::interval(double L, double N, double base_point) {
  if (!(L > 0.0) || !std::isfinite(L)) throw std::invalid_argument("interval length L must be > 0");
  require_dimension(N);
  if (base_point < 0.0 || base_point > L) {
    throw std::invalid_argument("interval base point must lie in [0, L]");
  }
  return ModelSpace(SpaceKind::Interval, N, L, 1.0, base_point);
}

ModelSpace make_space(SpaceKind kind, const SpaceParams& params) {
  switch (kind) {
    case SpaceKind::HalfLineCone: return ModelSpace::half_line_cone(params.N);
    case SpaceKind::WeightedLine: return ModelSpace::weighted_line(params.N);
    case SpaceKind::Euclidean: return ModelSpace::euclidean(params.d);
    case SpaceKind::Interval: return ModelSpace::interval(params.L, params.N, params.base_point);
  }
  throw std::invalid_argument("unknown space kind");
}

ModelSpace ModelSpace::parse(std::string_view text) {
  const auto spec = config::parse_keyed_spec(text);
  try {
    if (spec.kind == "cone") {
      spec.require_only({"N"});
      return half_line_cone(spec.number("N"));
    }
    if (spec.kind == "line") {
      spec.require_only({"N"});
      return weighted_line(spec.number("N"));
    }
    if (spec.kind == "euclid") {
      spec.require_only({"d"});
      const double d = spec.number("d");
      if (d != std::floor(d)) throw ConfigError("euclid: d must be an integer");
      return euclidean(static_cast<int>(d));
    }
    if (spec.kind == "interval") {
      spec.require_only({"L", "N", "x0"});
      return interval(spec.number("L"), spec.number("N"), spec.number_or("x0", 0.0));
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError("space '" + std::string(text) + "': " + e.what());
  }
  throw ConfigError("unknown space kind '" + spec.kind + "'");
}

double ModelSpace::weight(double r) const {
  if (!contains(r)) return 0.0;
  const double a = std::abs(r);
  if (N_ == 1.0) return angular_;
  return angular_ * std::pow(a, N_ - 1.0);
}

double ModelSpace::primitive(double r) const {
  const double a = std::abs(r);
  const double value = angular_ * std::pow(a, N_) / N_;
  return r < 0.0 ? -value : value;
}

double ModelSpace::measure(double a, double b) const {
  if (b < a) std::swap(a, b);
  a = std::max(a, lower_end());
  b = std::min(b, upper_end());
  if (b <= a) return 0.0;
  return primitive(b) - primitive(a);
}

double ModelSpace::distance(double x, double y) const {
  if (kind_ == SpaceKind::Euclidean) {
    throw std::logic_error("Euclidean spaces carry radial coordinates only; "
                           "pairwise distances are not represented");
  }
  return std::abs(x - y);
}

double ModelSpace::ball_volume(double r) const { return ball_volume_at(base_point_, r); }

double ModelSpace::ball_volume_at(double x, double r) const {
  if (r < 0.0) throw std::invalid_argument("ball radius must be nonnegative");
  if (kind_ == SpaceKind::Euclidean) {
    if (x != 0.0) throw std::logic_error("Euclidean balls are only centred at the origin");
    return primitive(r);
  }
  return measure(x - r, x + r);
}

double ModelSpace::lower_end() const {
  return kind_ == SpaceKind::WeightedLine ? -std::numeric_limits<double>::infinity() : 0.0;
}

double ModelSpace::upper_end() const {
  return kind_ == SpaceKind::Interval ? L_ : std::numeric_limits<double>::infinity();
}

bool ModelSpace::contains(double x) const { return x >= lower_end() && x <= upper_end(); }

bool ModelSpace::is_cone() const {
  return kind_ != SpaceKind::Interval && base_point_ == 0.0;
}

bool ModelSpace::is_one_dimensional() const { return kind_ != SpaceKind::Euclidean; }

std::string ModelSpace::name() const {
  switch (kind_) {
    case SpaceKind::HalfLineCone: return "cone:N=" + format_number(N_);
    case SpaceKind::WeightedLine: return "line:N=" + format_number(N_);
    case SpaceKind::Euclidean: return "euclid:d=" + format_number(N_);
    case SpaceKind::Interval: {
      std::string s = "interval:L=" + format_number(L_) + ",N=" + format_number(N_);
      if (base_point_ != 0.0) s += ",x0=" + format_number(base_point_);
      return s;
    }
  }
  return "unknown";
}

BishopGromov bishop_gromov_ratio(const ModelSpace& space, double r, double R) {
  return bishop_gromov_ratio_at(space, space.base_point(), r, R);
}

BishopGromov bishop_gromov_ratio_at(const ModelSpace& space, double x, double r, double R) {
  if (!(r > 0.0) || !(R > r)) throw std::invalid_argument("Bishop-Gromov ratio needs 0 < r < R");
  const double ratio = space.ball_volume_at(x, R) / space.ball_volume_at(x, r);
  const double bound = std::pow(R / r, space.dimension());
  return {ratio, bound};
}

}  // namespace wentropy
