#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace wentropy {

enum class SpaceKind {
  HalfLineCone,  // [0, inf), r^{N-1} dr
  WeightedLine,  // R, |x|^{N-1} dx
  Euclidean,     // R^d with Lebesgue measure, radial coordinate only
  Interval,      // [0, L], r^{N-1} dr, no-flux at both ends
};

struct SpaceParams {
  double N = 1.0;
  double L = 1.0;
  int d = 1;
  double base_point = 0.0;
};

/// One of the explicit metric measure spaces used throughout the library.
///
/// Every kind is described by a single coordinate: the signed position on
/// the weighted line, and the distance to the origin otherwise.  The
/// reference measure has a density `weight(r)` against dr.  For Euclidean
/// spaces that density includes the surface area of the unit sphere, so
/// radial densities integrate to one against it.
class ModelSpace {
 public:
  static ModelSpace half_line_cone(double N);
  static ModelSpace weighted_line(double N);
  static ModelSpace euclidean(int d);
  static ModelSpace interval(double L, double N, double base_point = 0.0);

  /// Parses "cone:N=3", "line:N=2", "euclid:d=2", "interval:L=1,N=2".
  static ModelSpace parse(std::string_view spec);

  SpaceKind kind() const { return kind_; }
  /// The dimension upper bound N (d for Euclidean spaces).
  double dimension() const { return N_; }
  double length() const { return L_; }
  double base_point() const { return base_point_; }

  double weight(double r) const;
  /// m([a, b]) in the coordinate of the space.
  double measure(double a, double b) const;
  double distance(double x, double y) const;

  /// m(B_r(base_point)).
  double ball_volume(double r) const;
  /// m(B_r(x)) for a point given by its coordinate.
  double ball_volume_at(double x, double r) const;

  /// Smallest and largest admissible coordinates.
  double lower_end() const;
  double upper_end() const;
  bool contains(double x) const;

  /// True when the space is a cone with vertex at the base point, i.e.
  /// equality holds in Bishop-Gromov there.
  bool is_cone() const;
  /// True for the kinds on which d(x, y) = |x - y| in the coordinate.
  bool is_one_dimensional() const;

  std::string name() const;

  friend bool operator==(const ModelSpace&, const ModelSpace&) = default;

 private:
  ModelSpace(SpaceKind kind, double N, double L, double angular, double base);

  // Antiderivative of the weight, F(r) = angular * sign(r) |r|^N / N.
  double primitive(double r) const;

  SpaceKind kind_;
  double N_;
  double L_;
  double angular_;
  double base_point_;
};

ModelSpace make_space(SpaceKind kind, const SpaceParams& params);

struct BishopGromov {
  double ratio;
  double bound;
};

/// V(R)/V(r) at the base point together with (R/r)^N.
BishopGromov bishop_gromov_ratio(const ModelSpace& space, double r, double R);
/// The same ratio for balls around an arbitrary point of a 1D space.
BishopGromov bishop_gromov_ratio_at(const ModelSpace& space, double x, double r, double R);

}  // namespace wentropy
