#pragma once

#include <vector>

#include "recon/errors.hpp"
#include "recon/rng.hpp"

namespace recon {

/// A point of the unit-sphere S^{d-1}.  The Euclidean norm must be within
/// kNormTolerance of 1 at construction.
class UnitVector {
 public:
  static constexpr double kNormTolerance = 1e-12;

  explicit UnitVector(std::vector<double> coords);

  /// Rescales an arbitrary nonzero vector to unit norm.
  static UnitVector normalized(std::vector<double> coords);

  /// Standard basis direction e_axis in dimension d.
  static UnitVector basis(int d, int axis = 0);

  int dimension() const { return static_cast<int>(coords_.size()); }
  double operator[](int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& coords() const { return coords_; }

  UnitVector negated() const;

 private:
  struct Unchecked {};
  UnitVector(std::vector<double> coords, Unchecked) : coords_(std::move(coords)) {}
  std::vector<double> coords_;
};

double dot(const UnitVector& u, const UnitVector& v);
double dot(const UnitVector& u, const std::vector<double>& v);

/// Open spherical cap {u : <u, center> > cos(radius_theta)}.
/// radius_theta = 0 denotes the empty cap.
struct Cap {
  UnitVector center;
  double radius_theta = 0.0;
};

/// Strict membership test for the open cap.
bool cap_contains(const Cap& cap, const UnitVector& point);

/// Finite point set with every sphere point within geodesic distance
/// resolution_eps of some member (covering is exact for the deterministic
/// d=2 construction and statistically validated for the greedy one).
struct GeodesicNet {
  std::vector<UnitVector> points;
  double resolution_eps = 0.0;

  int dimension() const {
    return points.empty() ? 0 : points.front().dimension();
  }
};

/// Draws a direction uniformly from surface measure on S^{d-1}
/// (normalized standard Gaussian vector).
UnitVector sample_uniform_direction(int d, RngStream& stream);

/// arccos(<u, v>) with the inner product clamped to [-1, 1].
double geodesic_distance(const UnitVector& u, const UnitVector& v);

/// C_d = Gamma(d/2) / (sqrt(pi) Gamma((d-1)/2)), evaluated via log-gamma.
/// Requires d >= 2.
double gamma_ratio_constant(int d);

/// Relative surface measure r_{d-1}(theta) of an open cap of angular radius
/// theta, for 0 < theta < pi/2:
///   r_{d-1}(theta) = C_d * integral_0^theta (sin u)^{d-2} du.
double cap_relative_measure(int d, double theta);

/// Density of Z = |<x0, phi>| for phi uniform on S^{d-1}:
///   f_Z(z) = 2 C_d (1 - z^2)^{(d-3)/2} on [0, 1], 0 elsewhere.
double inner_product_abs_pdf(int d, double z);

/// Builds a geodesic eps-net of S^{d-1}.  d=2 uses ceil(pi/eps) equally
/// spaced circle points (deterministic); d>=3 grows a maximal eps-separated
/// set by rejection until kNetRejectionStreakFactor * |net| consecutive
/// candidates have been rejected.  Cardinality must satisfy (8/eps)^{d-1}.
GeodesicNet build_geodesic_net(int d, double eps, RngStream& stream);

inline constexpr int kNetRejectionStreakFactor = 200;

namespace detail {
/// r_{d-1}(theta) without the public-domain restriction; valid on [0, pi/2].
double cap_relative_measure_unchecked(int d, double theta);
}  // namespace detail

}  // namespace recon
