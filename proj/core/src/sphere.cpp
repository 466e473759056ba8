#include "recon/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "recon/linalg.hpp"
#include "recon/quadrature.hpp"

namespace recon {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

UnitVector::UnitVector(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.empty()) {
    throw DimensionError("UnitVector: dimension must be >= 1");
  }
  const double n = detail::norm(coords_);
  if (std::fabs(n - 1.0) > kNormTolerance) {
    throw DomainError("UnitVector: norm " + std::to_string(n) +
                      " deviates from 1 by more than 1e-12");
  }
}

UnitVector UnitVector::normalized(std::vector<double> coords) {
  if (coords.empty()) {
    throw DimensionError("UnitVector: dimension must be >= 1");
  }
  const double n = detail::norm(coords);
  if (!(n > 0.0) || !std::isfinite(n)) {
    throw DomainError("UnitVector: cannot normalize a zero or non-finite vector");
  }
  for (double& c : coords) c /= n;
  return UnitVector(std::move(coords), Unchecked{});
}

UnitVector UnitVector::basis(int d, int axis) {
  if (d < 1 || axis < 0 || axis >= d) {
    throw DimensionError("UnitVector::basis: invalid dimension or axis");
  }
  std::vector<double> c(static_cast<std::size_t>(d), 0.0);
  c[static_cast<std::size_t>(axis)] = 1.0;
  return UnitVector(std::move(c), Unchecked{});
}

UnitVector UnitVector::negated() const {
  std::vector<double> c = coords_;
  for (double& x : c) x = -x;
  return UnitVector(std::move(c), Unchecked{});
}

double dot(const UnitVector& u, const UnitVector& v) {
  if (u.dimension() != v.dimension()) {
    throw DimensionError("dot: dimension mismatch");
  }
  return detail::dot(u.coords(), v.coords());
}

double dot(const UnitVector& u, const std::vector<double>& v) {
  if (u.dimension() != static_cast<int>(v.size())) {
    throw DimensionError("dot: dimension mismatch");
  }
  return detail::dot(u.coords(), v);
}

bool cap_contains(const Cap& cap, const UnitVector& point) {
  if (cap.center.dimension() != point.dimension()) {
    throw DimensionError("cap_contains: dimension mismatch");
  }
  if (cap.radius_theta <= 0.0) return false;  // empty cap
  return dot(point, cap.center) > std::cos(cap.radius_theta);
}

UnitVector sample_uniform_direction(int d, RngStream& stream) {
  if (d < 1) {
    throw DimensionError("sample_uniform_direction: dimension must be >= 1");
  }
  std::vector<double> v(static_cast<std::size_t>(d));
  for (;;) {
    for (double& x : v) x = stream.gaussian();
    const double n = detail::norm(v);
    if (n > 1e-100) {
      for (double& x : v) x /= n;
      return UnitVector(std::move(v));
    }
  }
}

double geodesic_distance(const UnitVector& u, const UnitVector& v) {
  const double ip = std::clamp(dot(u, v), -1.0, 1.0);
  return std::acos(ip);
}

double gamma_ratio_constant(int d) {
  if (d < 2) {
    throw DomainError("gamma_ratio_constant: requires d >= 2");
  }
  return std::exp(std::lgamma(0.5 * d) - std::lgamma(0.5 * (d - 1)) -
                  0.5 * std::log(kPi));
}

namespace detail {

double cap_relative_measure_unchecked(int d, double theta) {
  if (theta <= 0.0) return 0.0;
  const double cd = gamma_ratio_constant(d);
  const double integral = integrate_adaptive_simpson(
      [d](double u) { return std::pow(std::sin(u), d - 2); }, 0.0, theta, 1e-10);
  return cd * integral;
}

}  // namespace detail

double cap_relative_measure(int d, double theta) {
  if (d < 2) {
    throw DomainError("cap_relative_measure: requires d >= 2");
  }
  if (!(theta > 0.0) || !(theta < 0.5 * kPi)) {
    throw DomainError("cap_relative_measure: theta must lie in (0, pi/2)");
  }
  return detail::cap_relative_measure_unchecked(d, theta);
}

double inner_product_abs_pdf(int d, double z) {
  if (d < 2) {
    throw DomainError("inner_product_abs_pdf: requires d >= 2");
  }
  if (z < 0.0 || z > 1.0) return 0.0;
  const double cd = gamma_ratio_constant(d);
  if (d == 3) return 2.0 * cd;  // exponent 0; avoids 0^0 at z = 1
  return 2.0 * cd * std::pow(1.0 - z * z, 0.5 * (d - 3));
}

GeodesicNet build_geodesic_net(int d, double eps, RngStream& stream) {
  if (d < 2) {
    throw DimensionError("build_geodesic_net: requires d >= 2");
  }
  if (!(eps > 0.0)) {
    throw DomainError("build_geodesic_net: eps must be positive");
  }
  const double cardinality_bound = std::pow(8.0 / eps, d - 1);

  GeodesicNet net;
  net.resolution_eps = eps;

  if (d == 2) {
    // Deterministic circle net: ceil(pi/eps) equally spaced points.  The
    // spacing is at most 2*eps, so every circle point is within eps of the
    // net, and the points are eps-separated.
    const int m = static_cast<int>(std::ceil(kPi / eps));
    net.points.reserve(static_cast<std::size_t>(m));
    for (int k = 0; k < m; ++k) {
      const double angle = 2.0 * kPi * k / m;
      net.points.push_back(
          UnitVector(std::vector<double>{std::cos(angle), std::sin(angle)}));
    }
    if (static_cast<double>(m) > cardinality_bound) {
      throw InternalError("build_geodesic_net: cardinality bound (8/eps)^{d-1} exceeded");
    }
    return net;
  }

  // Greedy maximal eps-separated set.  A long enough streak of consecutive
  // rejections certifies near-maximality; covering quality is validated
  // statistically by the tests.
  long long streak = 0;
  for (;;) {
    const long long needed =
        kNetRejectionStreakFactor *
        std::max<long long>(1, static_cast<long long>(net.points.size()));
    if (streak >= needed) break;
    UnitVector candidate = sample_uniform_direction(d, stream);
    bool separated = true;
    for (const UnitVector& p : net.points) {
      if (geodesic_distance(candidate, p) < eps) {
        separated = false;
        break;
      }
    }
    if (separated) {
      net.points.push_back(std::move(candidate));
      streak = 0;
      if (static_cast<double>(net.points.size()) > cardinality_bound) {
        throw InternalError(
            "build_geodesic_net: cardinality bound (8/eps)^{d-1} exceeded");
      }
    } else {
      ++streak;
    }
  }
  return net;
}

}  // namespace recon
