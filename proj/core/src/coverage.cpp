#include "recon/coverage.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "recon/estimators.hpp"

namespace recon {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

double wrap_2pi(double x) {
  double t = std::fmod(x, kTwoPi);
  if (t < 0.0) t += kTwoPi;
  return t;
}

// Strict membership of angle `x` in the open arc (start, start + 2w).
bool arc_contains(double x, double start, double half_width) {
  if (half_width <= 0.0) return false;
  const double t = wrap_2pi(x - start);
  return t > 0.0 && t < 2.0 * half_width;
}

}  // namespace

bool bicap_contains(const BiCap& bicap, const UnitVector& point) {
  if (bicap.axis.dimension() != point.dimension()) {
    throw DimensionError("bicap_contains: dimension mismatch");
  }
  const double ip = dot(point, bicap.axis);
  if (bicap.theta_plus > 0.0 && ip > std::cos(bicap.theta_plus)) return true;
  if (bicap.theta_minus > 0.0 && -ip > std::cos(bicap.theta_minus)) return true;
  return false;
}

BiCap bicap_from_measurement(double epsilon_n, double delta, double lambda,
                             UnitVector axis) {
  if (!(delta > 0.0)) throw DomainError("bicap_from_measurement: delta must be positive");
  if (!(lambda > 0.0)) throw DomainError("bicap_from_measurement: lambda must be positive");
  if (std::fabs(epsilon_n) > delta) {
    throw DomainError("bicap_from_measurement: |epsilon| exceeds delta");
  }
  const double plus_height = delta + epsilon_n;
  const double minus_height = delta - epsilon_n;
  BiCap b{std::move(axis), 0.0, 0.0};
  if (plus_height < lambda) b.theta_plus = std::acos(plus_height / lambda);
  if (minus_height < lambda) b.theta_minus = std::acos(minus_height / lambda);
  return b;
}

CoverageDecision noncoverage_event(const std::vector<BiCap>& bicaps,
                                   const GeodesicNet& net, double shrink_eps) {
  if (net.points.empty()) throw DomainError("noncoverage_event: empty net");
  for (const BiCap& b : bicaps) {
    if (b.axis.dimension() != net.dimension()) {
      throw DimensionError("noncoverage_event: dimension mismatch");
    }
  }
  if (shrink_eps < net.resolution_eps) {
    throw DomainError(
        "noncoverage_event: shrink_eps below the net resolution makes the "
        "covered certificate unsound");
  }

  bool all_in_shrunk = true;
  for (const UnitVector& z : net.points) {
    bool in_full = false;
    bool in_shrunk = false;
    for (const BiCap& b : bicaps) {
      const double ip = dot(z, b.axis);
      if (!in_full) {
        if ((b.theta_plus > 0.0 && ip > std::cos(b.theta_plus)) ||
            (b.theta_minus > 0.0 && -ip > std::cos(b.theta_minus))) {
          in_full = true;
        }
      }
      if (!in_shrunk) {
        const double tp = soft_threshold(b.theta_plus, shrink_eps);
        const double tm = soft_threshold(b.theta_minus, shrink_eps);
        if ((tp > 0.0 && ip > std::cos(tp)) || (tm > 0.0 && -ip > std::cos(tm))) {
          in_shrunk = true;
        }
      }
      if (in_full && in_shrunk) break;
    }
    if (!in_full) {
      // This very net point is uncovered.
      return CoverageDecision{CoverageCertificate::not_covered, z};
    }
    if (!in_shrunk) all_in_shrunk = false;
  }
  if (all_in_shrunk) {
    return CoverageDecision{CoverageCertificate::covered, std::nullopt};
  }
  return CoverageDecision{CoverageCertificate::indeterminate, std::nullopt};
}

bool arc_noncoverage_exact_d2(const std::vector<ArcSpec>& arcs) {
  std::vector<ArcSpec> live;
  live.reserve(arcs.size());
  for (const ArcSpec& a : arcs) {
    if (a.half_width > 0.0) live.push_back(a);
  }
  if (live.empty()) return true;
  // The union of finitely many open arcs misses something iff some arc
  // endpoint is uncovered (any boundary point of the union is an endpoint).
  for (const ArcSpec& a : live) {
    for (const double endpoint : {a.center - a.half_width, a.center + a.half_width}) {
      bool covered = false;
      for (const ArcSpec& b : live) {
        if (arc_contains(endpoint, b.center - b.half_width, b.half_width)) {
          covered = true;
          break;
        }
      }
      if (!covered) return true;
    }
  }
  return false;
}

CoverageEstimate coverage_noncover_mc(int n, int d, double theta, long long trials,
                                      double net_eps, RngStream& stream) {
  if (n < 1) throw DomainError("coverage_noncover_mc: N must be >= 1");
  if (d < 2) throw DomainError("coverage_noncover_mc: d must be >= 2");
  if (!(theta > 0.0) || !(theta < kPi)) {
    throw DomainError("coverage_noncover_mc: theta must lie in (0, pi)");
  }
  if (trials < 1) throw DomainError("coverage_noncover_mc: trials must be >= 1");

  CoverageEstimate est;
  est.trials = trials;

  if (d == 2) {
    std::vector<ArcSpec> arcs(static_cast<std::size_t>(n));
    for (long long t = 0; t < trials; ++t) {
      for (ArcSpec& a : arcs) {
        a.center = stream.uniform(0.0, kTwoPi);
        a.half_width = theta;
      }
      if (arc_noncoverage_exact_d2(arcs)) {
        ++est.noncover_count;
      } else {
        ++est.cover_count;
      }
    }
  } else {
    const GeodesicNet net = build_geodesic_net(d, net_eps, stream);
    std::vector<BiCap> caps;
    caps.reserve(static_cast<std::size_t>(n));
    for (long long t = 0; t < trials; ++t) {
      caps.clear();
      for (int i = 0; i < n; ++i) {
        caps.push_back(BiCap{sample_uniform_direction(d, stream), theta, 0.0});
      }
      switch (noncoverage_event(caps, net, net_eps).certificate) {
        case CoverageCertificate::not_covered:
          ++est.noncover_count;
          break;
        case CoverageCertificate::covered:
          ++est.cover_count;
          break;
        case CoverageCertificate::indeterminate:
          ++est.indeterminate_count;
          break;
      }
    }
  }

  est.point_estimate =
      static_cast<double>(est.noncover_count) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.point_estimate * (1.0 - est.point_estimate) /
                            static_cast<double>(trials));
  return est;
}

}  // namespace recon
