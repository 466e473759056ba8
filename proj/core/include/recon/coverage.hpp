#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "recon/sphere.hpp"

namespace recon {

/// Union of two antipodal open caps Cap(axis, theta_plus) and
/// Cap(-axis, theta_minus).  A zero radius denotes an empty cap; radii up to
/// pi are accepted by the membership predicate (measurement-derived bi-caps
/// have radii at most pi/2).
struct BiCap {
  UnitVector axis;
  double theta_plus = 0.0;
  double theta_minus = 0.0;
};

bool bicap_contains(const BiCap& bicap, const UnitVector& point);

/// Bi-cap of the scaled complement event at level lambda:
///   theta_plus  = arccos((delta+eps)/lambda) if delta+eps < lambda else 0,
///   theta_minus = arccos((delta-eps)/lambda) if delta-eps < lambda else 0.
BiCap bicap_from_measurement(double epsilon_n, double delta, double lambda,
                             UnitVector axis);

enum class CoverageCertificate { covered, not_covered, indeterminate };

struct CoverageDecision {
  CoverageCertificate certificate = CoverageCertificate::indeterminate;
  /// A net point outside every bi-cap, present exactly for not_covered.
  std::optional<UnitVector> witness;
};

/// Three-way net certificate for "do the bi-caps cover the sphere":
///  - not_covered when some net point escapes every (unshrunk) bi-cap; that
///    point is itself uncovered and is returned as witness;
///  - covered when every net point lies in some bi-cap shrunk by shrink_eps
///    (radii soft-thresholded), which covers the whole sphere by the
///    triangle inequality;
///  - indeterminate otherwise.
/// shrink_eps must be at least the net resolution for the covered
/// certificate to be sound.
CoverageDecision noncoverage_event(const std::vector<BiCap>& bicaps,
                                   const GeodesicNet& net, double shrink_eps);

/// Open circular arc (center - half_width, center + half_width) on the unit
/// circle; half_width in [0, pi), 0 denotes the empty arc.
struct ArcSpec {
  double center = 0.0;
  double half_width = 0.0;
};

/// Exact d=2 oracle: returns true when the union of the open arcs does NOT
/// cover the circle.  Decided by testing every arc endpoint for membership:
/// if the union misses anything, some endpoint is uncovered.
bool arc_noncoverage_exact_d2(const std::vector<ArcSpec>& arcs);

/// Monte-Carlo estimate of a non-coverage probability.  The point estimate
/// and its binomial standard error use noncover_count alone; the true
/// frequency is bracketed between noncover_count/trials and
/// (noncover_count + indeterminate_count)/trials.
struct CoverageEstimate {
  long long noncover_count = 0;
  long long cover_count = 0;
  long long indeterminate_count = 0;
  long long trials = 0;
  double point_estimate = 0.0;
  double std_error = 0.0;
};

/// Drops N i.i.d. uniform caps of fixed angular radius theta per trial and
/// classifies coverage.  d=2 uses the exact arc oracle (no indeterminate
/// outcomes); d>=3 certifies with a geodesic net of resolution net_eps built
/// once from `stream` before the trials.
CoverageEstimate coverage_noncover_mc(int n, int d, double theta, long long trials,
                                      double net_eps, RngStream& stream);

}  // namespace recon
