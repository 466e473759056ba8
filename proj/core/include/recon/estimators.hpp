#pragma once

#include <string>
#include <vector>

#include "recon/measurement.hpp"

namespace recon {

/// Result of an estimation run.  `consistent` holds exactly when
/// max_abs_residual <= delta + (the reporting tolerance of the run).
struct EstimateReport {
  std::vector<double> estimate;
  bool consistent = false;
  int passes_used = 0;
  double max_abs_residual = 0.0;
};

/// Dual system f_n reproducing x = sum <x, phi_n> f_n.
struct DualFrame {
  std::vector<std::vector<double>> duals;
  std::vector<UnitVector> source_directions;
};

enum class WorstCaseMethod { vertex_exact, radial_net_lower };

struct WorstCaseResult {
  double value = 0.0;
  std::vector<double> witness;
  WorstCaseMethod method = WorstCaseMethod::vertex_exact;
};

/// T_delta(t): t-delta for t>delta, 0 for |t|<=delta, t+delta for t<-delta.
double soft_threshold(double t, double delta);

/// current + phi * T_delta(q - <current, phi>).  With unit-norm phi this is
/// exactly the Euclidean projection of `current` onto the measurement slab.
std::vector<double> rg_step(const std::vector<double>& current, const Measurement& m,
                            double delta);

/// Cyclic slab projections (each step is rg_step) from x0 until
/// max |residual| <= delta + tol or max_passes verification sweeps have run.
/// Non-convergence is reported via consistent=false, never thrown: the
/// feasible set is nonempty, so it only signals a too-small max_passes.
EstimateReport consistent_estimate(const Instance& instance, std::vector<double> x0,
                                   double tol, int max_passes);

/// One pass of rg_step in measurement order (the online algorithm).  The
/// output need not be globally consistent; consistency is reported with
/// tolerance kReportTol.
EstimateReport rg_estimate(const Instance& instance, std::vector<double> x0);

inline constexpr double kReportTol = 1e-12;

/// Canonical dual frame f_n = S^{-1} phi_n with S = sum phi_n phi_n^T.
/// Throws RankDeficiencyError when the directions do not span R^d.
DualFrame canonical_dual(const std::vector<UnitVector>& directions);

/// Linear reconstruction sum q_n f_n.
std::vector<double> linear_estimate(const Instance& instance, const DualFrame& dual);

struct VertexEnumLimits {
  /// Cap on the number of candidate d-subsets of the 2N facet hyperplanes,
  /// i.e. on C(2N, d).
  double max_systems = 5e6;
};

/// Exact worst-case error W_N = max{||u|| : u in P_N} by enumeration of all
/// d-subsets of the 2N facet hyperplanes <u, phi_n> = eps_n +/- delta.  Each
/// candidate vertex is kept when it satisfies every slab within slack
/// kVertexFeasibilitySlack.  Ties in the maximum are broken by enumeration
/// order (lexicographically smallest subset), so the result does not depend
/// on scheduling.
WorstCaseResult worst_case_error_exact(const SlabSystem& slabs,
                                       const VertexEnumLimits& limits = {});

inline constexpr double kVertexFeasibilitySlack = 1e-9;

/// Lower bound max over net directions of radial_extent.  Throws
/// UnboundedPolytopeError if any direction is unconstrained.
WorstCaseResult worst_case_error_radial_net(const SlabSystem& slabs,
                                            const GeodesicNet& net);

}  // namespace recon
