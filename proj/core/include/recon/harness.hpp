#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "recon/bounds.hpp"
#include "recon/coverage.hpp"

namespace recon {

struct EstimatorSelection {
  bool consistent = true;
  bool rg = true;
  bool linear = true;
};

/// Configuration of a mean-squared-error sweep.  The per-trial random
/// stream is keyed by (seed, row index, trial index), so results are a pure
/// function of (config, seed) regardless of worker count.
struct SweepConfig {
  int dimension = 2;
  std::vector<int> n_list;
  long long trials = 1000;
  double delta = 1.0;
  DirectionLaw law = DirectionLaw::uniform_sphere();
  std::uint64_t seed = 0;
  EstimatorSelection estimators;
  double vertex_cap = 5e6;  // cap on C(2N, d) per instance
  int workers = 1;
  std::string out_path;  // empty = caller decides (CLI prints to stdout)

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// One Monte-Carlo result row.  Theory columns depend on (d, N, delta)
/// alone.  Columns that do not apply (estimator not run, bound outside its
/// validity range) hold NaN.
struct SweepRow {
  int d = 0;
  int n = 0;
  long long trials = 0;
  double w2_mean = 0.0, w2_se = 0.0;
  double r2_mean = 0.0, r2_se = 0.0;
  double mse_consistent = 0.0, mse_consistent_se = 0.0;
  double mse_rg = 0.0, mse_rg_se = 0.0;
  double mse_linear = 0.0, mse_linear_se = 0.0;
  double radial_theory_low = 0.0, radial_theory_high = 0.0;
  double upper_uniform = 0.0, upper_general = 0.0;
  double lower_limit_over_n2 = 0.0;
  double linear_floor = 0.0;
  std::uint64_t seed = 0;

  bool skipped = false;  // capacity cap exceeded; row carries only (d, n)
  std::string skip_reason;

  // Certification counters (not part of the CSV schema): number of trials
  // whose consistent estimate failed the residual check at the reporting
  // tolerance, and number whose true signal violated exact feasibility.
  long long consistent_residual_failures = 0;
  long long signal_feasibility_failures = 0;
};

/// Runs the sweep: per (N, trial) draws an instance (signal fixed to e_1),
/// computes W_N by exact vertex enumeration, R_N at the fixed probe e_1,
/// and the requested estimators.  Rows whose C(2N, d) exceeds the vertex
/// cap are skipped with a reason; the run continues.
std::vector<SweepRow> run_mse_sweep(const SweepConfig& config);

/// CSV for a sweep: "# config: {json}" line, header, one line per
/// non-skipped row ("# skipped ..." comments for the others), LF endings,
/// 17-significant-digit decimals.  Identical bytes for identical
/// (config, seed) whatever the worker count.
std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows);

/// Tolerance used for the consistent estimator inside sweeps (also the
/// residual-certificate tolerance).  The pass budget covers the observed
/// cyclic-projection tail (worst seen across the acceptance sweeps is a few
/// thousand passes) with a wide margin; a pass is N rank-one updates.
inline constexpr double kSweepConsistencyTol = 1e-9;
inline constexpr int kSweepMaxPasses = 100000;

struct CoverageSweepConfig {
  int dimension = 2;
  std::vector<double> theta_list;
  std::vector<int> n_list;
  long long trials = 1000;
  double net_eps = 0.1;  // used for d >= 3 certification
  std::uint64_t seed = 0;
  int workers = 1;
  std::string out_path;

  void validate() const;
};

struct CoverageSweepRow {
  int d = 0;
  double theta = 0.0;
  int n = 0;
  CoverageEstimate estimate;
  double bcl_bound = 0.0;     // NaN outside 0 < theta < pi/2 or N < d
  double simple_bound = 0.0;  // NaN below the validity threshold
};

/// Empirical non-coverage frequencies next to the closed-form bounds, one
/// row per (theta, N) pair.
std::vector<CoverageSweepRow> run_coverage_sweep(const CoverageSweepConfig& config);

std::string coverage_csv(const CoverageSweepConfig& config,
                         const std::vector<CoverageSweepRow>& rows);

struct PowerLawFit {
  double slope = 0.0;
  double intercept = 0.0;
  double residual_rms = 0.0;  // RMS of log-space residuals
};

/// Least squares of ln(mse) against ln(N).  Needs >= 3 points, all with
/// positive N and mse.
PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points);

/// Runs fn(0..count-1) on `workers` threads (atomic work stealing).  Worker
/// exceptions are rethrown on the calling thread after join.
void parallel_for(long long count, int workers, const std::function<void(long long)>& fn);

}  // namespace recon
