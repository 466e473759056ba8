#include "recon/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <mutex>
#include <numbers>
#include <thread>

#include <nlohmann/json.hpp>

#include "recon/linalg.hpp"

namespace recon {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

double binomial_capped(int n, int k, double cap) {
  if (k < 0 || k > n) return 0.0;
  k = std::min(k, n - k);
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c *= static_cast<double>(n - k + i);
    c /= static_cast<double>(i);
    if (c > cap) return cap * 2.0;
  }
  return c;
}

std::string format_g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct MeanSe {
  double mean = kNaN;
  double se = kNaN;
};

// Sample mean and standard error, accumulated in index order so the result
// is independent of how trials were scheduled.
MeanSe reduce_mean_se(const std::vector<double>& values) {
  const auto n = static_cast<double>(values.size());
  if (values.empty()) return {};
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double var = values.size() > 1 ? ss / (n - 1.0) : 0.0;
  return MeanSe{mean, std::sqrt(var / n)};
}

std::string estimators_string(const EstimatorSelection& sel) {
  std::string s;
  if (sel.consistent) s += "consistent";
  if (sel.rg) s += (s.empty() ? "" : ",") + std::string("rg");
  if (sel.linear) s += (s.empty() ? "" : ",") + std::string("linear");
  return s;
}

double squared_error(const std::vector<double>& estimate, const std::vector<double>& truth) {
  double s = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const double e = estimate[i] - truth[i];
    s += e * e;
  }
  return s;
}

}  // namespace

void parallel_for(long long count, int workers, const std::function<void(long long)>& fn) {
  if (count <= 0) return;
  workers = std::max(1, workers);
  if (count < workers) workers = static_cast<int>(count);
  if (workers == 1) {
    for (long long i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<long long> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto body = [&] {
    try {
      for (;;) {
        const long long i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= count || failed.load(std::memory_order_relaxed)) break;
        fn(i);
      }
    } catch (...) {
      std::scoped_lock lock(error_mutex);
      if (!error) error = std::current_exception();
      failed.store(true, std::memory_order_relaxed);
    }
  };
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(workers));
  for (int w = 0; w < workers; ++w) threads.emplace_back(body);
  for (std::thread& t : threads) t.join();
  if (error) std::rethrow_exception(error);
}

void SweepConfig::validate() const {
  if (dimension < 1) throw ConfigError("config field 'd': must be >= 1");
  if (n_list.empty()) throw ConfigError("config field 'n-list': must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("config field 'n-list': entries must be >= 1");
    if (n_list[i] < dimension) {
      throw ConfigError("config field 'n-list': every N must be >= d");
    }
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ConfigError("config field 'n-list': must be strictly increasing");
    }
  }
  if (trials < 100) throw ConfigError("config field 'trials': must be >= 100");
  if (!(delta > 0.0)) throw ConfigError("config field 'delta': must be positive");
  if (!(vertex_cap > 0.0)) throw ConfigError("config field 'vertex-cap': must be positive");
  if (workers < 1) throw ConfigError("config field 'workers': must be >= 1");
  if (!estimators.consistent && !estimators.rg && !estimators.linear) {
    throw ConfigError("config field 'estimators': at least one estimator required");
  }
  if (law.is_fixed_list()) {
    if (law.fixed_list_size() < n_list.back()) {
      throw ConfigError("config field 'law': fixed list shorter than the largest N");
    }
  }
}

std::vector<SweepRow> run_mse_sweep(const SweepConfig& config) {
  config.validate();
  const int d = config.dimension;
  const double delta = config.delta;
  const double sigma2 = delta * delta / 3.0;
  std::vector<double> signal(static_cast<std::size_t>(d), 0.0);
  signal[0] = 1.0;  // fixed unit signal; the error laws are translation invariant
  const UnitVector probe = UnitVector::basis(d);

  struct TrialOut {
    double w2 = 0.0, r2 = 0.0;
    double ce2 = kNaN, rg2 = kNaN, lin2 = kNaN;
    unsigned char cr_fail = 0, sig_fail = 0;
  };

  std::vector<SweepRow> rows;
  rows.reserve(config.n_list.size());
  for (std::size_t row_index = 0; row_index < config.n_list.size(); ++row_index) {
    const int n = config.n_list[row_index];
    SweepRow row;
    row.d = d;
    row.n = n;
    row.trials = config.trials;
    row.seed = config.seed;

    if (binomial_capped(2 * n, d, config.vertex_cap) > config.vertex_cap) {
      row.skipped = true;
      row.skip_reason = "C(2N, d) exceeds the vertex enumeration cap";
      rows.push_back(std::move(row));
      continue;
    }

    std::vector<TrialOut> outs(static_cast<std::size_t>(config.trials));
    const VertexEnumLimits limits{config.vertex_cap};
    parallel_for(config.trials, config.workers, [&](long long t) {
      RngStream stream(config.seed, static_cast<std::uint64_t>(row_index),
                       static_cast<std::uint64_t>(t));
      TrialOut& out = outs[static_cast<std::size_t>(t)];
      const Instance instance = draw_instance(signal, n, delta, config.law, stream);
      out.sig_fail = max_abs_residual(signal, instance) <= delta ? 0 : 1;

      const SlabSystem slabs = error_polytope(instance);
      out.w2 = [&] {
        const double w = worst_case_error_exact(slabs, limits).value;
        return w * w;
      }();
      const double r = radial_extent(slabs, probe);
      out.r2 = r * r;

      DualFrame dual;
      std::vector<double> linear;
      if (config.estimators.linear || config.estimators.consistent) {
        std::vector<UnitVector> directions;
        directions.reserve(instance.measurements.size());
        for (const Measurement& m : instance.measurements) directions.push_back(m.direction);
        dual = canonical_dual(directions);
        linear = linear_estimate(instance, dual);
      }
      if (config.estimators.linear) {
        out.lin2 = squared_error(linear, signal);
      }
      if (config.estimators.consistent) {
        // Warm start from the linear estimate; the selection among
        // consistent points is free, this one is observable-only.
        EstimateReport report = consistent_estimate(instance, linear,
                                                    kSweepConsistencyTol, kSweepMaxPasses);
        out.cr_fail = report.consistent ? 0 : 1;
        out.ce2 = squared_error(report.estimate, signal);
      }
      if (config.estimators.rg) {
        EstimateReport report =
            rg_estimate(instance, std::vector<double>(static_cast<std::size_t>(d), 0.0));
        out.rg2 = squared_error(report.estimate, signal);
      }
    });

    std::vector<double> w2(outs.size()), r2(outs.size());
    std::vector<double> ce2, rg2, lin2;
    if (config.estimators.consistent) ce2.resize(outs.size());
    if (config.estimators.rg) rg2.resize(outs.size());
    if (config.estimators.linear) lin2.resize(outs.size());
    for (std::size_t t = 0; t < outs.size(); ++t) {
      w2[t] = outs[t].w2;
      r2[t] = outs[t].r2;
      if (config.estimators.consistent) ce2[t] = outs[t].ce2;
      if (config.estimators.rg) rg2[t] = outs[t].rg2;
      if (config.estimators.linear) lin2[t] = outs[t].lin2;
      row.consistent_residual_failures += outs[t].cr_fail;
      row.signal_feasibility_failures += outs[t].sig_fail;
    }
    const MeanSe w2s = reduce_mean_se(w2);
    row.w2_mean = w2s.mean;
    row.w2_se = w2s.se;
    const MeanSe r2s = reduce_mean_se(r2);
    row.r2_mean = r2s.mean;
    row.r2_se = r2s.se;
    const MeanSe ces = reduce_mean_se(ce2);
    row.mse_consistent = ces.mean;
    row.mse_consistent_se = ces.se;
    const MeanSe rgs = reduce_mean_se(rg2);
    row.mse_rg = rgs.mean;
    row.mse_rg_se = rgs.se;
    const MeanSe lins = reduce_mean_se(lin2);
    row.mse_linear = lins.mean;
    row.mse_linear_se = lins.se;

    // Theory columns, functions of (d, N, delta) alone.
    if (d >= 2 && n >= 3) {
      const RadialMseBound b = theorem_radial_mse(n, d, delta);
      row.radial_theory_low = b.lower();
      row.radial_theory_high = b.upper();
    } else if (d == 1) {
      // Exact one-dimensional law: the radial extent along the probe is the
      // minimum of N uniforms on [0, 2 delta].
      const double exact = one_dim_mse_exact(n, delta).endpoint_mse;
      row.radial_theory_low = exact;
      row.radial_theory_high = exact;
    } else {
      row.radial_theory_low = kNaN;
      row.radial_theory_high = kNaN;
    }
    row.upper_uniform = (d >= 2 && n >= d + 2) ? mse_upper_uniform(n, d, delta) : kNaN;
    row.upper_general = (d >= 2 && n >= d + 2)
                            ? mse_upper_general(n, d, delta, uniform_admissibility(d))
                            : kNaN;
    row.lower_limit_over_n2 =
        d >= 2 ? mse_lower_limit(d, delta) / (static_cast<double>(n) * n) : kNaN;
    row.linear_floor = static_cast<double>(d) * d * sigma2 / n;

    rows.push_back(std::move(row));
  }
  return rows;
}

namespace {

nlohmann::ordered_json sweep_config_json(const SweepConfig& config) {
  // Deliberately excludes 'workers' and 'out': the CSV must be a pure
  // function of the experiment definition and the seed.
  nlohmann::ordered_json j;
  j["d"] = config.dimension;
  j["n-list"] = config.n_list;
  j["trials"] = config.trials;
  j["delta"] = config.delta;
  j["seed"] = config.seed;
  j["law"] = config.law.describe();
  j["estimators"] = estimators_string(config.estimators);
  j["vertex-cap"] = config.vertex_cap;
  return j;
}

}  // namespace

std::string sweep_csv(const SweepConfig& config, const std::vector<SweepRow>& rows) {
  std::string out = "# config: " + sweep_config_json(config).dump() + "\n";
  out +=
      "d,N,trials,w2_mean,w2_se,r2_mean,r2_se,"
      "mse_consistent,mse_consistent_se,mse_rg,mse_rg_se,mse_linear,mse_linear_se,"
      "radial_theory_low,radial_theory_high,upper_uniform,upper_general,"
      "lower_limit_over_n2,linear_floor,seed\n";
  for (const SweepRow& r : rows) {
    if (r.skipped) {
      out += "# skipped N=" + std::to_string(r.n) + ": " + r.skip_reason + "\n";
      continue;
    }
    out += std::to_string(r.d) + ',' + std::to_string(r.n) + ',' +
           std::to_string(r.trials) + ',';
    for (double v : {r.w2_mean, r.w2_se, r.r2_mean, r.r2_se, r.mse_consistent,
                     r.mse_consistent_se, r.mse_rg, r.mse_rg_se, r.mse_linear,
                     r.mse_linear_se, r.radial_theory_low, r.radial_theory_high,
                     r.upper_uniform, r.upper_general, r.lower_limit_over_n2,
                     r.linear_floor}) {
      out += format_g17(v) + ',';
    }
    out += std::to_string(r.seed) + '\n';
  }
  return out;
}

void CoverageSweepConfig::validate() const {
  if (dimension < 2) throw ConfigError("config field 'd': must be >= 2");
  if (theta_list.empty()) throw ConfigError("config field 'theta': must be nonempty");
  for (double theta : theta_list) {
    if (!(theta > 0.0) || !(theta < std::numbers::pi)) {
      throw ConfigError("config field 'theta': entries must lie in (0, pi)");
    }
  }
  if (n_list.empty()) throw ConfigError("config field 'n-list': must be nonempty");
  for (std::size_t i = 0; i < n_list.size(); ++i) {
    if (n_list[i] < 1) throw ConfigError("config field 'n-list': entries must be >= 1");
    if (i > 0 && n_list[i] <= n_list[i - 1]) {
      throw ConfigError("config field 'n-list': must be strictly increasing");
    }
  }
  if (trials < 100) throw ConfigError("config field 'trials': must be >= 100");
  if (!(net_eps > 0.0)) throw ConfigError("config field 'net-eps': must be positive");
  if (workers < 1) throw ConfigError("config field 'workers': must be >= 1");
}

namespace {

// 0 = not covered, 1 = covered, 2 = indeterminate.
int classify_coverage_trial(int n, int d, double theta, const GeodesicNet* net,
                            double net_eps, RngStream& stream) {
  if (d == 2) {
    std::vector<ArcSpec> arcs(static_cast<std::size_t>(n));
    for (ArcSpec& a : arcs) {
      a.center = stream.uniform(0.0, 2.0 * std::numbers::pi);
      a.half_width = theta;
    }
    return arc_noncoverage_exact_d2(arcs) ? 0 : 1;
  }
  std::vector<BiCap> caps;
  caps.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    caps.push_back(BiCap{sample_uniform_direction(d, stream), theta, 0.0});
  }
  switch (noncoverage_event(caps, *net, net_eps).certificate) {
    case CoverageCertificate::not_covered:
      return 0;
    case CoverageCertificate::covered:
      return 1;
    default:
      return 2;
  }
}

}  // namespace

std::vector<CoverageSweepRow> run_coverage_sweep(const CoverageSweepConfig& config) {
  config.validate();
  const int d = config.dimension;
  std::vector<CoverageSweepRow> rows;
  std::uint64_t row_index = 0;
  for (double theta : config.theta_list) {
    for (int n : config.n_list) {
      CoverageSweepRow row;
      row.d = d;
      row.theta = theta;
      row.n = n;

      GeodesicNet net;
      if (d >= 3) {
        RngStream net_stream(config.seed, row_index, 0);
        net = build_geodesic_net(d, config.net_eps, net_stream);
      }
      std::vector<unsigned char> outcome(static_cast<std::size_t>(config.trials));
      parallel_for(config.trials, config.workers, [&](long long t) {
        RngStream stream(config.seed, row_index, static_cast<std::uint64_t>(t) + 1);
        outcome[static_cast<std::size_t>(t)] = static_cast<unsigned char>(
            classify_coverage_trial(n, d, theta, d >= 3 ? &net : nullptr,
                                    config.net_eps, stream));
      });
      CoverageEstimate est;
      est.trials = config.trials;
      for (unsigned char o : outcome) {
        if (o == 0) ++est.noncover_count;
        else if (o == 1) ++est.cover_count;
        else ++est.indeterminate_count;
      }
      est.point_estimate = static_cast<double>(est.noncover_count) /
                           static_cast<double>(est.trials);
      est.std_error = std::sqrt(est.point_estimate * (1.0 - est.point_estimate) /
                                static_cast<double>(est.trials));
      row.estimate = est;

      row.bcl_bound = (theta < 0.5 * std::numbers::pi && n >= d)
                          ? bcl_noncoverage_bound(n, d, theta)
                          : kNaN;
      const bool simple_valid =
          static_cast<double>(n) >= 2.0 * d / std::log(12.0 / 11.0) &&
          theta >= std::acos(1.0 / std::sqrt(static_cast<double>(d))) &&
          theta < 0.5 * std::numbers::pi;
      row.simple_bound = simple_valid ? simple_noncoverage_bound(n, d) : kNaN;

      rows.push_back(std::move(row));
      ++row_index;
    }
  }
  return rows;
}

std::string coverage_csv(const CoverageSweepConfig& config,
                         const std::vector<CoverageSweepRow>& rows) {
  nlohmann::ordered_json j;
  j["d"] = config.dimension;
  j["theta-list"] = config.theta_list;
  j["n-list"] = config.n_list;
  j["trials"] = config.trials;
  j["net-eps"] = config.net_eps;
  j["seed"] = config.seed;
  std::string out = "# config: " + j.dump() + "\n";
  out +=
      "d,theta,N,trials,noncover,cover,indeterminate,point_estimate,std_error,"
      "bcl_bound,simple_bound\n";
  for (const CoverageSweepRow& r : rows) {
    out += std::to_string(r.d) + ',' + format_g17(r.theta) + ',' +
           std::to_string(r.n) + ',' + std::to_string(r.estimate.trials) + ',' +
           std::to_string(r.estimate.noncover_count) + ',' +
           std::to_string(r.estimate.cover_count) + ',' +
           std::to_string(r.estimate.indeterminate_count) + ',' +
           format_g17(r.estimate.point_estimate) + ',' +
           format_g17(r.estimate.std_error) + ',' + format_g17(r.bcl_bound) + ',' +
           format_g17(r.simple_bound) + '\n';
  }
  return out;
}

PowerLawFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3) {
    throw DomainError("fit_power_law: needs at least 3 points");
  }
  for (const auto& [n, mse] : points) {
    if (!(n > 0.0) || !(mse > 0.0)) {
      throw DomainError("fit_power_law: all coordinates must be positive");
    }
  }
  const double count = static_cast<double>(points.size());
  double sx = 0.0, sy = 0.0;
  for (const auto& [n, mse] : points) {
    sx += std::log(n);
    sy += std::log(mse);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0;
  for (const auto& [n, mse] : points) {
    const double dx = std::log(n) - mx;
    sxx += dx * dx;
    sxy += dx * (std::log(mse) - my);
  }
  if (!(sxx > 0.0)) {
    throw DomainError("fit_power_law: degenerate abscissae");
  }
  PowerLawFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss = 0.0;
  for (const auto& [n, mse] : points) {
    const double r = std::log(mse) - (fit.intercept + fit.slope * std::log(n));
    ss += r * r;
  }
  fit.residual_rms = std::sqrt(ss / count);
  return fit;
}

}  // namespace recon
