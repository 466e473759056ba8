// recon: Monte-Carlo experiments for consistent reconstruction under
// uniform noise.  Subcommands: mse-sweep, coverage, bounds, demo-1d, radial.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "recon/harness.hpp"

namespace {

using recon::ConfigError;

constexpr double kPi = std::numbers::pi;

std::vector<int> parse_int_list(const std::string& text, const std::string& field) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const int v = std::stoi(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("config field '" + field + "': cannot parse integer '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("config field '" + field + "': empty list");
  return out;
}

std::vector<double> parse_double_list(const std::string& text, const std::string& field) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t pos = 0;
      const double v = std::stod(item, &pos);
      if (pos != item.size()) throw std::invalid_argument(item);
      out.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("config field '" + field + "': cannot parse number '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError("config field '" + field + "': empty list");
  return out;
}

recon::DirectionLaw parse_law(const std::string& text, int d) {
  if (text == "uniform") return recon::DirectionLaw::uniform_sphere();
  if (text.rfind("cap:", 0) == 0) {
    double theta0 = 0.0;
    try {
      theta0 = std::stod(text.substr(4));
    } catch (const std::exception&) {
      throw ConfigError("config field 'law': cannot parse cap angle in '" + text + "'");
    }
    if (!(theta0 > 0.0) || !(theta0 < kPi)) {
      throw ConfigError("config field 'law': cap angle must lie in (0, pi)");
    }
    auto law = recon::DirectionLaw::uniform_cap(recon::UnitVector::basis(d, 0), theta0);
    return law;
  }
  if (text.rfind("file:", 0) == 0) {
    const std::string path = text.substr(5);
    std::ifstream in(path);
    if (!in) throw ConfigError("config field 'law': cannot open '" + path + "'");
    std::vector<recon::UnitVector> dirs;
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::stringstream ss(line);
      std::vector<double> coords;
      double x = 0.0;
      while (ss >> x) coords.push_back(x);
      if (coords.empty()) continue;
      if (static_cast<int>(coords.size()) != d) {
        throw ConfigError("config field 'law': direction of wrong dimension in '" + path + "'");
      }
      double norm2 = 0.0;
      for (double c : coords) norm2 += c * c;
      if (std::fabs(std::sqrt(norm2) - 1.0) > 1e-6) {
        throw ConfigError("config field 'law': non-unit direction in '" + path + "'");
      }
      dirs.push_back(recon::UnitVector::normalized(std::move(coords)));
    }
    if (dirs.empty()) throw ConfigError("config field 'law': no directions in '" + path + "'");
    auto law = recon::DirectionLaw::fixed_list(std::move(dirs));
    law.set_label("file:" + path);
    return law;
  }
  throw ConfigError("config field 'law': expected uniform, cap:<theta0> or file:<path>");
}

recon::EstimatorSelection parse_estimators(const std::string& text) {
  recon::EstimatorSelection sel{false, false, false};
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item == "consistent") sel.consistent = true;
    else if (item == "rg") sel.rg = true;
    else if (item == "linear") sel.linear = true;
    else throw ConfigError("config field 'estimators': unknown estimator '" + item + "'");
  }
  return sel;
}

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::fwrite(payload.data(), 1, payload.size(), stdout);
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw recon::Error("cannot open output file '" + out_path + "'");
  out.write(payload.data(), static_cast<std::streamsize>(payload.size()));
}

// Flag > config file > (for the seed) RECON_SEED > built-in default.
class OptionSource {
 public:
  OptionSource(CLI::App* cmd, std::string config_path,
               std::vector<std::string> allowed_keys)
      : cmd_(cmd) {
    if (config_path.empty()) return;
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config field 'config': cannot open '" + config_path + "'");
    try {
      in >> cfg_;
    } catch (const std::exception& e) {
      throw ConfigError("config field 'config': invalid JSON: " + std::string(e.what()));
    }
    if (!cfg_.is_object()) {
      throw ConfigError("config field 'config': expected a flat JSON object");
    }
    for (const auto& [key, value] : cfg_.items()) {
      (void)value;
      bool known = false;
      for (const std::string& k : allowed_keys) known = known || k == key;
      if (!known) throw ConfigError("config field '" + key + "': unknown key");
    }
  }

  template <class T>
  T get(const std::string& flag, const std::string& key, const T& cli_value,
        const T& fallback) const {
    if (cmd_->count(flag) > 0) return cli_value;
    if (cfg_.contains(key)) {
      try {
        return cfg_.at(key).get<T>();
      } catch (const std::exception&) {
        throw ConfigError("config field '" + key + "': wrong type");
      }
    }
    return fallback;
  }

  // Lists may be given as JSON arrays or comma strings.
  std::string get_list(const std::string& flag, const std::string& key,
                       const std::string& cli_value, const std::string& fallback) const {
    if (cmd_->count(flag) > 0) return cli_value;
    if (cfg_.contains(key)) {
      const nlohmann::json& v = cfg_.at(key);
      if (v.is_string()) return v.get<std::string>();
      if (v.is_array()) {
        std::string joined;
        for (const auto& item : v) {
          if (!joined.empty()) joined += ',';
          if (item.is_number_integer()) {
            joined += std::to_string(item.get<long long>());
          } else if (item.is_number()) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", item.get<double>());
            joined += buf;
          } else {
            throw ConfigError("config field '" + key + "': wrong element type");
          }
        }
        return joined;
      }
      throw ConfigError("config field '" + key + "': wrong type");
    }
    return fallback;
  }

  std::uint64_t get_seed(std::uint64_t cli_value) const {
    if (cmd_->count("--seed") > 0) return cli_value;
    if (cfg_.contains("seed")) {
      try {
        return cfg_.at("seed").get<std::uint64_t>();
      } catch (const std::exception&) {
        throw ConfigError("config field 'seed': wrong type");
      }
    }
    if (const char* env = std::getenv("RECON_SEED")) {
      char* end = nullptr;
      const unsigned long long v = std::strtoull(env, &end, 10);
      if (end == env || *end != '\0') {
        throw ConfigError("config field 'seed': RECON_SEED is not an integer");
      }
      return static_cast<std::uint64_t>(v);
    }
    return 0;
  }

 private:
  CLI::App* cmd_;
  nlohmann::json cfg_;
};

struct Flags {
  int d = 2;
  std::string n_list = "";
  int n = 0;
  long long trials = 0;
  double delta = 1.0;
  std::uint64_t seed = 0;
  std::string theta = "";
  double net_eps = 0.1;
  std::string out = "";
  int workers = 1;
  std::string law = "uniform";
  std::string estimators = "consistent,rg,linear";
  double vertex_cap = 5e6;
  std::string config = "";
};

void add_common_flags(CLI::App* cmd, Flags& f) {
  cmd->add_option("--seed", f.seed, "Master seed (default: RECON_SEED or 0)");
  cmd->add_option("--config", f.config, "JSON config file mirroring the flags");
}

int run_mse_sweep_cmd(CLI::App* cmd, const Flags& f) {
  const OptionSource src(cmd, f.config,
                         {"d", "n-list", "trials", "delta", "seed", "law", "out",
                          "workers", "estimators", "vertex-cap"});
  recon::SweepConfig config;
  config.dimension = src.get<int>("--d", "d", f.d, 2);
  config.n_list = parse_int_list(src.get_list("--n-list", "n-list", f.n_list, ""), "n-list");
  config.trials = src.get<long long>("--trials", "trials", f.trials, 1000);
  config.delta = src.get<double>("--delta", "delta", f.delta, 1.0);
  config.seed = src.get_seed(f.seed);
  config.law = parse_law(src.get<std::string>("--law", "law", f.law, "uniform"),
                         config.dimension);
  config.estimators = parse_estimators(
      src.get<std::string>("--estimators", "estimators", f.estimators,
                           "consistent,rg,linear"));
  config.vertex_cap = src.get<double>("--vertex-cap", "vertex-cap", f.vertex_cap, 5e6);
  config.workers = src.get<int>("--workers", "workers", f.workers, 1);
  config.out_path = src.get<std::string>("--out", "out", f.out, "");
  config.validate();

  const std::vector<recon::SweepRow> rows = recon::run_mse_sweep(config);
  std::size_t skipped = 0;
  for (const recon::SweepRow& row : rows) {
    if (row.skipped) {
      ++skipped;
      std::fprintf(stderr, "warning: skipped N=%d: %s\n", row.n, row.skip_reason.c_str());
    }
  }
  write_output(config.out_path, recon::sweep_csv(config, rows));
  if (skipped == rows.size()) {
    std::fprintf(stderr, "error: the vertex cap skipped every row\n");
    return 1;
  }
  return 0;
}

int run_coverage_cmd(CLI::App* cmd, const Flags& f) {
  const OptionSource src(cmd, f.config,
                         {"d", "theta", "n-list", "trials", "net-eps", "seed", "out",
                          "workers"});
  recon::CoverageSweepConfig config;
  config.dimension = src.get<int>("--d", "d", f.d, 2);
  config.theta_list =
      parse_double_list(src.get_list("--theta", "theta", f.theta, ""), "theta");
  config.n_list = parse_int_list(src.get_list("--n-list", "n-list", f.n_list, ""), "n-list");
  config.trials = src.get<long long>("--trials", "trials", f.trials, 1000);
  config.net_eps = src.get<double>("--net-eps", "net-eps", f.net_eps, 0.1);
  config.seed = src.get_seed(f.seed);
  config.workers = src.get<int>("--workers", "workers", f.workers, 1);
  config.out_path = src.get<std::string>("--out", "out", f.out, "");
  config.validate();

  const std::vector<recon::CoverageSweepRow> rows = recon::run_coverage_sweep(config);
  write_output(config.out_path, recon::coverage_csv(config, rows));
  return 0;
}

int run_bounds_cmd(CLI::App* cmd, const Flags& f) {
  const OptionSource src(cmd, f.config, {"d", "n", "delta", "theta"});
  const int d = src.get<int>("--d", "d", f.d, 2);
  const int n = src.get<int>("--n", "n", f.n, 0);
  const double delta = src.get<double>("--delta", "delta", f.delta, 1.0);
  const std::string theta_str = src.get_list("--theta", "theta", f.theta, "");
  if (d < 1) throw ConfigError("config field 'd': must be >= 1");
  if (n < 1) throw ConfigError("config field 'n': must be >= 1");
  if (!(delta > 0.0)) throw ConfigError("config field 'delta': must be positive");

  std::printf("theoretical quantities for d=%d, N=%d, delta=%.10g\n", d, n, delta);
  const recon::OneDimMse one = recon::one_dim_mse_exact(n, delta);
  std::printf("one-dim endpoint mse      = %.10g\n", one.endpoint_mse);
  std::printf("one-dim worst mse         = %.10g\n", one.worst_mse);
  if (d >= 2) {
    std::printf("C_d                       = %.10g\n", recon::gamma_ratio_constant(d));
    if (n >= 3) {
      const recon::RadialMseBound b = recon::theorem_radial_mse(n, d, delta);
      std::printf("radial mse leading        = %.10g\n", b.leading);
      std::printf("radial mse interval low   = %.10g\n", b.lower());
      std::printf("radial mse interval high  = %.10g\n", b.upper());
    }
    std::printf("mse lower limit (exact)   = %.10g\n", recon::mse_lower_limit(d, delta));
    std::printf("mse lower limit (weak)    = %.10g\n", recon::mse_lower_limit_weak(d, delta));
    std::printf("mse lower limit / N^2     = %.10g\n",
                recon::mse_lower_limit(d, delta) / (static_cast<double>(n) * n));
    if (n >= d + 2) {
      std::printf("mse upper bound (uniform) = %.10g\n", recon::mse_upper_uniform(n, d, delta));
      std::printf("mse upper bound (general) = %.10g\n",
                  recon::mse_upper_general(n, d, delta, recon::uniform_admissibility(d)));
    }
    std::printf("bcl hemisphere term       = %.10g\n", recon::bcl_hemisphere_term(n, d));
    if (!theta_str.empty()) {
      for (double theta : parse_double_list(theta_str, "theta")) {
        if (theta > 0.0 && theta < kPi / 2 && n >= d) {
          std::printf("bcl bound (theta=%.6g)    = %.10g\n", theta,
                      recon::bcl_noncoverage_bound(n, d, theta));
        }
        if (static_cast<double>(n) >= 2.0 * d / std::log(12.0 / 11.0)) {
          std::printf("simple bound              = %.10g\n",
                      recon::simple_noncoverage_bound(n, d));
        }
      }
    }
  }
  std::printf("linear mse floor          = %.10g\n",
              static_cast<double>(d) * d * (delta * delta / 3.0) / n);
  return 0;
}

int run_demo_1d_cmd(CLI::App* cmd, const Flags& f) {
  const OptionSource src(cmd, f.config, {"n", "trials", "delta", "seed"});
  const int n = src.get<int>("--n", "n", f.n, 10);
  const long long trials = src.get<long long>("--trials", "trials", f.trials, 200000);
  const double delta = src.get<double>("--delta", "delta", f.delta, 1.0);
  const std::uint64_t seed = src.get_seed(f.seed);
  if (n < 1) throw ConfigError("config field 'n': must be >= 1");
  if (trials < 100) throw ConfigError("config field 'trials': must be >= 100");
  if (!(delta > 0.0)) throw ConfigError("config field 'delta': must be positive");

  // Interval estimation of x from q_n = x + eps_n: the feasible interval is
  // [max(q) - delta, min(q) + delta]; track both endpoint and worst errors.
  double sum_endpoint = 0.0, sumsq_endpoint = 0.0;
  double sum_worst = 0.0, sumsq_worst = 0.0;
  for (long long t = 0; t < trials; ++t) {
    recon::RngStream stream(seed, 0, static_cast<std::uint64_t>(t));
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
      const double q = stream.uniform(-delta, delta);  // x = 0
      lo = std::max(lo, q - delta);
      hi = std::min(hi, q + delta);
    }
    const double endpoint2 = 0.5 * (lo * lo + hi * hi);
    const double w = std::max(std::fabs(lo), std::fabs(hi));
    sum_endpoint += endpoint2;
    sumsq_endpoint += endpoint2 * endpoint2;
    sum_worst += w * w;
    sumsq_worst += w * w * w * w;
  }
  const double tn = static_cast<double>(trials);
  const double mean_endpoint = sum_endpoint / tn;
  const double se_endpoint =
      std::sqrt((sumsq_endpoint / tn - mean_endpoint * mean_endpoint) / (tn - 1.0));
  const double mean_worst = sum_worst / tn;
  const double se_worst = std::sqrt((sumsq_worst / tn - mean_worst * mean_worst) / (tn - 1.0));

  const recon::OneDimMse exact = recon::one_dim_mse_exact(n, delta);
  const bool endpoint_ok = std::fabs(mean_endpoint - exact.endpoint_mse) <= 3.0 * se_endpoint;
  const bool worst_ok = std::fabs(mean_worst - exact.worst_mse) <= 3.0 * se_worst;
  std::printf("endpoint mse: empirical %.8g vs exact %.8g (se %.3g)  [%s]\n",
              mean_endpoint, exact.endpoint_mse, se_endpoint,
              endpoint_ok ? "PASS" : "FAIL");
  std::printf("worst mse:    empirical %.8g vs exact %.8g (se %.3g)  [%s]\n", mean_worst,
              exact.worst_mse, se_worst, worst_ok ? "PASS" : "FAIL");
  return (endpoint_ok && worst_ok) ? 0 : 1;
}

int run_radial_cmd(CLI::App* cmd, const Flags& f) {
  const OptionSource src(cmd, f.config, {"d", "n", "trials", "delta", "seed"});
  const int d = src.get<int>("--d", "d", f.d, 3);
  const int n = src.get<int>("--n", "n", f.n, 15);
  const long long trials = src.get<long long>("--trials", "trials", f.trials, 100000);
  const double delta = src.get<double>("--delta", "delta", f.delta, 1.0);
  const std::uint64_t seed = src.get_seed(f.seed);
  if (d < 2) throw ConfigError("config field 'd': must be >= 2");
  if (n < 1) throw ConfigError("config field 'n': must be >= 1");
  if (trials < 100) throw ConfigError("config field 'trials': must be >= 100");
  if (!(delta > 0.0)) throw ConfigError("config field 'delta': must be positive");

  // One radial draw serves every lambda on the grid.
  const std::vector<double> signal = [&] {
    std::vector<double> s(static_cast<std::size_t>(d), 0.0);
    s[0] = 1.0;
    return s;
  }();
  const recon::UnitVector probe = recon::UnitVector::basis(d, 0);
  const recon::DirectionLaw law = recon::DirectionLaw::uniform_sphere();
  std::vector<double> grid;
  for (int k = 1; k <= 10; ++k) grid.push_back(0.2 * k * delta);
  std::vector<long long> alive(grid.size(), 0);
  for (long long t = 0; t < trials; ++t) {
    recon::RngStream stream(seed, 0, static_cast<std::uint64_t>(t));
    const recon::Instance inst = recon::draw_instance(signal, n, delta, law, stream);
    const double r = recon::radial_extent(recon::error_polytope(inst), probe);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      if (r > grid[i]) ++alive[i];
    }
  }
  bool all_ok = true;
  std::printf("survival of the radial extent, d=%d N=%d delta=%.6g trials=%lld\n", d, n,
              delta, trials);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double theory = recon::radial_survival(grid[i], n, d, delta);
    const double freq = static_cast<double>(alive[i]) / static_cast<double>(trials);
    const double se =
        std::sqrt(std::max(theory * (1.0 - theory), 1e-300) / static_cast<double>(trials));
    const bool ok = std::fabs(freq - theory) <= 3.0 * se + 1e-12;
    all_ok = all_ok && ok;
    std::printf("lambda=%.3f  empirical %.6f  theory %.6f  [%s]\n", grid[i], freq, theory,
                ok ? "PASS" : "FAIL");
  }
  return all_ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent-reconstruction Monte-Carlo laboratory"};
  app.require_subcommand(1);

  Flags f;

  CLI::App* sweep = app.add_subcommand("mse-sweep", "Worst-case / radial MSE sweep (CSV)");
  sweep->add_option("--d", f.d, "Ambient dimension");
  sweep->add_option("--n-list", f.n_list, "Comma-separated strictly increasing N values");
  sweep->add_option("--trials", f.trials, "Trials per N");
  sweep->add_option("--delta", f.delta, "Noise half-width");
  sweep->add_option("--law", f.law, "uniform | cap:<theta0> | file:<path>");
  sweep->add_option("--estimators", f.estimators, "Subset of consistent,rg,linear");
  sweep->add_option("--vertex-cap", f.vertex_cap, "Cap on C(2N, d) per instance");
  sweep->add_option("--workers", f.workers, "Worker threads");
  sweep->add_option("--out", f.out, "Output CSV path (default stdout)");
  add_common_flags(sweep, f);

  CLI::App* coverage = app.add_subcommand("coverage", "Cap-coverage sweep (CSV)");
  coverage->add_option("--d", f.d, "Ambient dimension");
  coverage->add_option("--theta", f.theta, "Comma-separated cap radii");
  coverage->add_option("--n-list", f.n_list, "Comma-separated strictly increasing N values");
  coverage->add_option("--trials", f.trials, "Trials per row");
  coverage->add_option("--net-eps", f.net_eps, "Net resolution for d >= 3 certification");
  coverage->add_option("--workers", f.workers, "Worker threads");
  coverage->add_option("--out", f.out, "Output CSV path (default stdout)");
  add_common_flags(coverage, f);

  CLI::App* bounds = app.add_subcommand("bounds", "Print the closed-form quantities");
  bounds->add_option("--d", f.d, "Ambient dimension");
  bounds->add_option("--n", f.n, "Measurement count");
  bounds->add_option("--delta", f.delta, "Noise half-width");
  bounds->add_option("--theta", f.theta, "Optional cap radii for the coverage bounds");
  add_common_flags(bounds, f);

  CLI::App* demo = app.add_subcommand("demo-1d", "One-dimensional exact-law reproduction");
  demo->add_option("--n", f.n, "Measurement count");
  demo->add_option("--trials", f.trials, "Monte-Carlo trials");
  demo->add_option("--delta", f.delta, "Noise half-width");
  add_common_flags(demo, f);

  CLI::App* radial = app.add_subcommand("radial", "Radial survival-curve check");
  radial->add_option("--d", f.d, "Ambient dimension");
  radial->add_option("--n", f.n, "Measurement count");
  radial->add_option("--trials", f.trials, "Monte-Carlo trials");
  radial->add_option("--delta", f.delta, "Noise half-width");
  add_common_flags(radial, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (sweep->parsed()) return run_mse_sweep_cmd(sweep, f);
    if (coverage->parsed()) return run_coverage_cmd(coverage, f);
    if (bounds->parsed()) return run_bounds_cmd(bounds, f);
    if (demo->parsed()) return run_demo_1d_cmd(demo, f);
    if (radial->parsed()) return run_radial_cmd(radial, f);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
