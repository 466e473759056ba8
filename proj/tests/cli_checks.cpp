// End-to-end checks of the recon CLI: exit codes, config handling, the
// RECON_SEED fallback and output formats.  argv[1] is the CLI binary.

#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

namespace {

int g_failures = 0;
std::string g_cli;
std::string g_dir;

void check(bool ok, const std::string& what) {
  std::printf("[%s] %s\n", ok ? "ok" : "FAILED", what.c_str());
  if (!ok) ++g_failures;
}

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

RunResult run(const std::string& args, const std::string& env_prefix = "") {
  const std::string out_path = g_dir + "/stdout.txt";
  const std::string err_path = g_dir + "/stderr.txt";
  const std::string command = env_prefix + "'" + g_cli + "' " + args + " > " + out_path +
                              " 2> " + err_path;
  const int rc = std::system(command.c_str());
  RunResult result;
  result.exit_code = rc == -1 ? -1 : WEXITSTATUS(rc);
  std::ifstream out(out_path);
  std::ostringstream so;
  so << out.rdbuf();
  result.out = so.str();
  std::ifstream err(err_path);
  std::ostringstream se;
  se << err.rdbuf();
  result.err = se.str();
  return result;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  out << content;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

// Value printed on the `bounds` line whose label starts with `prefix`.
double bounds_value(const std::string& out, const std::string& prefix) {
  std::istringstream lines(out);
  std::string line;
  while (std::getline(lines, line)) {
    if (line.rfind(prefix, 0) == 0) {
      const std::size_t eq = line.find('=');
      if (eq != std::string::npos) return std::strtod(line.c_str() + eq + 1, nullptr);
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

int main(int argc, char** argv) {
  if (argc < 2) {
    std::fprintf(stderr, "usage: recon_cli_checks <path-to-recon-cli>\n");
    return 2;
  }
  g_cli = argv[1];
  char tmpl[] = "/tmp/recon_cli_checks_XXXXXX";
  const char* dir = mkdtemp(tmpl);
  if (!dir) return 2;
  g_dir = dir;

  // demo-1d reproduces the exact one-dimensional laws.
  {
    const RunResult r = run("demo-1d --n 10 --trials 20000 --seed 7");
    check(r.exit_code == 0, "demo-1d exits 0");
    check(contains(r.out, "PASS") && !contains(r.out, "FAIL"), "demo-1d passes both laws");
    check(contains(r.out, "0.060606") && contains(r.out, "0.10606"),
          "demo-1d prints the exact constants");
  }

  // bounds prints the closed-form table.
  {
    const RunResult r = run("bounds --d 3 --n 1000 --delta 1");
    check(r.exit_code == 0, "bounds exits 0");
    const double uniform = bounds_value(r.out, "mse upper bound (uniform)");
    check(std::fabs(uniform - 8.762453850171) < 1e-3, "uniform bound value 8.7625");
    const double lower = bounds_value(r.out, "mse lower limit (exact)");
    check(std::fabs(lower - 8.0) < 1e-9, "lower-limit constant 8");
    const double floor = bounds_value(r.out, "linear mse floor");
    check(std::fabs(floor - 9.0 / 3.0 / 1000.0) < 1e-12, "linear floor d^2 sigma^2 / N");
  }

  // radial survival curve matches the closed form.
  {
    const RunResult r = run("radial --d 3 --n 15 --trials 20000 --seed 3");
    check(r.exit_code == 0, "radial exits 0");
    check(contains(r.out, "PASS") && !contains(r.out, "FAIL"), "radial passes the curve");
  }

  // Config file mirrors flags, flags override, unknown keys are rejected.
  {
    write_file(g_dir + "/sweep.json",
               R"({"d": 2, "n-list": [4, 6], "trials": 150, "seed": 3})");
    const RunResult r =
        run("mse-sweep --config " + g_dir + "/sweep.json --out " + g_dir + "/a.csv");
    check(r.exit_code == 0, "mse-sweep with JSON config exits 0");
    const std::string csv = read_file(g_dir + "/a.csv");
    check(csv.rfind("# config: ", 0) == 0, "CSV starts with the config line");
    check(contains(csv, "\"seed\":3"), "config seed is embedded in the CSV");

    // A flag overrides the config value.
    const RunResult r2 = run("mse-sweep --config " + g_dir + "/sweep.json --seed 4 --out " +
                             g_dir + "/b.csv");
    check(r2.exit_code == 0 && contains(read_file(g_dir + "/b.csv"), "\"seed\":4"),
          "flags override the config file");

    write_file(g_dir + "/bogus.json", R"({"d": 2, "bogus": 1})");
    const RunResult r3 = run("mse-sweep --config " + g_dir + "/bogus.json");
    check(r3.exit_code == 2, "unknown config key exits 2");
    check(contains(r3.err, "bogus"), "unknown key is named in the message");

    write_file(g_dir + "/bad.json", R"({"d": 2, "n-list": [4], "trials": 5})");
    const RunResult r4 = run("mse-sweep --config " + g_dir + "/bad.json");
    check(r4.exit_code == 2, "invalid trials exits 2");
    check(contains(r4.err, "trials"), "invalid field is named in the message");
  }

  // RECON_SEED is the default seed when --seed is absent.
  {
    const std::string base = "mse-sweep --d 2 --n-list 4 --trials 120 --out ";
    const RunResult r1 = run(base + g_dir + "/env.csv", "RECON_SEED=99 ");
    const RunResult r2 = run(base + g_dir + "/flag.csv --seed 99");
    check(r1.exit_code == 0 && r2.exit_code == 0, "env-seed runs exit 0");
    check(read_file(g_dir + "/env.csv") == read_file(g_dir + "/flag.csv"),
          "RECON_SEED matches --seed byte for byte");
    const RunResult r3 = run(base + g_dir + "/badenv.csv", "RECON_SEED=notanumber ");
    check(r3.exit_code == 2, "malformed RECON_SEED exits 2");
  }

  // Law parsing: cap and file lists work, junk is rejected.
  {
    const RunResult r =
        run("mse-sweep --d 3 --n-list 6 --trials 120 --law cap:0.8 --seed 5 --out " +
            g_dir + "/cap.csv");
    check(r.exit_code == 0, "cap law runs");
    check(contains(read_file(g_dir + "/cap.csv"), "cap:0.8"), "cap law echoed in config");

    write_file(g_dir + "/dirs.txt", "1 0\n0 1\n-1 0\n0 -1\n0.6 0.8\n-0.6 0.8\n");
    const RunResult r2 = run("mse-sweep --d 2 --n-list 4,6 --trials 120 --law file:" +
                             g_dir + "/dirs.txt --seed 5 --out " + g_dir + "/file.csv");
    check(r2.exit_code == 0, "file law runs");

    write_file(g_dir + "/badd.txt", "1 1\n");
    const RunResult r3 = run("mse-sweep --d 2 --n-list 4 --trials 120 --law file:" +
                             g_dir + "/badd.txt");
    check(r3.exit_code == 2, "non-unit file directions exit 2");

    const RunResult r4 = run("mse-sweep --d 2 --n-list 4 --trials 120 --law bogus");
    check(r4.exit_code == 2, "unknown law exits 2");
  }

  // Capacity exhaustion on every row exits 1.
  {
    const RunResult r = run("mse-sweep --d 6 --n-list 500 --trials 100 --seed 1");
    check(r.exit_code == 1, "all-rows-skipped run exits 1");
  }

  // Coverage sweep CSV.
  {
    const RunResult r = run("coverage --d 2 --theta 1.2 --n-list 5,10 --trials 400 --seed 1 --out " +
                            g_dir + "/cov.csv");
    check(r.exit_code == 0, "coverage exits 0");
    const std::string csv = read_file(g_dir + "/cov.csv");
    check(contains(csv, "bcl_bound") && contains(csv, "simple_bound"),
          "coverage CSV carries the bound columns");
  }

  // No subcommand is a usage error.
  {
    const RunResult r = run("");
    check(r.exit_code == 2, "missing subcommand exits 2");
  }

  std::printf("cli_checks: %s\n", g_failures == 0 ? "all passed" : "FAILURES");
  return g_failures == 0 ? 0 : 1;
}
