#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(JITTERPOVM_BIN) + " " + args + " 2>&1";
  std::array<char, 4096> buf{};
  std::string out;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int status = pclose(pipe);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path scratch() {
  const fs::path dir = fs::temp_directory_path() / "jitterpovm_cli_tests";
  fs::create_directories(dir);
  return dir;
}

void write_file(const fs::path& p, const std::string& text) {
  std::ofstream f(p);
  REQUIRE(f.good());
  f << text;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  REQUIRE(f.good());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

struct Csv {
  std::vector<std::string> header;
  std::vector<std::vector<double>> columns;
};

Csv read_csv(const fs::path& p) {
  std::ifstream f(p);
  REQUIRE(f.good());
  Csv csv;
  std::string line;
  REQUIRE(static_cast<bool>(std::getline(f, line)));
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) csv.header.push_back(cell);
  csv.columns.resize(csv.header.size());
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t i = 0;
    while (std::getline(ls, cell, ',')) {
      REQUIRE(i < csv.columns.size());
      csv.columns[i++].push_back(std::stod(cell));
    }
    REQUIRE(i == csv.columns.size());
  }
  return csv;
}

double trapz(const std::vector<double>& x, const std::vector<double>& y) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) s += 0.5 * (y[i] + y[i + 1]) * (x[i + 1] - x[i]);
  return s;
}

double column_stddev(const std::vector<double>& x, const std::vector<double>& y) {
  const double m0 = trapz(x, y);
  std::vector<double> xy(x.size()), xxy(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    xy[i] = x[i] * y[i];
    xxy[i] = x[i] * x[i] * y[i];
  }
  const double m1 = trapz(x, xy) / m0;
  const double m2 = trapz(x, xxy) / m0;
  return std::sqrt(std::max(0.0, m2 - m1 * m1));
}

}  // namespace

TEST_CASE("density: k sweep produces unit-mass columns with earlier peaks for larger k") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "density_sweep.cfg";
  const fs::path out = dir / "density_sweep.csv";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "[state]\n"
             "t = 0\n"
             "[grid]\n"
             "dt = 0.002\n"
             "[sweep]\n"
             "k = 1 2 5\n");
  RunResult r = run_cli("density --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  Csv csv = read_csv(out);
  REQUIRE(csv.header.size() == 4);
  CHECK(csv.header[0] == "T");
  CHECK(csv.header[1] == "p_on[k=1]");
  CHECK(csv.header[3] == "p_on[k=5]");
  double prev_mean = 1e9;
  for (std::size_t c = 1; c < 4; ++c) {
    CHECK(trapz(csv.columns[0], csv.columns[c]) == doctest::Approx(1.0).epsilon(1e-4));
    std::vector<double> xy(csv.columns[0].size());
    for (std::size_t i = 0; i < xy.size(); ++i) xy[i] = csv.columns[0][i] * csv.columns[c][i];
    const double mean = trapz(csv.columns[0], xy);
    CHECK(mean < prev_mean);
    prev_mean = mean;
  }
}

TEST_CASE("density: explicit arrival list obeys the click-probability identity") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "density_arrivals.cfg";
  const fs::path out = dir / "density_arrivals.csv";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "efficiency = 0.7\n"
             "[state]\n"
             "arrivals = 0.0 0.8\n"
             "[grid]\n"
             "dt = 0.002\n"
             "[run]\n"
             "out = " +
                 out.string() + "\n");
  RunResult r = run_cli("density --config " + cfg.string());
  CHECK(r.exit_code == 0);
  Csv csv = read_csv(out);
  REQUIRE(csv.header.size() == 2);
  CHECK(trapz(csv.columns[0], csv.columns[1]) == doctest::Approx(1.0 - 0.09).epsilon(1e-4));
}

TEST_CASE("delay: simultaneous pair sweep broadens with the jitter std") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "delay_sweep.cfg";
  const fs::path out = dir / "delay_sweep.csv";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "[sweep]\n"
             "jitter_std = 0.25 0.5 1.0\n");
  RunResult r = run_cli("delay --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  Csv csv = read_csv(out);
  REQUIRE(csv.header.size() == 4);
  CHECK(csv.header[0] == "delta");
  CHECK(csv.header[1] == "p[std=0.25]");
  double prev = 0.0;
  for (std::size_t c = 1; c < 4; ++c) {
    CHECK(trapz(csv.columns[0], csv.columns[c]) == doctest::Approx(1.0).epsilon(1e-4));
    const double sd = column_stddev(csv.columns[0], csv.columns[c]);
    CHECK(sd > prev);
    // Identical arms double the variance: std(delta) = sqrt(2) * jitter std.
    const double want = std::sqrt(2.0) * 0.25 * std::pow(2.0, static_cast<double>(c - 1));
    CHECK(sd == doctest::Approx(want).epsilon(0.01));
    prev = sd;
  }
}

TEST_CASE("delay: sampled emission profile keeps the efficiency product mass") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "delay_chi.cfg";
  const fs::path out = dir / "delay_chi.csv";
  write_file(cfg,
             "[detector.A]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.25\n"
             "efficiency = 0.8\n"
             "[detector.B]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "efficiency = 0.9\n"
             "[state]\n"
             "chi = rectangular\n"
             "chi_center = 0.0\n"
             "chi_width = 0.3\n");
  RunResult r = run_cli("delay --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  Csv csv = read_csv(out);
  CHECK(trapz(csv.columns[0], csv.columns[1]) == doctest::Approx(0.72).epsilon(1e-4));
}

TEST_CASE("herald: conditional curves have unit area and broaden with jitter") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "herald.cfg";
  const fs::path out = dir / "herald.csv";
  write_file(cfg,
             "[detector.B]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "[state]\n"
             "wavepacket = rectangular\n"
             "center = 0\n"
             "width = 1\n"
             "[run]\n"
             "herald_time = auto\n"
             "[sweep]\n"
             "jitter_std = 0.25 0.5 1.0\n");
  RunResult r = run_cli("herald --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
  Csv csv = read_csv(out);
  REQUIRE(csv.header.size() == 4);
  CHECK(csv.header[0] == "t");
  double prev = 0.0;
  for (std::size_t c = 1; c < 4; ++c) {
    CHECK(trapz(csv.columns[0], csv.columns[c]) == doctest::Approx(1.0).epsilon(1e-4));
    const double sd = column_stddev(csv.columns[0], csv.columns[c]);
    CHECK(sd > prev);
    prev = sd;
  }
}

TEST_CASE("malformed configs exit 2 and leave no output behind") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "broken.cfg";
  const fs::path out = dir / "broken.csv";
  fs::remove(out);
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "flux_capacitance = 1.21\n");
  RunResult r = run_cli("density --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("broken.cfg:5") != std::string::npos);
  CHECK(!fs::exists(out));

  // Usage errors (missing --config) exit 2 as well.
  CHECK(run_cli("density").exit_code == 2);
  CHECK(run_cli("frobnicate --config x").exit_code == 2);
  // Missing output destination is a config error.
  const fs::path okcfg = dir / "no_out.cfg";
  write_file(okcfg, "[detector]\njitter = rectangular\na = 0\nb = 1\n");
  CHECK(run_cli("density --config " + okcfg.string()).exit_code == 2);
  // --help succeeds.
  CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("a grid override that misses the click support exits 3") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "narrow_grid.cfg";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "[state]\n"
             "t = 0\n"
             "[grid]\n"
             "t_min = 0\n"
             "t_max = 0.5\n");
  RunResult r = run_cli("density --config " + cfg.string() + " --out " + (dir / "narrow.csv").string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("oracle-check: deterministic across reruns and thread counts") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "oracle.cfg";
  const fs::path rep1 = dir / "oracle1.csv";
  const fs::path rep2 = dir / "oracle2.csv";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "efficiency = 0.8\n"
             "[state]\n"
             "wavepacket = rectangular\n"
             "center = 0\n"
             "width = 1\n"
             "[run]\n"
             "trials = 20000\n"
             "seed = 11\n");
  RunResult a = run_cli("oracle-check --config " + cfg.string() + " --threads 1 --out " + rep1.string());
  RunResult b = run_cli("oracle-check --config " + cfg.string() + " --threads 4 --out " + rep2.string());
  CHECK(a.exit_code == 0);
  CHECK(b.exit_code == 0);
  CHECK(a.output == b.output);
  CHECK(slurp(rep1) == slurp(rep2));
  CHECK(a.output.find("PASS") != std::string::npos);
  CHECK(a.output.find("firing_k5") != std::string::npos);
  CHECK(a.output.find("pair_delay") != std::string::npos);
  CHECK(a.output.find("heralded") != std::string::npos);
  CHECK(a.output.find("seed=") != std::string::npos);
  CHECK(a.output.find("bound=") != std::string::npos);

  RunResult c = run_cli("oracle-check --config " + cfg.string() + " --threads 2 --seed 12");
  CHECK(c.exit_code == 0);
  CHECK(c.output != a.output);
}

TEST_CASE("oracle-check: a corrupted simulated efficiency is caught") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "oracle_bad.cfg";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "efficiency = 0.8\n"
             "[state]\n"
             "wavepacket = rectangular\n"
             "center = 0\n"
             "width = 1\n"
             "[run]\n"
             "trials = 20000\n"
             "seed = 11\n"
             "selftest_efficiency_scale_b = 0.7\n");
  RunResult r = run_cli("oracle-check --config " + cfg.string());
  CHECK(r.exit_code == 1);
  // The pair-delay check sees the lowered coincidence rate and fails.
  std::istringstream lines(r.output);
  std::string line;
  bool pair_delay_failed = false;
  while (std::getline(lines, line))
    if (line.find("pair_delay") != std::string::npos && line.find("FAIL") != std::string::npos)
      pair_delay_failed = true;
  CHECK(pair_delay_failed);
}

TEST_CASE("oracle-check: refuses statistically meaningless runs") {
  const fs::path dir = scratch();
  const fs::path cfg = dir / "oracle_tiny.cfg";
  write_file(cfg,
             "[detector]\n"
             "jitter = lognormal-moments\n"
             "mean = 1.0\n"
             "std = 0.5\n"
             "[state]\n"
             "wavepacket = rectangular\n"
             "center = 0\n"
             "width = 1\n"
             "[run]\n"
             "trials = 5000\n");
  CHECK(run_cli("oracle-check --config " + cfg.string()).exit_code == 2);
}
