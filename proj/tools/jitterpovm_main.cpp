// Command-line front end: scenario configs in, CSV data out.
//
//   jitterpovm <density|delay|herald|oracle-check> --config <path> [--out <path>]
//              [--seed N] [--trials N] [--threads N]
//
// Exit codes: 0 success, 1 failed oracle check (or internal error),
// 2 config/usage error, 3 grid-coverage error.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jitterpovm/coincidence.hpp"
#include "jitterpovm/config.hpp"
#include "jitterpovm/csv.hpp"
#include "jitterpovm/density.hpp"
#include "jitterpovm/detector.hpp"
#include "jitterpovm/errors.hpp"
#include "jitterpovm/heralding.hpp"
#include "jitterpovm/montecarlo.hpp"
#include "jitterpovm/povm.hpp"
#include "jitterpovm/states.hpp"

namespace jp = jitterpovm;

namespace {

struct Options {
  std::string config_path;
  std::string out_override;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> trials;
  std::optional<int> threads;
};

std::string required_out(const jp::Config& cfg, const Options& opt) {
  if (!opt.out_override.empty()) return opt.out_override;
  if (cfg.has("run.out")) return cfg.get_string("run.out");
  throw jp::ConfigError(cfg.name(), 0, "no output path: set run.out or pass --out");
}

std::uint64_t run_seed(const jp::Config& cfg, const Options& opt) {
  if (opt.seed) return *opt.seed;
  return static_cast<std::uint64_t>(cfg.get_int("run.seed", 1));
}

std::uint64_t run_trials(const jp::Config& cfg, const Options& opt) {
  if (opt.trials) return *opt.trials;
  return static_cast<std::uint64_t>(cfg.get_int("run.trials", 1000000));
}

int run_threads(const jp::Config& cfg, const Options& opt) {
  const int n = opt.threads ? *opt.threads : static_cast<int>(cfg.get_int("run.threads", 1));
  if (n < 1) throw jp::ConfigError(cfg.name(), cfg.line_of("run.threads"), "threads must be >= 1");
  return n;
}

// Rebuilds a detector's jitter with a swept standard deviation; only kinds
// parameterized by (mean, std) support the sweep.
jp::JitterDistribution jitter_with_std(const jp::Config& cfg, const std::string& prefix, double stddev) {
  const std::string kind_key = cfg.has(prefix + ".jitter") ? prefix + ".jitter" : "detector.jitter";
  const std::string kind = cfg.get_string(kind_key);
  const std::string mean_key = cfg.has(prefix + ".mean") ? prefix + ".mean" : "detector.mean";
  if (kind == "lognormal-moments")
    return jp::JitterDistribution::log_normal_from_moments(cfg.get_number(mean_key), stddev);
  if (kind == "truncated-gaussian")
    return jp::JitterDistribution::truncated_gaussian(cfg.get_number(mean_key), stddev);
  throw jp::ConfigError(cfg.name(), cfg.line_of(kind_key),
                        "sweep.jitter_std needs a (mean, std) jitter kind, got '" + kind + "'");
}

int cmd_density(const jp::Config& cfg, const Options& opt) {
  const std::string out = required_out(cfg, opt);
  const jp::DetectorModel det = jp::detector_from_config(cfg, 'A');

  std::vector<int> ks;
  std::vector<double> arrivals;
  if (cfg.has("sweep.k")) {
    for (double k : cfg.get_number_list("sweep.k")) ks.push_back(static_cast<int>(k));
  } else if (cfg.has("state.arrivals")) {
    arrivals = cfg.get_number_list("state.arrivals");
  } else {
    ks.push_back(static_cast<int>(cfg.get_int("state.k", 1)));
  }
  const double t0 = cfg.get_number("state.t", 0.0);

  double lo = arrivals.empty() ? t0 : *std::min_element(arrivals.begin(), arrivals.end());
  double hi = (arrivals.empty() ? t0 : *std::max_element(arrivals.begin(), arrivals.end())) +
              det.jitter.upper_support();
  lo = cfg.get_number("grid.t_min", lo);
  hi = cfg.get_number("grid.t_max", hi);
  const double dt = cfg.get_number("grid.dt", (hi - lo) / 20000.0);
  const jp::TimeGrid grid = jp::TimeGrid::with_spacing(lo, hi, dt);

  std::vector<std::string> header{"T"};
  std::vector<std::vector<double>> columns;
  columns.emplace_back();
  for (int i = 0; i < grid.n_points(); ++i) columns.back().push_back(grid.t(i));

  if (!arrivals.empty()) {
    header.push_back("p_on");
    columns.push_back(jp::firing_density(det, jp::PhotonArrivalPattern(arrivals), grid).values());
  } else {
    for (int k : ks) {
      header.push_back(ks.size() == 1 ? "p_on" : "p_on[k=" + std::to_string(k) + "]");
      columns.push_back(jp::firing_density_simultaneous(det, k, t0, grid).values());
    }
  }
  jp::write_csv_atomic(out, header, columns);
  return 0;
}

// Lines up delay densities sharing one lattice step on the union grid,
// zero-padding the narrower ones.
std::pair<jp::TimeGrid, std::vector<std::vector<double>>> align_delay_columns(
    const std::vector<jp::DensityOverDelay>& densities) {
  double lo = densities.front().grid().t_min();
  double hi = densities.front().grid().t_max();
  const double h = densities.front().grid().dt();
  for (const auto& d : densities) {
    lo = std::min(lo, d.grid().t_min());
    hi = std::max(hi, d.grid().t_max());
  }
  const int n = static_cast<int>(std::llround((hi - lo) / h)) + 1;
  jp::TimeGrid grid(lo, hi, n);
  std::vector<std::vector<double>> cols;
  for (const auto& d : densities) {
    std::vector<double> col(static_cast<std::size_t>(n), 0.0);
    const int shift = static_cast<int>(std::llround((d.grid().t_min() - lo) / h));
    for (int i = 0; i < d.grid().n_points(); ++i) col[static_cast<std::size_t>(i + shift)] = d.value(i);
    cols.push_back(std::move(col));
  }
  return {grid, std::move(cols)};
}

int cmd_delay(const jp::Config& cfg, const Options& opt) {
  const std::string out = required_out(cfg, opt);
  const jp::DetectorModel det_a = jp::detector_from_config(cfg, 'A');
  const jp::DetectorModel det_b = jp::detector_from_config(cfg, 'B');

  const double default_dt = std::min(det_a.jitter.stddev(), det_b.jitter.stddev()) / 200.0;
  const double dt = cfg.get_number("grid.dt", default_dt);

  const std::string chi_kind = cfg.get_string("state.chi", "simultaneous");
  auto profile_for = [&]() {
    if (chi_kind == "simultaneous") return jp::DelayProfile::simultaneous();
    return jp::DelayProfile::sampled(jp::intensity(jp::chi_from_config(cfg, dt)));
  };

  std::vector<jp::DensityOverDelay> densities;
  std::vector<std::string> labels;
  if (cfg.has("sweep.jitter_std")) {
    for (double stddev : cfg.get_number_list("sweep.jitter_std")) {
      const jp::DetectorModel a(det_a.efficiency, jitter_with_std(cfg, "detector.A", stddev),
                                det_a.dark_count_rate);
      const jp::DetectorModel b(det_b.efficiency, jitter_with_std(cfg, "detector.B", stddev),
                                det_b.dark_count_rate);
      densities.push_back(jp::delay_density_factorized(a, b, profile_for(), dt));
      labels.push_back("p[std=" + jp::format_number(stddev) + "]");
    }
  } else {
    densities.push_back(jp::delay_density_factorized(det_a, det_b, profile_for(), dt));
    labels.push_back("p");
  }

  auto [grid, cols] = align_delay_columns(densities);
  std::vector<std::string> header{"delta"};
  std::vector<std::vector<double>> columns;
  columns.emplace_back();
  for (int i = 0; i < grid.n_points(); ++i) columns.back().push_back(grid.t(i));
  for (std::size_t c = 0; c < cols.size(); ++c) {
    header.push_back(labels[c]);
    columns.push_back(std::move(cols[c]));
  }
  jp::write_csv_atomic(out, header, columns);
  return 0;
}

int cmd_herald(const jp::Config& cfg, const Options& opt) {
  const std::string out = required_out(cfg, opt);
  const jp::DetectorModel det_b = jp::detector_from_config(cfg, 'B');
  const double width_hint = cfg.get_number("state.width", 1.0);
  const jp::TemporalAmplitude psi = jp::wavepacket_from_config(cfg, cfg.get_number("grid.dt", width_hint / 2000.0));

  const std::string herald_key = cfg.get_string("run.herald_time", "auto");
  auto herald_time = [&](const jp::JitterDistribution& jitter) {
    // "auto" heralds at the detector's mean delay past the packet center
    if (herald_key == "auto") return cfg.get_number("state.center", 0.0) + jitter.mean();
    return cfg.get_number("run.herald_time");
  };

  std::vector<std::string> header{"t"};
  std::vector<std::vector<double>> columns;
  columns.emplace_back();
  for (int i = 0; i < psi.grid().n_points(); ++i) columns.back().push_back(psi.grid().t(i));

  if (cfg.has("sweep.jitter_std")) {
    for (double stddev : cfg.get_number_list("sweep.jitter_std")) {
      const jp::DetectorModel det(det_b.efficiency, jitter_with_std(cfg, "detector.B", stddev),
                                  det_b.dark_count_rate);
      header.push_back("w[std=" + jp::format_number(stddev) + "]");
      columns.push_back(jp::heralded_state(det, psi, herald_time(det.jitter)).weights);
    }
  } else {
    header.push_back("w");
    columns.push_back(jp::heralded_state(det_b, psi, herald_time(det_b.jitter)).weights);
  }
  jp::write_csv_atomic(out, header, columns);
  return 0;
}

struct OracleCheck {
  std::string name;
  double ks;
  double ks_limit;
  double frac_dev;
  double frac_tol;
  std::uint64_t n_eff;
  std::uint64_t seed;
  bool pass() const { return ks < ks_limit && frac_dev <= frac_tol; }
};

int cmd_oracle_check(const jp::Config& cfg, const Options& opt) {
  const std::uint64_t trials = run_trials(cfg, opt);
  if (trials < 10000) throw jp::ConfigError(cfg.name(), cfg.line_of("run.trials"), "oracle-check needs trials >= 10000");
  const std::uint64_t seed = run_seed(cfg, opt);
  const int threads = run_threads(cfg, opt);
  const int bins = static_cast<int>(cfg.get_int("run.bins", 400));

  const jp::DetectorModel det_a = jp::detector_from_config(cfg, 'A');
  const jp::DetectorModel det_b = jp::detector_from_config(cfg, 'B');
  // Self-test knob: scales the efficiency the simulator uses on arm B while
  // the analytic reference keeps the configured value, so a deliberate
  // mismatch must trip the checks.
  const double sim_scale_b = cfg.get_number("run.selftest_efficiency_scale_b", 1.0);
  const jp::DetectorModel det_b_sim(std::min(1.0, det_b.efficiency * sim_scale_b), det_b.jitter,
                                    det_b.dark_count_rate);

  auto check_seed = [&](int index) {
    return seed + 0x9E3779B97F4A7C15ull * static_cast<std::uint64_t>(index + 1);
  };
  auto binom_tol = [&](double p) {
    return 5.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / static_cast<double>(trials));
  };

  std::vector<OracleCheck> checks;

  // Firing times for k simultaneous photons.
  const double q_a = det_a.jitter.upper_support();
  const jp::TimeGrid firing_grid = jp::TimeGrid::with_spacing(0.0, q_a, cfg.get_number("grid.dt", q_a / 4000.0));
  for (int k : {1, 2, 5}) {
    const std::uint64_t s = check_seed(static_cast<int>(checks.size()));
    const jp::ClickHistogram hist = jp::simulate_firing(det_a, jp::PhotonArrivalPattern(k, 0.0),
                                                        {0.0, q_a, bins}, trials, s, threads);
    const jp::DensityOverTime analytic = jp::firing_density_simultaneous(det_a, k, 0.0, firing_grid);
    const double p_click = 1.0 - std::pow(1.0 - det_a.efficiency, k);
    const double frac = static_cast<double>(hist.n_clicks()) / static_cast<double>(trials);
    checks.push_back({"firing_k" + std::to_string(k), jp::ks_distance(hist, analytic), jp::ks_bound(hist.n_clicks()),
                      std::abs(frac - p_click), binom_tol(p_click), hist.n_clicks(), s});
  }

  // Start-stop delay for a simultaneous pair (emission time cancels).
  {
    const std::uint64_t s = check_seed(static_cast<int>(checks.size()));
    const double dt = cfg.get_number("grid.dt", std::min(det_a.jitter.stddev(), det_b.jitter.stddev()) / 200.0);
    const jp::DensityOverDelay analytic =
        jp::delay_density_factorized(det_a, det_b, jp::DelayProfile::simultaneous(), dt);
    jp::PairSampler pairs = [](jp::RandomStream&) { return std::make_pair(0.0, 0.0); };
    const jp::ClickHistogram hist =
        jp::simulate_pair_delays(det_a, det_b_sim, pairs, {analytic.grid().t_min(), analytic.grid().t_max(), bins},
                                 trials, s, threads);
    const double p_both = det_a.efficiency * det_b.efficiency;
    const double frac = static_cast<double>(hist.n_clicks()) / static_cast<double>(trials);
    checks.push_back({"pair_delay", jp::ks_distance(hist, analytic), jp::ks_bound(hist.n_clicks()),
                      std::abs(frac - p_both), binom_tol(p_both), hist.n_clicks(), s});
  }

  // Heralded state conditioned on a click window around the herald time. The
  // reference curve averages the conditional over the window exactly, so the
  // comparison stays unbiased even for a wide window:
  //   w(t) \propto |psi(t)|^2 [Theta(T+w-t) - Theta(T-w-t)].
  {
    const std::uint64_t s = check_seed(static_cast<int>(checks.size()));
    const jp::TemporalAmplitude psi =
        jp::wavepacket_from_config(cfg, cfg.get_number("grid.dt", cfg.get_number("state.width", 1.0) / 2000.0));
    const double T = cfg.has("run.herald_time") && cfg.get_string("run.herald_time") != "auto"
                         ? cfg.get_number("run.herald_time")
                         : cfg.get_number("state.center", 0.0) + det_b.jitter.mean();
    const double half_window = (psi.support_max() - psi.support_min()) / 20.0;
    std::vector<double> raw(static_cast<std::size_t>(psi.grid().n_points()));
    for (int i = 0; i < psi.grid().n_points(); ++i) {
      const double t = psi.grid().t(i);
      raw[static_cast<std::size_t>(i)] =
          psi.intensity_at(t) *
          (det_b.jitter.cdf(T + half_window - t) - det_b.jitter.cdf(T - half_window - t));
    }
    const double window_mass = jp::trapezoid_mass(psi.grid(), raw);
    if (window_mass <= 0.0) throw jp::ImpossibleHeraldError("herald window has zero click probability");
    std::vector<double> normalized = raw;
    for (double& v : normalized) v /= window_mass;
    const jp::DensityOverTime analytic(psi.grid(), std::move(normalized));
    const jp::ClickHistogram hist = jp::simulate_heralded(
        det_b_sim, jp::make_sampler(psi), T - half_window, T + half_window,
        {psi.grid().t_min(), psi.grid().t_max(), bins}, trials, s, threads);
    const double p_window = det_b.efficiency * window_mass;
    const double frac = static_cast<double>(hist.n_clicks()) / static_cast<double>(trials);
    checks.push_back({"heralded", jp::ks_distance(hist, analytic), jp::ks_bound(hist.n_clicks()),
                      std::abs(frac - p_window), binom_tol(p_window), hist.n_clicks(), s});
  }

  bool all_pass = true;
  std::ostringstream report;
  report << "oracle-check seed=" << seed << " trials=" << trials << " bins=" << bins << "\n";
  std::ostringstream csv;
  csv << "check,ks,ks_bound,frac_dev,frac_tol,n_eff,seed,pass\n";
  for (const auto& c : checks) {
    all_pass = all_pass && c.pass();
    report << c.name << " ks=" << jp::format_number(c.ks) << " bound=" << jp::format_number(c.ks_limit)
           << " frac_dev=" << jp::format_number(c.frac_dev) << " frac_tol=" << jp::format_number(c.frac_tol)
           << " n_eff=" << c.n_eff << " seed=" << c.seed << (c.pass() ? " PASS" : " FAIL") << "\n";
    csv << c.name << ',' << jp::format_number(c.ks) << ',' << jp::format_number(c.ks_limit) << ','
        << jp::format_number(c.frac_dev) << ',' << jp::format_number(c.frac_tol) << ',' << c.n_eff << ',' << c.seed
        << ',' << (c.pass() ? "1" : "0") << "\n";
  }
  report << "result: " << (all_pass ? "PASS" : "FAIL") << "\n";
  std::cout << report.str() << std::flush;

  std::string out = opt.out_override.empty() ? cfg.get_string("run.out", "") : opt.out_override;
  if (!out.empty()) jp::write_text_atomic(out, csv.str());
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Timing-jitter detector model: analytic densities, coincidence delays, heralded states"};
  app.require_subcommand(1);

  Options opt;
  const std::vector<std::pair<std::string, std::string>> commands = {
      {"density", "Firing-time density CSV (T, p_on per setting)"},
      {"delay", "Start-stop delay density CSV (delta, p per setting)"},
      {"herald", "Heralded-state weights CSV (t, w per setting)"},
      {"oracle-check", "Monte Carlo vs analytic KS report"},
  };
  for (const auto& [name, description] : commands) {
    CLI::App* sub = app.add_subcommand(name, description);
    sub->add_option("--config", opt.config_path, "Scenario config file")->required();
    sub->add_option("--out", opt.out_override, "Output CSV path (overrides run.out)");
    sub->add_option("--seed", opt.seed, "Random seed (overrides run.seed)");
    sub->add_option("--trials", opt.trials, "Trial count (overrides run.trials)");
    sub->add_option("--threads", opt.threads, "Worker threads (overrides run.threads)");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    const jp::Config cfg = jp::Config::parse_file(opt.config_path);
    if (app.got_subcommand("density")) return cmd_density(cfg, opt);
    if (app.got_subcommand("delay")) return cmd_delay(cfg, opt);
    if (app.got_subcommand("herald")) return cmd_herald(cfg, opt);
    return cmd_oracle_check(cfg, opt);
  } catch (const jp::CoverageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const jp::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const jp::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
