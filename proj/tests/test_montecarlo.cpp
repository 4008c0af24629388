#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <vector>

#include "doctest.h"
#include "jitterpovm/errors.hpp"
#include "jitterpovm/heralding.hpp"
#include "jitterpovm/montecarlo.hpp"

using namespace jitterpovm;

namespace {

const JitterDistribution kLog = JitterDistribution::log_normal_from_moments(1.0, 0.5);

double click_fraction(const ClickHistogram& h) {
  return static_cast<double>(h.n_clicks()) / static_cast<double>(h.n_trials());
}

double five_sigma(double p, double n) { return 5.0 * std::sqrt(std::max(p * (1.0 - p), 1e-12) / n); }

}  // namespace

TEST_CASE("histogram bookkeeping: clamping, totals, merge") {
  ClickHistogram h({0.0, 1.0, 4});
  h.record(0.1);
  h.record(0.1);
  h.record(0.99);
  h.record(-7.0);   // clamped into the first bin
  h.record(42.0);   // clamped into the last bin
  h.record_no_click();
  CHECK(h.n_trials() == 6);
  CHECK(h.n_no_click() == 1);
  CHECK(h.n_clicks() == 5);
  CHECK(h.counts()[0] == 3);
  CHECK(h.counts()[3] == 2);
  std::uint64_t total = h.n_no_click();
  for (auto c : h.counts()) total += c;
  CHECK(total == h.n_trials());

  ClickHistogram other({0.0, 1.0, 4});
  other.record(0.6);
  h.merge(other);
  CHECK(h.n_trials() == 7);
  CHECK(h.counts()[2] == 1);
  ClickHistogram incompatible({0.0, 2.0, 4});
  CHECK_THROWS_AS(h.merge(incompatible), ParameterError);
  CHECK_THROWS_AS(ClickHistogram({1.0, 0.0, 4}), ParameterError);
  CHECK_THROWS_AS(ClickHistogram({0.0, 1.0, 0}), ParameterError);
  CHECK(h.edge(0) == 0.0);
  CHECK(h.edge(4) == 1.0);
  CHECK(h.bin_width() == doctest::Approx(0.25).epsilon(1e-15));
}

TEST_CASE("simulations are bit-identical across thread counts and reruns") {
  DetectorModel det{0.8, kLog, 0.0};
  PhotonArrivalPattern pat(2, 0.0);
  HistogramSpec spec{0.0, 13.0, 200};
  ClickHistogram serial = simulate_firing(det, pat, spec, 40000, 123, 1);
  ClickHistogram parallel = simulate_firing(det, pat, spec, 40000, 123, 4);
  ClickHistogram again = simulate_firing(det, pat, spec, 40000, 123, 4);
  CHECK(serial.counts() == parallel.counts());
  CHECK(serial.n_no_click() == parallel.n_no_click());
  CHECK(serial.counts() == again.counts());
  ClickHistogram reseeded = simulate_firing(det, pat, spec, 40000, 124, 4);
  CHECK(serial.counts() != reseeded.counts());
}

TEST_CASE("no-click fraction follows (1 - eta)^k") {
  HistogramSpec spec{0.0, 13.0, 200};
  const std::uint64_t n = 200000;
  DetectorModel det{0.5, kLog, 0.0};
  ClickHistogram h = simulate_firing(det, PhotonArrivalPattern(3, 0.2), spec, n, 21, 4);
  const double frac = static_cast<double>(h.n_no_click()) / static_cast<double>(n);
  CHECK(std::abs(frac - 0.125) < five_sigma(0.125, static_cast<double>(n)));

  DetectorModel off{0.0, kLog, 0.0};
  ClickHistogram none = simulate_firing(off, PhotonArrivalPattern(3, 0.2), spec, 1000, 5, 1);
  CHECK(none.n_no_click() == 1000);

  DetectorModel on{1.0, kLog, 0.0};
  ClickHistogram all = simulate_firing(on, PhotonArrivalPattern(1, 0.2), spec, 1000, 5, 1);
  CHECK(all.n_no_click() == 0);
}

TEST_CASE("first-click histogram matches the analytic density (KS)") {
  const std::uint64_t n = 400000;
  for (int k : {1, 2, 5}) {
    DetectorModel det{0.8, kLog, 0.0};
    const double hi = kLog.upper_support();
    ClickHistogram h = simulate_firing(det, PhotonArrivalPattern(k, 0.0), {0.0, hi, 400}, n, 1000 + k, 4);
    DensityOverTime analytic =
        firing_density(det, PhotonArrivalPattern(k, 0.0), TimeGrid::with_spacing(0.0, hi, hi / 20000.0));
    CHECK(ks_distance(h, analytic) < ks_bound(h.n_clicks()));
  }
}

TEST_CASE("KS power: a shifted reference is rejected loudly") {
  const std::uint64_t n = 400000;
  DetectorModel det{1.0, kLog, 0.0};
  const double hi = kLog.upper_support();
  ClickHistogram h = simulate_firing(det, PhotonArrivalPattern(1, 0.0), {0.0, hi, 400}, n, 77, 4);
  DensityOverTime shifted =
      firing_density(det, PhotonArrivalPattern(1, 0.15), TimeGrid::with_spacing(0.0, hi + 0.15, hi / 20000.0));
  CHECK(ks_distance(h, shifted) > 10.0 * ks_bound(h.n_clicks()));
}

TEST_CASE("two seeds both stay within the KS bound") {
  DetectorModel det{1.0, kLog, 0.0};
  const double hi = kLog.upper_support();
  DensityOverTime analytic =
      firing_density(det, PhotonArrivalPattern(1, 0.0), TimeGrid::with_spacing(0.0, hi, hi / 20000.0));
  for (std::uint64_t seed : {11ull, 1234567ull}) {
    ClickHistogram h = simulate_firing(det, PhotonArrivalPattern(1, 0.0), {0.0, hi, 400}, 200000, seed, 4);
    CHECK(ks_distance(h, analytic) < ks_bound(h.n_clicks()));
  }
}

TEST_CASE("pair-delay simulation matches the analytic cross-correlation") {
  DetectorModel da{0.9, JitterDistribution::log_normal_from_moments(1.0, 0.25), 0.0};
  DetectorModel db{0.8, kLog, 0.0};
  TemporalAmplitude psi = TemporalAmplitude::rectangular(0.0, 1.0, 0.002);
  const std::uint64_t n = 400000;
  ClickHistogram h =
      simulate_pair_delays(da, db, simultaneous_pair_sampler(psi), {-2.0, 3.0, 400}, n, 31, 4);
  // Both-click fraction.
  CHECK(std::abs(click_fraction(h) - 0.72) < five_sigma(0.72, static_cast<double>(n)));
  // Shape against the lattice pipeline.
  DensityOverDelay analytic = delay_density_factorized(da, db, DelayProfile::simultaneous(), 0.00125);
  CHECK(ks_distance(h, analytic) < ks_bound(h.n_clicks()));
}

TEST_CASE("factorized pair sampler includes the emission delay") {
  DetectorModel nd{1.0, JitterDistribution::near_delta(0.2, 0.0005), 0.0};
  TemporalAmplitude psi = TemporalAmplitude::rectangular(0.0, 1.0, 0.001);
  TemporalAmplitude chi = TemporalAmplitude::rectangular(0.3, 0.1, 0.001);
  ClickHistogram h =
      simulate_pair_delays(nd, nd, factorized_pair_sampler(psi, chi), {-1.0, 1.0, 400}, 100000, 41, 4);
  // Delay = chi draw (jitters cancel): uniform on [0.25, 0.35].
  DensityOverTime analytic = intensity(chi);
  CHECK(ks_distance(h, analytic) < ks_bound(h.n_clicks()));
}

TEST_CASE("heralded simulation reproduces the conditional state") {
  DetectorModel det{0.8, kLog, 0.0};
  TemporalAmplitude psi = TemporalAmplitude::rectangular(0.0, 1.0, 0.001);
  const double T = 1.0;
  DiagonalTemporalState s = heralded_state(det, psi, T);
  const std::uint64_t n = 2000000;
  for (double w : {0.02, 0.01}) {
    ClickHistogram h = simulate_heralded(det, make_sampler(psi), T - w, T + w,
                                         {psi.grid().t_min(), psi.grid().t_max(), 200}, n, 51, 4);
    CHECK(ks_distance(h, s.density()) < ks_bound(h.n_clicks()));
  }
}

TEST_CASE("empty conditioning reports the statistics failure") {
  DetectorModel det{0.8, kLog, 0.0};
  TemporalAmplitude psi = TemporalAmplitude::rectangular(0.0, 1.0, 0.001);
  // A window no click can reach (before any possible herald).
  try {
    simulate_heralded(det, make_sampler(psi), -40.0, -39.0, {-0.6, 0.6, 50}, 2000, 3, 2);
    CHECK(false);
  } catch (const InsufficientStatisticsError& e) {
    CHECK(e.n_trials == 2000);
    CHECK(e.n_conditioned == 0);
  }
  CHECK_THROWS_AS(simulate_heralded(det, make_sampler(psi), 1.0, 0.5, {-0.6, 0.6, 50}, 100, 3, 1),
                  ParameterError);
  CHECK_THROWS_AS(simulate_firing(det, PhotonArrivalPattern(1, 0.0), {0.0, 13.0, 100}, 0, 1, 1), ParameterError);
}

TEST_CASE("sampled-density sampler inverts the piecewise-linear cdf") {
  // Triangle density on [0, 2] built from samples.
  TimeGrid g(0.0, 2.0, 201);
  std::vector<double> v(201);
  for (int i = 0; i < 201; ++i) v[static_cast<std::size_t>(i)] = 1.0 - std::abs(g.t(i) - 1.0);
  DensityOverTime tri(g, std::move(v));
  TimeSampler sampler = make_sampler(tri);
  RandomStream stream(17, 0);
  ClickHistogram h({0.0, 2.0, 100});
  const int n = 200000;
  for (int i = 0; i < n; ++i) h.record(sampler(stream));
  CHECK(ks_distance(h, tri) < ks_bound(h.n_clicks()));

  // Closed-form samplers agree with their intensities too.
  TemporalAmplitude gauss = TemporalAmplitude::gaussian(0.5, 0.2);
  TimeSampler gs = make_sampler(gauss);
  ClickHistogram hg({-0.6, 1.6, 100});
  RandomStream stream2(18, 0);
  for (int i = 0; i < n; ++i) hg.record(gs(stream2));
  CHECK(ks_distance(hg, intensity(gauss)) < ks_bound(hg.n_clicks()));
}

TEST_CASE("ks_distance rejects unusable inputs") {
  TimeGrid g(0.0, 1.0, 11);
  DensityOverTime flat(g, std::vector<double>(11, 1.0));
  ClickHistogram empty({0.0, 1.0, 10});
  CHECK_THROWS_AS(ks_distance(empty, flat), DomainError);
  ClickHistogram h({0.0, 1.0, 10});
  h.record(0.5);
  CHECK_THROWS_AS(ks_distance(h, DensityOverTime(g, std::vector<double>(11, 0.0))), DomainError);
  CHECK(ks_bound(9) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ks_bound(900) == doctest::Approx(0.1).epsilon(1e-12));
}
