#include "jitterpovm/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <thread>

#include "jitterpovm/errors.hpp"
#include "jitterpovm/normal.hpp"

namespace jitterpovm {

ClickHistogram::ClickHistogram(HistogramSpec spec) : spec_(spec) {
  if (!(spec_.lo < spec_.hi)) throw ParameterError("ClickHistogram: need lo < hi");
  if (spec_.n_bins < 1) throw ParameterError("ClickHistogram: need at least one bin");
  counts_.assign(static_cast<std::size_t>(spec_.n_bins), 0);
}

void ClickHistogram::record(double x) {
  int bin = static_cast<int>((x - spec_.lo) / bin_width());
  bin = std::min(spec_.n_bins - 1, std::max(0, bin));
  ++counts_[static_cast<std::size_t>(bin)];
  ++n_trials_;
}

void ClickHistogram::record_no_click() {
  ++n_no_click_;
  ++n_trials_;
}

void ClickHistogram::merge(const ClickHistogram& other) {
  if (other.spec_.lo != spec_.lo || other.spec_.hi != spec_.hi || other.spec_.n_bins != spec_.n_bins)
    throw ParameterError("ClickHistogram::merge: bin layouts differ");
  for (std::size_t i = 0; i < counts_.size(); ++i) counts_[i] += other.counts_[i];
  n_trials_ += other.n_trials_;
  n_no_click_ += other.n_no_click_;
}

TimeSampler make_sampler(const TemporalAmplitude& psi) {
  switch (psi.kind()) {
    case AmplitudeKind::Rectangular: {
      const double lo = psi.support_min();
      const double width = psi.support_max() - psi.support_min();
      return [lo, width](RandomStream& s) { return lo + width * s.next_double(); };
    }
    case AmplitudeKind::Gaussian: {
      const double center = 0.5 * (psi.support_min() + psi.support_max());
      const double stddev = (psi.support_max() - center) / normal_quantile(1.0 - 0.5e-8);
      return [center, stddev](RandomStream& s) { return center + stddev * normal_quantile(s.next_double()); };
    }
    case AmplitudeKind::Sampled:
      return make_sampler(intensity(psi));
  }
  throw ParameterError("make_sampler: unknown amplitude kind");
}

TimeSampler make_sampler(const DensityOverTime& density) {
  if (!(density.mass() > 0)) throw DomainError("make_sampler: zero-mass density");
  auto grid = std::make_shared<TimeGrid>(density.grid());
  auto values = std::make_shared<std::vector<double>>(density.values());
  auto cum = std::make_shared<std::vector<double>>(density.cumulative());
  const double total = cum->back();
  return [grid, values, cum, total](RandomStream& s) {
    const double target = s.next_double() * total;
    const auto it = std::upper_bound(cum->begin(), cum->end(), target);
    const std::size_t i = std::min(cum->size() - 2, static_cast<std::size_t>(std::max<std::ptrdiff_t>(
                                                        0, (it - cum->begin()) - 1)));
    const double rest = target - (*cum)[i];
    const double h = grid->dt();
    const double a = (*values)[i];
    const double b = (*values)[i + 1];
    // within the cell the density is linear, so the cell cdf is quadratic
    double frac;
    if (std::abs(b - a) * h < 1e-14 * (a + b + 1e-300)) {
      frac = (a > 0) ? rest / (a * h) : 0.5;
    } else {
      const double disc = std::max(0.0, a * a + 2.0 * (b - a) * rest / h);
      frac = (std::sqrt(disc) - a) / (b - a);
    }
    frac = std::min(1.0, std::max(0.0, frac));
    return grid->t(static_cast<int>(i)) + frac * h;
  };
}

PairSampler simultaneous_pair_sampler(const TemporalAmplitude& psi) {
  TimeSampler s = make_sampler(psi);
  return [s](RandomStream& rng) {
    const double t = s(rng);
    return std::make_pair(t, t);
  };
}

PairSampler factorized_pair_sampler(const TemporalAmplitude& psi, const TemporalAmplitude& chi) {
  TimeSampler sp = make_sampler(psi);
  TimeSampler sc = make_sampler(chi);
  return [sp, sc](RandomStream& rng) {
    const double t = sp(rng);
    return std::make_pair(t, t + sc(rng));
  };
}

namespace {

// Runs `trial(stream, histogram)` for every trial index, partitioned over
// n_threads. Trial i always draws from substream i of the seed and local
// histograms merge in thread order, so the result is independent of
// n_threads.
template <typename TrialFn>
ClickHistogram run_trials(const HistogramSpec& spec, std::uint64_t n_trials, std::uint64_t seed, int n_threads,
                          const TrialFn& trial) {
  if (n_trials < 1) throw ParameterError("simulation: need at least one trial");
  n_threads = std::max(1, n_threads);
  const std::uint64_t workers = std::min<std::uint64_t>(static_cast<std::uint64_t>(n_threads), n_trials);

  std::vector<ClickHistogram> parts(static_cast<std::size_t>(workers), ClickHistogram(spec));
  auto run_range = [&](std::size_t w, std::uint64_t begin, std::uint64_t end) {
    ClickHistogram& h = parts[w];
    for (std::uint64_t i = begin; i < end; ++i) {
      RandomStream stream(seed, i);
      trial(stream, h);
    }
  };

  if (workers == 1) {
    run_range(0, 0, n_trials);
  } else {
    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (std::uint64_t w = 0; w < workers; ++w) {
      const std::uint64_t begin = n_trials * w / workers;
      const std::uint64_t end = n_trials * (w + 1) / workers;
      threads.emplace_back(run_range, static_cast<std::size_t>(w), begin, end);
    }
    for (auto& t : threads) t.join();
  }

  ClickHistogram total(spec);
  for (const auto& part : parts) total.merge(part);
  return total;
}

}  // namespace

ClickHistogram simulate_firing(const DetectorModel& det, const PhotonArrivalPattern& arrivals,
                               const HistogramSpec& spec, std::uint64_t n_trials, std::uint64_t seed,
                               int n_threads) {
  if (arrivals.k() == 0) throw DomainError("simulate_firing: empty arrival pattern");
  return run_trials(spec, n_trials, seed, n_threads, [&](RandomStream& s, ClickHistogram& h) {
    double first = std::numeric_limits<double>::infinity();
    bool clicked = false;
    for (double t : arrivals.arrival_times) {
      if (s.next_double() < det.efficiency) {
        const double click = t + det.jitter.sample(s);
        first = std::min(first, click);
        clicked = true;
      }
    }
    if (clicked)
      h.record(first);
    else
      h.record_no_click();
  });
}

ClickHistogram simulate_pair_delays(const DetectorModel& det_a, const DetectorModel& det_b,
                                    const PairSampler& pairs, const HistogramSpec& spec, std::uint64_t n_trials,
                                    std::uint64_t seed, int n_threads) {
  return run_trials(spec, n_trials, seed, n_threads, [&](RandomStream& s, ClickHistogram& h) {
    const auto [t_a, t_b] = pairs(s);
    if (s.next_double() >= det_a.efficiency) return h.record_no_click();
    const double click_a = t_a + det_a.jitter.sample(s);
    if (s.next_double() >= det_b.efficiency) return h.record_no_click();
    const double click_b = t_b + det_b.jitter.sample(s);
    h.record(click_b - click_a);
  });
}

ClickHistogram simulate_heralded(const DetectorModel& det_b, const TimeSampler& psi_sampler, double window_lo,
                                 double window_hi, const HistogramSpec& spec, std::uint64_t n_trials,
                                 std::uint64_t seed, int n_threads) {
  if (!(window_lo < window_hi)) throw ParameterError("simulate_heralded: need window_lo < window_hi");
  ClickHistogram h = run_trials(spec, n_trials, seed, n_threads, [&](RandomStream& s, ClickHistogram& hist) {
    const double t = psi_sampler(s);
    if (s.next_double() < det_b.efficiency) {
      const double T = t + det_b.jitter.sample(s);
      if (T >= window_lo && T <= window_hi) return hist.record(t);
    }
    hist.record_no_click();
  });
  if (h.n_clicks() == 0)
    throw InsufficientStatisticsError("simulate_heralded: no trial fell in the herald window", h.n_trials(), 0);
  return h;
}

double ks_distance(const ClickHistogram& hist, const DensityOverTime& density) {
  if (hist.n_clicks() == 0) throw DomainError("ks_distance: empty histogram");
  if (!(density.mass() > 0)) throw DomainError("ks_distance: zero-mass density");

  const TimeGrid& g = density.grid();
  const std::vector<double> cum = density.cumulative();
  const double total = cum.back();
  auto analytic_cdf = [&](double x) {
    if (x <= g.t_min()) return 0.0;
    if (x >= g.t_max()) return 1.0;
    const double idx = g.index_of(x);
    const int i = std::min(g.n_points() - 2, std::max(0, static_cast<int>(idx)));
    const double f = idx - static_cast<double>(i);
    const double a = density.value(i);
    const double b = density.value(i + 1);
    const double partial = (a + 0.5 * f * (b - a)) * f * g.dt();
    return (cum[static_cast<std::size_t>(i)] + partial) / total;
  };

  const double n = static_cast<double>(hist.n_clicks());
  double running = 0.0;
  double worst = std::abs(analytic_cdf(hist.edge(0)));
  for (int b = 0; b < hist.spec().n_bins; ++b) {
    running += static_cast<double>(hist.counts()[static_cast<std::size_t>(b)]);
    worst = std::max(worst, std::abs(running / n - analytic_cdf(hist.edge(b + 1))));
  }
  return worst;
}

double ks_bound(std::uint64_t n_effective) { return 3.0 / std::sqrt(static_cast<double>(n_effective)); }

}  // namespace jitterpovm
