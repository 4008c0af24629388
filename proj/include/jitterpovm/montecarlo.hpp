#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include "jitterpovm/coincidence.hpp"
#include "jitterpovm/density.hpp"
#include "jitterpovm/detector.hpp"
#include "jitterpovm/philox.hpp"
#include "jitterpovm/povm.hpp"
#include "jitterpovm/states.hpp"

namespace jitterpovm {

struct HistogramSpec {
  double lo;
  double hi;
  int n_bins;
};

/// Uniform-bin histogram of recorded click values plus the count of trials
/// that produced no (conditioned) click. Out-of-range values are clamped
/// into the edge bins so that sum(counts) + n_no_click == n_trials always
/// holds.
class ClickHistogram {
 public:
  explicit ClickHistogram(HistogramSpec spec);

  void record(double x);
  void record_no_click();
  void merge(const ClickHistogram& other);

  const HistogramSpec& spec() const { return spec_; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t n_trials() const { return n_trials_; }
  std::uint64_t n_no_click() const { return n_no_click_; }
  std::uint64_t n_clicks() const { return n_trials_ - n_no_click_; }

  double edge(int i) const { return spec_.lo + static_cast<double>(i) * bin_width(); }
  double bin_width() const { return (spec_.hi - spec_.lo) / static_cast<double>(spec_.n_bins); }

 private:
  HistogramSpec spec_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t n_trials_ = 0;
  std::uint64_t n_no_click_ = 0;
};

/// Draws one value per call from a seeded stream.
using TimeSampler = std::function<double(RandomStream&)>;
/// Draws one (t_A, t_B) emission pair per call.
using PairSampler = std::function<std::pair<double, double>(RandomStream&)>;

/// Inverse-transform sampler for a wavepacket's |psi|^2 (closed forms invert
/// analytically, sampled ones invert the piecewise-linear cdf). Consumes
/// exactly one uniform per draw.
TimeSampler make_sampler(const TemporalAmplitude& psi);

/// Inverse-transform sampler for an arbitrary sampled density.
TimeSampler make_sampler(const DensityOverTime& density);

/// Pair emitted perfectly simultaneously: t_A = t_B ~ |psi|^2.
PairSampler simultaneous_pair_sampler(const TemporalAmplitude& psi);

/// Factorized pair: t_A ~ |psi|^2, t_B = t_A + (relative delay ~ |chi|^2).
PairSampler factorized_pair_sampler(const TemporalAmplitude& psi, const TemporalAmplitude& chi);

/// Event-level firing simulation: per trial every photon of the pattern is
/// detected with probability eta, detected photons get an independent
/// jitter delay, and the earliest click (if any) is recorded. Trial i draws
/// from substream i of the seed, so results are bit-identical for any
/// n_threads.
ClickHistogram simulate_firing(const DetectorModel& det, const PhotonArrivalPattern& arrivals,
                               const HistogramSpec& spec, std::uint64_t n_trials, std::uint64_t seed,
                               int n_threads = 1);

/// Start-stop delay simulation: records T_B - T_A for trials where both
/// photons click; everything else counts as no-click.
ClickHistogram simulate_pair_delays(const DetectorModel& det_a, const DetectorModel& det_b,
                                    const PairSampler& pairs, const HistogramSpec& spec, std::uint64_t n_trials,
                                    std::uint64_t seed, int n_threads = 1);

/// Heralded-state simulation for a simultaneous pair: records the emission
/// time t of trials whose herald click lands inside [window_lo, window_hi].
/// Throws InsufficientStatisticsError when no trial is conditioned.
ClickHistogram simulate_heralded(const DetectorModel& det_b, const TimeSampler& psi_sampler, double window_lo,
                                 double window_hi, const HistogramSpec& spec, std::uint64_t n_trials,
                                 std::uint64_t seed, int n_threads = 1);

/// Kolmogorov-Smirnov distance between the click-conditioned empirical cdf
/// (evaluated at the bin edges) and the normalized analytic cdf.
double ks_distance(const ClickHistogram& hist, const DensityOverTime& density);

/// Acceptance bound for a KS comparison with n_effective recorded clicks.
double ks_bound(std::uint64_t n_effective);

}  // namespace jitterpovm
