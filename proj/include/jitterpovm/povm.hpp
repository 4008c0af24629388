#pragma once

#include <vector>

#include "jitterpovm/density.hpp"
#include "jitterpovm/detector.hpp"
#include "jitterpovm/time_grid.hpp"

namespace jitterpovm {

/// Arrival times of k temporally localized photons. Order carries no
/// meaning: every operation is invariant under permutations.
struct PhotonArrivalPattern {
  std::vector<double> arrival_times;

  explicit PhotonArrivalPattern(std::vector<double> times);
  PhotonArrivalPattern(int k, double t) : PhotonArrivalPattern(std::vector<double>(static_cast<std::size_t>(k), t)) {}

  int k() const { return static_cast<int>(arrival_times.size()); }
  double min_time() const;
  double max_time() const;
};

/// Firing-time density of the first click for a k-photon arrival pattern:
/// each photon can be the first detected while every other one is either
/// later or never detected,
///   p(T) = sum_i eta * pdf(T - t_i) * prod_{j != i} [1 - eta * cdf(T - t_j)].
/// Dark counts are not included here; see add_dark_counts.
/// Throws DomainError for an empty pattern and CoverageError when the grid
/// does not span [min t_j, max t_j + jitter upper support].
DensityOverTime firing_density(const DetectorModel& det, const PhotonArrivalPattern& arrivals, const TimeGrid& grid);

/// Special case of k photons arriving together at time t:
///   p(T) = k * eta * pdf(T - t) * [1 - eta * cdf(T - t)]^(k-1).
DensityOverTime firing_density_simultaneous(const DetectorModel& det, int k, double t, const TimeGrid& grid);

/// Total click probability: the quadrature mass of the density. Equals
/// 1 - (1 - eta)^k for any k-photon pattern, up to quadrature error.
double on_probability(const DensityOverTime& p);

/// Click probability within [t_lo, t_hi] (clipped to the grid); the
/// complementary no-click-in-window probability is 1 minus it.
double binned_on_probability(const DensityOverTime& p, double t_lo, double t_hi);

/// Adds the detector's constant dark-count rate pointwise over the grid
/// window. Approximation: dark and photon clicks do not compete for the
/// dead time, so masses simply add.
DensityOverTime add_dark_counts(const DensityOverTime& p, const DetectorModel& det);

}  // namespace jitterpovm
