#pragma once

#include <vector>

#include "jitterpovm/density.hpp"
#include "jitterpovm/detector.hpp"
#include "jitterpovm/states.hpp"
#include "jitterpovm/time_grid.hpp"

namespace jitterpovm {

/// Heralded single-photon state: a classical mixture of arrival times with
/// diagonal weights w(t), nonnegative and of unit mass.
struct DiagonalTemporalState {
  TimeGrid grid;
  std::vector<double> weights;

  const DensityOverTime& density() const { return density_; }

  explicit DiagonalTemporalState(DensityOverTime d)
      : grid(d.grid()), weights(d.values()), density_(std::move(d)) {}

 private:
  DensityOverTime density_;
};

/// Conditional state on arm A given a click of the heralding detector at
/// time T, for a perfectly simultaneous photon pair with envelope psi:
///   w(t) = pdf_B(T - t) |psi(t)|^2 / integral pdf_B(T - t') |psi(t')|^2 dt'.
/// The detector efficiency cancels in the ratio. Throws
/// ImpossibleHeraldError when the denominator vanishes (a click at T cannot
/// happen for this envelope under causality).
DiagonalTemporalState heralded_state(const DetectorModel& det_b, const TemporalAmplitude& psi, double T);

/// Density of the herald click time,
///   p(T) = eta_B * integral pdf_B(T - t) |psi(t)|^2 dt,
/// with mass eta_B. The one-argument form picks a grid spanning the full
/// click support at the envelope grid's resolution.
DensityOverTime herald_time_density(const DetectorModel& det_b, const TemporalAmplitude& psi);
DensityOverTime herald_time_density(const DetectorModel& det_b, const TemporalAmplitude& psi, const TimeGrid& grid);

struct SpreadStats {
  double mean;
  double stddev;
};

/// Mean and standard deviation of the heralded arrival time.
SpreadStats temporal_spread(const DiagonalTemporalState& s);

}  // namespace jitterpovm
