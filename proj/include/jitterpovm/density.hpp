#pragma once

#include <vector>

#include "jitterpovm/time_grid.hpp"

namespace jitterpovm {

/// Nonnegative density sampled on a uniform grid, zero outside it.
///
/// The module-wide quadrature rule is the composite trapezoid on the grid;
/// mass() caches it at construction. Values are immutable afterwards.
class DensityOverTime {
 public:
  DensityOverTime(TimeGrid grid, std::vector<double> values);

  const TimeGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double value(int i) const { return values_[static_cast<std::size_t>(i)]; }

  /// Trapezoid mass over the whole grid.
  double mass() const { return mass_; }

  /// Linear interpolation between samples; 0 outside the grid.
  double value_at(double t) const;

  /// Trapezoid cumulative integral at every grid point (front() == 0).
  std::vector<double> cumulative() const;

  /// Integral of the piecewise-linear interpolant over [lo, hi], clipped to
  /// the grid; partial cells are handled exactly.
  double integral(double lo, double hi) const;

 private:
  TimeGrid grid_;
  std::vector<double> values_;
  double mass_;
};

/// Density of a click-time difference; same representation as
/// DensityOverTime, but the grid spans delays (symmetric around 0 by
/// default) instead of absolute times.
using DensityOverDelay = DensityOverTime;

/// Composite trapezoid rule over uniformly spaced samples.
double trapezoid_mass(const TimeGrid& grid, const std::vector<double>& values);

struct MomentStats {
  double mean;
  double stddev;
};

/// First two moments of the normalized density (trapezoid quadrature).
/// Throws DomainError on zero mass.
MomentStats density_moments(const DensityOverTime& p);

/// Location of the largest sample (leftmost on ties).
double density_mode(const DensityOverTime& p);

/// Full width at half maximum, crossings located by linear interpolation
/// between neighbouring samples. Throws DomainError on zero mass.
double density_fwhm(const DensityOverTime& p);

}  // namespace jitterpovm
