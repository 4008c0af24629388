#pragma once

#include <cmath>

#include "jitterpovm/errors.hpp"

namespace jitterpovm {

/// Uniform time grid on [t_min, t_max] with n_points samples.
///
/// Point i sits at t_min + i * dt with dt = (t_max - t_min) / (n_points - 1);
/// each point carries a single rounding, never accumulated drift.
class TimeGrid {
 public:
  TimeGrid(double t_min, double t_max, int n_points);

  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  int n_points() const { return n_; }
  double dt() const { return dt_; }
  double t(int i) const { return t_min_ + static_cast<double>(i) * dt_; }
  double span() const { return t_max_ - t_min_; }

  /// Continuous (fractional) index of time t.
  double index_of(double t) const { return (t - t_min_) / dt_; }

  /// True when [lo, hi] lies inside the grid, up to a relative slack.
  bool covers(double lo, double hi) const;

  /// Grid spanning at least [lo, hi] with spacing <= max_dt.
  static TimeGrid with_spacing(double lo, double hi, double max_dt);

  /// Grid on the lattice {(i + offset_fraction) * h} covering [lo, hi].
  /// offset_fraction 0 puts samples on multiples of h; 0.5 centers samples
  /// between them (useful when a density has jumps at lattice points).
  static TimeGrid on_lattice(double h, double offset_fraction, double lo, double hi);

 private:
  double t_min_;
  double t_max_;
  int n_;
  double dt_;
};

/// True when two grids share the same spacing and their origins differ by an
/// integer number of steps (within a small relative tolerance).
bool lattice_aligned(const TimeGrid& a, const TimeGrid& b, double rel_tol = 1e-9);

}  // namespace jitterpovm
