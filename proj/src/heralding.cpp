#include "jitterpovm/heralding.hpp"

#include <algorithm>
#include <cmath>

#include "jitterpovm/errors.hpp"

namespace jitterpovm {

DiagonalTemporalState heralded_state(const DetectorModel& det_b, const TemporalAmplitude& psi, double T) {
  const TimeGrid& grid = psi.grid();
  std::vector<double> w(static_cast<std::size_t>(grid.n_points()));
  for (int i = 0; i < grid.n_points(); ++i) {
    const double t = grid.t(i);
    w[static_cast<std::size_t>(i)] = det_b.jitter.pdf(T - t) * psi.intensity_at(t);
  }
  const double denom = trapezoid_mass(grid, w);
  if (!(denom > 0.0))
    throw ImpossibleHeraldError("heralded_state: a click at the requested time has zero probability density");
  for (double& v : w) v /= denom;
  return DiagonalTemporalState(DensityOverTime(grid, std::move(w)));
}

DensityOverTime herald_time_density(const DetectorModel& det_b, const TemporalAmplitude& psi) {
  const double lo = psi.support_min();
  const double hi = psi.support_max() + det_b.jitter.upper_support();
  const double dt = std::min(psi.grid().dt(), (hi - lo) / 2000.0);
  return herald_time_density(det_b, psi, TimeGrid::with_spacing(lo, hi, dt));
}

DensityOverTime herald_time_density(const DetectorModel& det_b, const TemporalAmplitude& psi, const TimeGrid& grid) {
  const TimeGrid& tg = psi.grid();
  std::vector<double> inten(static_cast<std::size_t>(tg.n_points()));
  for (int i = 0; i < tg.n_points(); ++i) inten[static_cast<std::size_t>(i)] = psi.intensity_at(tg.t(i));

  std::vector<double> p(static_cast<std::size_t>(grid.n_points()));
  const double dt = tg.dt();
  for (int n = 0; n < grid.n_points(); ++n) {
    const double T = grid.t(n);
    double acc = 0.0;
    for (int i = 0; i < tg.n_points(); ++i) {
      const double w = (i == 0 || i == tg.n_points() - 1) ? 0.5 : 1.0;
      acc += w * det_b.jitter.pdf(T - tg.t(i)) * inten[static_cast<std::size_t>(i)];
    }
    p[static_cast<std::size_t>(n)] = det_b.efficiency * acc * dt;
  }
  return DensityOverTime(grid, std::move(p));
}

SpreadStats temporal_spread(const DiagonalTemporalState& s) {
  const MomentStats m = density_moments(s.density());
  return SpreadStats{m.mean, m.stddev};
}

}  // namespace jitterpovm
