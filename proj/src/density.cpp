#include "jitterpovm/density.hpp"

#include <algorithm>
#include <cmath>

#include "jitterpovm/errors.hpp"

namespace jitterpovm {

double trapezoid_mass(const TimeGrid& grid, const std::vector<double>& values) {
  if (values.size() != static_cast<std::size_t>(grid.n_points()))
    throw ParameterError("trapezoid_mass: value count does not match grid");
  double acc = 0.0;
  for (double v : values) acc += v;
  acc -= 0.5 * (values.front() + values.back());
  return acc * grid.dt();
}

DensityOverTime::DensityOverTime(TimeGrid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), mass_(0.0) {
  if (values_.size() != static_cast<std::size_t>(grid_.n_points()))
    throw ParameterError("DensityOverTime: value count does not match grid");
  for (double v : values_) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw ParameterError("DensityOverTime: values must be finite and >= 0");
  }
  mass_ = trapezoid_mass(grid_, values_);
}

double DensityOverTime::value_at(double t) const {
  const double x = grid_.index_of(t);
  if (x < 0.0 || x > static_cast<double>(grid_.n_points() - 1)) return 0.0;
  const int i = std::min(grid_.n_points() - 2, static_cast<int>(x));
  const double f = x - static_cast<double>(i);
  return values_[static_cast<std::size_t>(i)] * (1.0 - f) + values_[static_cast<std::size_t>(i) + 1] * f;
}

std::vector<double> DensityOverTime::cumulative() const {
  std::vector<double> c(values_.size());
  c[0] = 0.0;
  const double half_dt = 0.5 * grid_.dt();
  for (std::size_t i = 1; i < values_.size(); ++i) c[i] = c[i - 1] + half_dt * (values_[i - 1] + values_[i]);
  return c;
}

double DensityOverTime::integral(double lo, double hi) const {
  if (!(lo <= hi)) throw DomainError("DensityOverTime::integral: need lo <= hi");
  lo = std::max(lo, grid_.t_min());
  hi = std::min(hi, grid_.t_max());
  if (lo >= hi) return 0.0;

  // Integral of the linear interpolant from grid.t_min to x.
  const std::vector<double> cum = cumulative();
  auto upto = [&](double x) {
    const double idx = grid_.index_of(x);
    const int i = std::min(grid_.n_points() - 2, std::max(0, static_cast<int>(idx)));
    const double f = idx - static_cast<double>(i);
    const double vi = values_[static_cast<std::size_t>(i)];
    const double vn = values_[static_cast<std::size_t>(i) + 1];
    const double vx = vi * (1.0 - f) + vn * f;
    return cum[static_cast<std::size_t>(i)] + 0.5 * (vi + vx) * (f * grid_.dt());
  };
  return upto(hi) - upto(lo);
}

MomentStats density_moments(const DensityOverTime& p) {
  const TimeGrid& g = p.grid();
  const std::vector<double>& v = p.values();
  if (!(p.mass() > 0.0)) throw DomainError("density_moments: zero-mass density");
  double m0 = 0.0, m1 = 0.0, m2 = 0.0;
  for (int i = 0; i < g.n_points(); ++i) {
    const double w = (i == 0 || i == g.n_points() - 1) ? 0.5 : 1.0;
    const double t = g.t(i);
    const double f = w * v[static_cast<std::size_t>(i)];
    m0 += f;
    m1 += f * t;
    m2 += f * t * t;
  }
  const double mean = m1 / m0;
  const double var = std::max(0.0, m2 / m0 - mean * mean);
  return {mean, std::sqrt(var)};
}

double density_mode(const DensityOverTime& p) {
  const auto& v = p.values();
  const std::size_t i = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  return p.grid().t(static_cast<int>(i));
}

double density_fwhm(const DensityOverTime& p) {
  const auto& v = p.values();
  if (!(p.mass() > 0.0)) throw DomainError("density_fwhm: zero-mass density");
  const std::size_t peak = static_cast<std::size_t>(std::max_element(v.begin(), v.end()) - v.begin());
  const double half = 0.5 * v[peak];

  auto cross = [&](std::size_t from, std::size_t to, std::ptrdiff_t step) {
    // walk from the peak outwards to the first sample below half maximum
    for (std::size_t i = from; i != to; i = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + step)) {
      const std::size_t j = static_cast<std::size_t>(static_cast<std::ptrdiff_t>(i) + step);
      if (v[j] < half) {
        const double f = (v[i] - half) / (v[i] - v[j]);
        return p.grid().t(static_cast<int>(i)) + static_cast<double>(step) * f * p.grid().dt();
      }
    }
    return static_cast<std::ptrdiff_t>(step) > 0 ? p.grid().t_max() : p.grid().t_min();
  };
  const double right = cross(peak, v.size() - 1, +1);
  const double left = cross(peak, 0, -1);
  return right - left;
}

}  // namespace jitterpovm
