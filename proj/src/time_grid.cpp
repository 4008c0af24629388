#include "jitterpovm/time_grid.hpp"

#include <algorithm>
#include <cmath>

namespace jitterpovm {

TimeGrid::TimeGrid(double t_min, double t_max, int n_points) : t_min_(t_min), t_max_(t_max), n_(n_points) {
  if (!(std::isfinite(t_min) && std::isfinite(t_max))) throw ParameterError("TimeGrid: bounds must be finite");
  if (!(t_min < t_max)) throw ParameterError("TimeGrid: t_min must be < t_max");
  if (n_points < 2) throw ParameterError("TimeGrid: n_points must be >= 2");
  dt_ = (t_max_ - t_min_) / static_cast<double>(n_ - 1);
}

bool TimeGrid::covers(double lo, double hi) const {
  const double slack = 1e-9 * (std::abs(lo) + std::abs(hi) + span());
  return t_min_ <= lo + slack && t_max_ >= hi - slack;
}

TimeGrid TimeGrid::with_spacing(double lo, double hi, double max_dt) {
  if (!(max_dt > 0)) throw ParameterError("TimeGrid::with_spacing: max_dt must be > 0");
  const int n = std::max(2, static_cast<int>(std::ceil((hi - lo) / max_dt)) + 1);
  return TimeGrid(lo, hi, n);
}

TimeGrid TimeGrid::on_lattice(double h, double offset_fraction, double lo, double hi) {
  if (!(h > 0)) throw ParameterError("TimeGrid::on_lattice: h must be > 0");
  const double eps = 1e-9;
  auto i_lo = static_cast<long long>(std::floor(lo / h - offset_fraction + eps));
  auto i_hi = static_cast<long long>(std::ceil(hi / h - offset_fraction - eps));
  if (i_hi <= i_lo) i_hi = i_lo + 1;
  const double t0 = (static_cast<double>(i_lo) + offset_fraction) * h;
  const double t1 = (static_cast<double>(i_hi) + offset_fraction) * h;
  return TimeGrid(t0, t1, static_cast<int>(i_hi - i_lo) + 1);
}

bool lattice_aligned(const TimeGrid& a, const TimeGrid& b, double rel_tol) {
  const double h = a.dt();
  if (std::abs(b.dt() - h) > rel_tol * h) return false;
  const double steps = (b.t_min() - a.t_min()) / h;
  return std::abs(steps - std::round(steps)) < 1e-6;
}

}  // namespace jitterpovm
