#include "jitterpovm/coincidence.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "jitterpovm/errors.hpp"

namespace jitterpovm {

namespace {

constexpr double kSpacingTol = 1e-12;

double fractional_offset(const TimeGrid& g) {
  const double x = g.t_min() / g.dt();
  return x - std::floor(x);
}

double wrap_unit(double x) { return x - std::floor(x); }

void require_same_spacing(double h, const TimeGrid& g, const char* what) {
  if (std::abs(g.dt() - h) > kSpacingTol * h)
    throw ParameterError(std::string(what) + ": grid spacing must match the state grids' spacing");
}

// Jitter response sampled on the half-offset lattice {(n + 1/2) h} over its
// support, with one zero pad sample past each edge. Sampling mid-cell keeps
// the support edges (and the jump at tau = 0 of a truncated response)
// between samples, so the uniform-weight mass is exact for aligned
// rectangular supports and O(h^2) otherwise.
struct JitterTable {
  TimeGrid grid;
  std::vector<double> values;
  double uniform_mass;
};

JitterTable make_jitter_table(const JitterDistribution& jitter, double h) {
  const double lo = jitter.quantile(0.0);
  const double hi = jitter.upper_support();
  TimeGrid grid = TimeGrid::on_lattice(h, 0.5, lo - 0.5 * h, hi + 0.5 * h);
  std::vector<double> v(static_cast<std::size_t>(grid.n_points()));
  double sum = 0.0;
  for (int n = 0; n < grid.n_points(); ++n) {
    v[static_cast<std::size_t>(n)] = jitter.pdf(grid.t(n));
    sum += v[static_cast<std::size_t>(n)];
  }
  JitterTable table{grid, std::move(v), sum * h};
  if (!(table.uniform_mass > 0.5))
    throw ParameterError("jitter table: lattice step too coarse for " + jitter.describe() +
                         "; choose a spacing resolving its support");
  return table;
}

// Correlation of two sampled tables: out[d] = h * sum_n a[n] * b[n + d - (na-1)],
// i.e. the density of (position in b) - (position in a). Grid bounds follow
// from the input grids; summation order is fixed (ascending n).
std::pair<TimeGrid, std::vector<double>> correlate_tables(const TimeGrid& ga, const std::vector<double>& a,
                                                          const TimeGrid& gb, const std::vector<double>& b) {
  const int na = ga.n_points();
  const int nb = gb.n_points();
  const double h = ga.dt();
  TimeGrid grid(gb.t_min() - ga.t_max(), gb.t_max() - ga.t_min(), na + nb - 1);
  std::vector<double> out(static_cast<std::size_t>(na + nb - 1), 0.0);
  for (int d = 0; d < na + nb - 1; ++d) {
    const int shift = d - (na - 1);
    const int n_lo = std::max(0, -shift);
    const int n_hi = std::min(na - 1, nb - 1 - shift);
    double acc = 0.0;
    for (int n = n_lo; n <= n_hi; ++n)
      acc += a[static_cast<std::size_t>(n)] * b[static_cast<std::size_t>(n + shift)];
    out[static_cast<std::size_t>(d)] = acc * h;
  }
  return {grid, std::move(out)};
}

// Zero-pads a lattice-sampled density so its grid is symmetric around 0.
std::pair<TimeGrid, std::vector<double>> pad_symmetric(const TimeGrid& g, std::vector<double> v) {
  const double h = g.dt();
  int pad_left = 0, pad_right = 0;
  double lo = g.t_min(), hi = g.t_max();
  if (-g.t_min() > g.t_max()) {
    pad_right = static_cast<int>(std::llround((-g.t_min() - g.t_max()) / h));
    hi = -g.t_min();
  } else if (-g.t_max() < g.t_min()) {
    pad_left = static_cast<int>(std::llround((g.t_min() + g.t_max()) / h));
    lo = -g.t_max();
  }
  if (pad_left == 0 && pad_right == 0) return {g, std::move(v)};
  std::vector<double> out(static_cast<std::size_t>(g.n_points() + pad_left + pad_right), 0.0);
  std::copy(v.begin(), v.end(), out.begin() + pad_left);
  return {TimeGrid(lo, hi, static_cast<int>(out.size())), std::move(out)};
}

}  // namespace

JointFiringDensity joint_firing_density(const DetectorModel& det_a, const DetectorModel& det_b,
                                        const JointTemporalAmplitude& phi, const TimeGrid& grid_a,
                                        const TimeGrid& grid_b) {
  // Emission-time grids and the sampled joint intensity |phi|^2.
  TimeGrid ta = phi.is_factorized() ? phi.pair_envelope().grid() : phi.grid_a();
  const double h = ta.dt();
  TimeGrid tb = [&] {
    if (!phi.is_factorized()) {
      require_same_spacing(h, phi.grid_b(), "joint_firing_density(t_B grid)");
      return phi.grid_b();
    }
    const TemporalAmplitude& psi = phi.pair_envelope();
    const TemporalAmplitude& chi = phi.delay_amplitude();
    require_same_spacing(h, chi.grid(), "joint_firing_density(chi grid)");
    const double frac = wrap_unit(fractional_offset(psi.grid()) + fractional_offset(chi.grid()));
    return TimeGrid::on_lattice(h, frac, psi.support_min() + chi.support_min(),
                                psi.support_max() + chi.support_max());
  }();
  require_same_spacing(h, grid_a, "joint_firing_density(grid_a)");
  require_same_spacing(h, grid_b, "joint_firing_density(grid_b)");

  const double qa = det_a.jitter.upper_support();
  const double qb = det_b.jitter.upper_support();
  if (!grid_a.covers(ta.t_min(), ta.t_max() + qa))
    throw CoverageError("joint_firing_density: grid_a misses the click support", ta.t_min(), ta.t_max() + qa);
  if (!grid_b.covers(tb.t_min(), tb.t_max() + qb))
    throw CoverageError("joint_firing_density: grid_b misses the click support", tb.t_min(), tb.t_max() + qb);

  const std::size_t n_ta = static_cast<std::size_t>(ta.n_points());
  const std::size_t n_tb = static_cast<std::size_t>(tb.n_points());
  const std::size_t n_ga = static_cast<std::size_t>(grid_a.n_points());
  const std::size_t n_gb = static_cast<std::size_t>(grid_b.n_points());

  std::vector<double> intensity2(n_ta * n_tb);
  if (phi.is_factorized()) {
    const TemporalAmplitude& psi = phi.pair_envelope();
    const TemporalAmplitude& chi = phi.delay_amplitude();
    for (std::size_t ia = 0; ia < n_ta; ++ia) {
      const double t_a = ta.t(static_cast<int>(ia));
      const double pa = psi.intensity_at(t_a);
      for (std::size_t ib = 0; ib < n_tb; ++ib)
        intensity2[ia * n_tb + ib] = pa * chi.intensity_at(tb.t(static_cast<int>(ib)) - t_a);
    }
  } else {
    const auto& samples = phi.samples();
    for (std::size_t i = 0; i < samples.size(); ++i) intensity2[i] = std::norm(samples[i]);
  }

  // Jitter lookup tables, indexed by the (integer) lattice distance between
  // an output point and an emission point.
  auto build_response = [&](const TimeGrid& out, const TimeGrid& in, const JitterDistribution& jitter) {
    const double base = out.t_min() - in.t_min();
    const std::size_t n = static_cast<std::size_t>(out.n_points()) + static_cast<std::size_t>(in.n_points()) - 1;
    std::vector<double> tab(n);
    const int origin = in.n_points() - 1;
    for (std::size_t r = 0; r < n; ++r)
      tab[r] = jitter.pdf(base + static_cast<double>(static_cast<int>(r) - origin) * h);
    return tab;
  };
  const std::vector<double> tab_a = build_response(grid_a, ta, det_a.jitter);
  const std::vector<double> tab_b = build_response(grid_b, tb, det_b.jitter);
  const int origin_a = static_cast<int>(n_ta) - 1;
  const int origin_b = static_cast<int>(n_tb) - 1;

  // Stage 1: convolve over t_B for each emission time t_A.
  std::vector<double> stage(n_ta * n_gb, 0.0);
  for (std::size_t ia = 0; ia < n_ta; ++ia) {
    double* row = stage.data() + ia * n_gb;
    const double* i2 = intensity2.data() + ia * n_tb;
    for (std::size_t ib = 0; ib < n_tb; ++ib) {
      const double coef = h * i2[ib];
      if (coef == 0.0) continue;
      const double* tb_slice = tab_b.data() + (origin_b - static_cast<int>(ib));
      for (std::size_t j = 0; j < n_gb; ++j) row[j] += coef * tb_slice[j];
    }
  }

  // Stage 2: convolve over t_A.
  const double eta2 = det_a.efficiency * det_b.efficiency;
  std::vector<double> joint(n_ga * n_gb, 0.0);
  for (std::size_t ia = 0; ia < n_ta; ++ia) {
    const double* row = stage.data() + ia * n_gb;
    for (std::size_t i = 0; i < n_ga; ++i) {
      const int idx = static_cast<int>(i) - static_cast<int>(ia) + origin_a;
      const double coef = eta2 * h * tab_a[static_cast<std::size_t>(idx)];
      if (coef == 0.0) continue;
      double* out = joint.data() + i * n_gb;
      for (std::size_t j = 0; j < n_gb; ++j) out[j] += coef * row[j];
    }
  }

  double sum = 0.0;
  for (double v : joint) sum += v;
  return JointFiringDensity{grid_a, grid_b, std::move(joint), sum * grid_a.dt() * grid_b.dt()};
}

std::pair<TimeGrid, TimeGrid> default_firing_grids(const DetectorModel& det_a, const DetectorModel& det_b,
                                                   const JointTemporalAmplitude& phi) {
  TimeGrid ta = phi.is_factorized() ? phi.pair_envelope().grid() : phi.grid_a();
  const double h = ta.dt();
  double b_lo, b_hi, frac_b;
  if (phi.is_factorized()) {
    const TemporalAmplitude& psi = phi.pair_envelope();
    const TemporalAmplitude& chi = phi.delay_amplitude();
    b_lo = psi.support_min() + chi.support_min();
    b_hi = psi.support_max() + chi.support_max();
    frac_b = wrap_unit(fractional_offset(psi.grid()) + fractional_offset(chi.grid()));
  } else {
    b_lo = phi.grid_b().t_min();
    b_hi = phi.grid_b().t_max();
    frac_b = fractional_offset(phi.grid_b());
  }
  // The jitter tables sit on the half-offset lattice, so click-time grids
  // sit half a step off the emission grids.
  TimeGrid grid_a =
      TimeGrid::on_lattice(h, wrap_unit(fractional_offset(ta) + 0.5), ta.t_min(), ta.t_max() + det_a.jitter.upper_support());
  TimeGrid grid_b = TimeGrid::on_lattice(h, wrap_unit(frac_b + 0.5), b_lo, b_hi + det_b.jitter.upper_support());
  return {grid_a, grid_b};
}

DensityOverDelay delay_density(const JointFiringDensity& joint) {
  // The diagonal sums only need one spacing; the two grids may sit at any
  // relative offset (the default grids are deliberately half a step apart).
  require_same_spacing(joint.grid_a.dt(), joint.grid_b, "delay_density");
  const int na = joint.grid_a.n_points();
  const int nb = joint.grid_b.n_points();
  const double h = joint.grid_a.dt();
  TimeGrid grid(joint.grid_b.t_min() - joint.grid_a.t_max(), joint.grid_b.t_max() - joint.grid_a.t_min(),
                na + nb - 1);
  std::vector<double> out(static_cast<std::size_t>(na + nb - 1), 0.0);
  for (int d = 0; d < na + nb - 1; ++d) {
    const int shift = d - (na - 1);
    const int i_lo = std::max(0, -shift);
    const int i_hi = std::min(na - 1, nb - 1 - shift);
    double acc = 0.0;
    for (int i = i_lo; i <= i_hi; ++i) acc += joint.value(i, i + shift);
    out[static_cast<std::size_t>(d)] = acc * h;
  }
  return DensityOverDelay(grid, std::move(out));
}

DensityOverDelay delay_density_factorized(const DetectorModel& det_a, const DetectorModel& det_b,
                                          const DelayProfile& chi, double lattice_dt) {
  double h = lattice_dt;
  if (!chi.is_simultaneous()) {
    const double chi_dt = chi.chi_intensity().grid().dt();
    if (h == 0.0) h = chi_dt;
    if (std::abs(h - chi_dt) > kSpacingTol * chi_dt)
      throw ParameterError("delay_density_factorized: lattice_dt must match the chi grid spacing");
    const double chi_mass = chi.chi_intensity().mass();
    if (std::abs(chi_mass - 1.0) > 1e-3)
      throw ParameterError("delay_density_factorized: chi intensity must be normalized");
  }
  if (!(h > 0)) throw ParameterError("delay_density_factorized: lattice_dt must be > 0");

  const JitterTable ta = make_jitter_table(det_a.jitter, h);
  const JitterTable tb = make_jitter_table(det_b.jitter, h);
  auto [corr_grid, corr] = correlate_tables(ta.grid, ta.values, tb.grid, tb.values);

  const double eta2 = det_a.efficiency * det_b.efficiency;
  if (chi.is_simultaneous()) {
    for (double& v : corr) v *= eta2;
    auto [grid, values] = pad_symmetric(corr_grid, std::move(corr));
    return DensityOverDelay(grid, std::move(values));
  }

  const DensityOverDelay& chi2 = chi.chi_intensity();
  const int nc = chi2.grid().n_points();
  const int nr = corr_grid.n_points();
  TimeGrid grid0(chi2.grid().t_min() + corr_grid.t_min(), chi2.grid().t_max() + corr_grid.t_max(), nc + nr - 1);
  std::vector<double> out(static_cast<std::size_t>(nc + nr - 1), 0.0);
  for (int m = 0; m < nc + nr - 1; ++m) {
    const int c_lo = std::max(0, m - (nr - 1));
    const int c_hi = std::min(nc - 1, m);
    double acc = 0.0;
    for (int c = c_lo; c <= c_hi; ++c) acc += chi2.value(c) * corr[static_cast<std::size_t>(m - c)];
    out[static_cast<std::size_t>(m)] = eta2 * h * acc;
  }
  auto [grid, values] = pad_symmetric(grid0, std::move(out));
  return DensityOverDelay(grid, std::move(values));
}

PeakStatistics peak_statistics(const DensityOverDelay& p) {
  if (!(p.mass() > 0)) throw DomainError("peak_statistics: zero-mass density");
  const MomentStats m = density_moments(p);
  return PeakStatistics{density_mode(p), m.mean, m.stddev, density_fwhm(p)};
}

}  // namespace jitterpovm
