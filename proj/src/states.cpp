#include "jitterpovm/states.hpp"

#include <algorithm>
#include <cmath>

#include "jitterpovm/errors.hpp"
#include "jitterpovm/normal.hpp"

namespace jitterpovm {

namespace {

// Tail kept off-grid for gaussian supports, matching the jitter cutoff.
const double kGaussTailZ = normal_quantile(1.0 - 0.5e-8);  // two-sided 1e-8

// Cell-centered grid over [lo, hi]: samples midway between lattice points,
// one zero-valued pad sample beyond each edge.
TimeGrid cell_centered(double lo, double hi, double max_dt) {
  if (!(max_dt > 0)) throw ParameterError("TemporalAmplitude: max_dt must be > 0");
  const int cells = std::max(1, static_cast<int>(std::ceil((hi - lo) / max_dt)));
  const double h = (hi - lo) / static_cast<double>(cells);
  return TimeGrid(lo - 0.5 * h, hi + 0.5 * h, cells + 2);
}

}  // namespace

TemporalAmplitude::TemporalAmplitude(AmplitudeKind kind, TimeGrid grid) : kind_(kind), grid_(grid) {}

TemporalAmplitude TemporalAmplitude::rectangular(double center, double width) {
  return rectangular(center, width, width / 2000.0);
}

TemporalAmplitude TemporalAmplitude::rectangular(double center, double width, double max_dt) {
  if (!(width > 0) || !std::isfinite(center) || !std::isfinite(width))
    throw ParameterError("TemporalAmplitude::rectangular: width must be > 0");
  const double lo = center - 0.5 * width;
  const double hi = center + 0.5 * width;
  TemporalAmplitude a(AmplitudeKind::Rectangular, cell_centered(lo, hi, max_dt));
  a.p0_ = center;
  a.p1_ = width;
  a.support_min_ = lo;
  a.support_max_ = hi;
  return a;
}

TemporalAmplitude TemporalAmplitude::gaussian(double center, double stddev) {
  return gaussian(center, stddev, stddev / 250.0);
}

TemporalAmplitude TemporalAmplitude::gaussian(double center, double stddev, double max_dt) {
  if (!(stddev > 0) || !std::isfinite(center) || !std::isfinite(stddev))
    throw ParameterError("TemporalAmplitude::gaussian: std must be > 0");
  const double lo = center - kGaussTailZ * stddev;
  const double hi = center + kGaussTailZ * stddev;
  TemporalAmplitude a(AmplitudeKind::Gaussian, cell_centered(lo, hi, max_dt));
  a.p0_ = center;
  a.p1_ = stddev;
  a.support_min_ = lo;
  a.support_max_ = hi;
  return a;
}

TemporalAmplitude TemporalAmplitude::sampled(TimeGrid grid, std::vector<std::complex<double>> amplitude) {
  if (amplitude.size() != static_cast<std::size_t>(grid.n_points()))
    throw ParameterError("TemporalAmplitude::sampled: sample count does not match grid");
  std::vector<double> inten(amplitude.size());
  for (std::size_t i = 0; i < amplitude.size(); ++i) inten[i] = std::norm(amplitude[i]);
  const double mass = trapezoid_mass(grid, inten);
  if (!(mass > 0)) throw ParameterError("TemporalAmplitude::sampled: zero-intensity amplitude");
  const double scale = 1.0 / std::sqrt(mass);
  for (auto& z : amplitude) z *= scale;

  TemporalAmplitude a(AmplitudeKind::Sampled, grid);
  a.samples_ = std::move(amplitude);
  a.support_min_ = grid.t_min();
  a.support_max_ = grid.t_max();
  a.raw_mass_ = mass;
  return a;
}

std::complex<double> TemporalAmplitude::amplitude(double t) const {
  switch (kind_) {
    case AmplitudeKind::Rectangular:
      return (t >= support_min_ && t <= support_max_) ? std::complex<double>(1.0 / std::sqrt(p1_), 0.0)
                                                      : std::complex<double>(0.0, 0.0);
    case AmplitudeKind::Gaussian: {
      const double z = (t - p0_) / p1_;
      // |psi|^2 is the normal density, so psi is its square root.
      return {std::sqrt(normal_pdf(z) / p1_), 0.0};
    }
    case AmplitudeKind::Sampled: {
      const double x = grid_.index_of(t);
      if (x < 0.0 || x > static_cast<double>(grid_.n_points() - 1)) return {0.0, 0.0};
      const int i = std::min(grid_.n_points() - 2, static_cast<int>(x));
      const double f = x - static_cast<double>(i);
      return samples_[static_cast<std::size_t>(i)] * (1.0 - f) + samples_[static_cast<std::size_t>(i) + 1] * f;
    }
  }
  return {0.0, 0.0};
}

double TemporalAmplitude::intensity_at(double t) const { return std::norm(amplitude(t)); }

TemporalAmplitude TemporalAmplitude::with_grid(const TimeGrid& grid) const {
  if (kind_ == AmplitudeKind::Sampled) {
    std::vector<std::complex<double>> amp(static_cast<std::size_t>(grid.n_points()));
    for (int i = 0; i < grid.n_points(); ++i) amp[static_cast<std::size_t>(i)] = amplitude(grid.t(i));
    return sampled(grid, std::move(amp));
  }
  if (!grid.covers(support_min_, support_max_))
    throw CoverageError("TemporalAmplitude::with_grid: grid misses the support", support_min_, support_max_);
  TemporalAmplitude a(kind_, grid);
  a.p0_ = p0_;
  a.p1_ = p1_;
  a.support_min_ = support_min_;
  a.support_max_ = support_max_;
  return a;
}

DensityOverTime intensity(const TemporalAmplitude& psi) { return intensity(psi, psi.grid()); }

DensityOverTime intensity(const TemporalAmplitude& psi, const TimeGrid& grid) {
  std::vector<double> v(static_cast<std::size_t>(grid.n_points()));
  for (int i = 0; i < grid.n_points(); ++i) v[static_cast<std::size_t>(i)] = psi.intensity_at(grid.t(i));
  return DensityOverTime(grid, std::move(v));
}

JointTemporalAmplitude JointTemporalAmplitude::factorized(TemporalAmplitude pair_envelope,
                                                          TemporalAmplitude delay_amplitude) {
  JointTemporalAmplitude j;
  j.factorized_ = std::make_shared<const Factorized>(Factorized{std::move(pair_envelope), std::move(delay_amplitude)});
  return j;
}

JointTemporalAmplitude JointTemporalAmplitude::general(TimeGrid grid_a, TimeGrid grid_b,
                                                       std::vector<std::complex<double>> phi) {
  const std::size_t na = static_cast<std::size_t>(grid_a.n_points());
  const std::size_t nb = static_cast<std::size_t>(grid_b.n_points());
  if (phi.size() != na * nb) throw ParameterError("JointTemporalAmplitude::general: sample count does not match grids");

  // 2-D trapezoid: product of the 1-D end-point weights.
  double mass = 0.0;
  for (std::size_t ia = 0; ia < na; ++ia) {
    const double wa = (ia == 0 || ia == na - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const double wb = (ib == 0 || ib == nb - 1) ? 0.5 : 1.0;
      row += wb * std::norm(phi[ia * nb + ib]);
    }
    mass += wa * row;
  }
  mass *= grid_a.dt() * grid_b.dt();
  if (!(mass > 0)) throw ParameterError("JointTemporalAmplitude::general: zero-intensity amplitude");

  const double scale = 1.0 / std::sqrt(mass);
  for (auto& z : phi) z *= scale;

  JointTemporalAmplitude j;
  j.grid_a_ = std::make_shared<const TimeGrid>(grid_a);
  j.grid_b_ = std::make_shared<const TimeGrid>(grid_b);
  j.samples_ = std::move(phi);
  j.raw_mass_ = mass;
  return j;
}

const TemporalAmplitude& JointTemporalAmplitude::pair_envelope() const {
  if (!factorized_) throw DomainError("JointTemporalAmplitude: not factorized");
  return factorized_->psi;
}

const TemporalAmplitude& JointTemporalAmplitude::delay_amplitude() const {
  if (!factorized_) throw DomainError("JointTemporalAmplitude: not factorized");
  return factorized_->chi;
}

const TimeGrid& JointTemporalAmplitude::grid_a() const {
  if (factorized_) throw DomainError("JointTemporalAmplitude: factorized form carries factor grids, not a t_A grid");
  return *grid_a_;
}

const TimeGrid& JointTemporalAmplitude::grid_b() const {
  if (factorized_) throw DomainError("JointTemporalAmplitude: factorized form carries factor grids, not a t_B grid");
  return *grid_b_;
}

std::complex<double> JointTemporalAmplitude::amplitude(double t_a, double t_b) const {
  if (factorized_) return factorized_->psi.amplitude(t_a) * factorized_->chi.amplitude(t_b - t_a);
  const TimeGrid& ga = *grid_a_;
  const TimeGrid& gb = *grid_b_;
  const double xa = ga.index_of(t_a);
  const double xb = gb.index_of(t_b);
  if (xa < 0 || xa > ga.n_points() - 1.0 || xb < 0 || xb > gb.n_points() - 1.0) return {0.0, 0.0};
  const int ia = std::min(ga.n_points() - 2, static_cast<int>(xa));
  const int ib = std::min(gb.n_points() - 2, static_cast<int>(xb));
  const double fa = xa - ia, fb = xb - ib;
  const std::size_t nb = static_cast<std::size_t>(gb.n_points());
  auto at = [&](int i, int j) { return samples_[static_cast<std::size_t>(i) * nb + static_cast<std::size_t>(j)]; };
  return at(ia, ib) * ((1 - fa) * (1 - fb)) + at(ia + 1, ib) * (fa * (1 - fb)) + at(ia, ib + 1) * ((1 - fa) * fb) +
         at(ia + 1, ib + 1) * (fa * fb);
}

const std::vector<std::complex<double>>& JointTemporalAmplitude::samples() const {
  if (factorized_) throw DomainError("JointTemporalAmplitude: factorized form has no sample array");
  return samples_;
}

JointTemporalAmplitude expand_factorized(const JointTemporalAmplitude& j, const TimeGrid& grid_a,
                                         const TimeGrid& grid_b) {
  if (!j.is_factorized()) throw DomainError("expand_factorized: input is not factorized");
  const TemporalAmplitude& psi = j.pair_envelope();
  const TemporalAmplitude& chi = j.delay_amplitude();
  if (!grid_a.covers(psi.support_min(), psi.support_max()))
    throw CoverageError("expand_factorized: grid_a misses the pair envelope", psi.support_min(), psi.support_max());
  const double blo = psi.support_min() + chi.support_min();
  const double bhi = psi.support_max() + chi.support_max();
  if (!grid_b.covers(blo, bhi)) throw CoverageError("expand_factorized: grid_b misses the product support", blo, bhi);

  const std::size_t na = static_cast<std::size_t>(grid_a.n_points());
  const std::size_t nb = static_cast<std::size_t>(grid_b.n_points());
  std::vector<std::complex<double>> phi(na * nb);
  double mass = 0.0;
  for (std::size_t ia = 0; ia < na; ++ia) {
    const double ta = grid_a.t(static_cast<int>(ia));
    const std::complex<double> pa = psi.amplitude(ta);
    const double wa = (ia == 0 || ia == na - 1) ? 0.5 : 1.0;
    double row = 0.0;
    for (std::size_t ib = 0; ib < nb; ++ib) {
      const std::complex<double> z = pa * chi.amplitude(grid_b.t(static_cast<int>(ib)) - ta);
      phi[ia * nb + ib] = z;
      const double wb = (ib == 0 || ib == nb - 1) ? 0.5 : 1.0;
      row += wb * std::norm(z);
    }
    mass += wa * row;
  }
  mass *= grid_a.dt() * grid_b.dt();

  JointTemporalAmplitude out;
  out.grid_a_ = std::make_shared<const TimeGrid>(grid_a);
  out.grid_b_ = std::make_shared<const TimeGrid>(grid_b);
  out.samples_ = std::move(phi);
  out.raw_mass_ = mass;
  return out;
}

}  // namespace jitterpovm
