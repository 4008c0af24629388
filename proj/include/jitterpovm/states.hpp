#pragma once

#include <complex>
#include <memory>
#include <vector>

#include "jitterpovm/density.hpp"
#include "jitterpovm/time_grid.hpp"

namespace jitterpovm {

enum class AmplitudeKind { Rectangular, Gaussian, Sampled };

/// Single-photon temporal wavepacket psi(t) with unit intensity mass.
///
/// Closed forms (rectangular, gaussian) are normalized analytically and can
/// be evaluated anywhere; sampled amplitudes are renormalized on
/// construction with the applied correction kept for inspection. Every
/// amplitude carries an evaluation grid used when a density is
/// materialized; for a rectangular shape the default grid is cell-centered
/// (support edges fall midway between samples) so the trapezoid mass is
/// exact despite the jumps.
class TemporalAmplitude {
 public:
  /// |psi|^2 = 1/width on [center - width/2, center + width/2].
  static TemporalAmplitude rectangular(double center, double width);
  static TemporalAmplitude rectangular(double center, double width, double max_dt);

  /// |psi|^2 = normal density with the given center and std.
  static TemporalAmplitude gaussian(double center, double stddev);
  static TemporalAmplitude gaussian(double center, double stddev, double max_dt);

  /// Arbitrary sampled amplitude; renormalized so the trapezoid mass of
  /// |psi|^2 is 1, with the pre-normalization mass retained.
  static TemporalAmplitude sampled(TimeGrid grid, std::vector<std::complex<double>> amplitude);

  AmplitudeKind kind() const { return kind_; }
  const TimeGrid& grid() const { return grid_; }

  std::complex<double> amplitude(double t) const;
  double intensity_at(double t) const;

  /// Support bounds: exact edges for rectangular/sampled, a 1e-8-tail
  /// window for gaussian.
  double support_min() const { return support_min_; }
  double support_max() const { return support_max_; }

  /// Trapezoid mass of |psi|^2 before renormalization (1 for closed forms).
  double raw_mass() const { return raw_mass_; }

  /// Same shape resampled/re-evaluated on another grid (must cover the
  /// support for closed forms).
  TemporalAmplitude with_grid(const TimeGrid& grid) const;

 private:
  TemporalAmplitude(AmplitudeKind kind, TimeGrid grid);

  AmplitudeKind kind_;
  TimeGrid grid_;
  double p0_ = 0.0;  // center (closed forms)
  double p1_ = 0.0;  // width or std
  std::vector<std::complex<double>> samples_;  // Sampled only
  double support_min_ = 0.0;
  double support_max_ = 0.0;
  double raw_mass_ = 1.0;
};

/// |psi(t)|^2 on the amplitude's own grid (unit mass up to quadrature).
DensityOverTime intensity(const TemporalAmplitude& psi);
DensityOverTime intensity(const TemporalAmplitude& psi, const TimeGrid& grid);

/// Two-photon joint temporal amplitude phi(t_A, t_B): either the factorized
/// pair-emission form psi(t_A) * chi(t_B - t_A) or a general sampled array.
class JointTemporalAmplitude {
 public:
  /// phi(t_A, t_B) = pair_envelope(t_A) * delay_amplitude(t_B - t_A); both
  /// factors normalized, so phi is too.
  static JointTemporalAmplitude factorized(TemporalAmplitude pair_envelope, TemporalAmplitude delay_amplitude);

  /// Sampled phi on grid_a x grid_b, row-major phi[ia * nb + ib];
  /// renormalized so the 2-D trapezoid mass of |phi|^2 is 1.
  static JointTemporalAmplitude general(TimeGrid grid_a, TimeGrid grid_b,
                                        std::vector<std::complex<double>> phi);

  bool is_factorized() const { return factorized_ != nullptr; }
  const TemporalAmplitude& pair_envelope() const;
  const TemporalAmplitude& delay_amplitude() const;

  const TimeGrid& grid_a() const;
  const TimeGrid& grid_b() const;
  std::complex<double> amplitude(double t_a, double t_b) const;
  const std::vector<std::complex<double>>& samples() const;

  /// 2-D trapezoid mass of |phi|^2 before any renormalization.
  double raw_mass() const { return raw_mass_; }

 private:
  JointTemporalAmplitude() = default;

  struct Factorized {
    TemporalAmplitude psi;
    TemporalAmplitude chi;
  };
  std::shared_ptr<const Factorized> factorized_;

  std::shared_ptr<const TimeGrid> grid_a_;
  std::shared_ptr<const TimeGrid> grid_b_;
  std::vector<std::complex<double>> samples_;
  double raw_mass_ = 1.0;

  friend JointTemporalAmplitude expand_factorized(const JointTemporalAmplitude&, const TimeGrid&, const TimeGrid&);
};

/// Samples the factorized product on the given grids. The result is left
/// unnormalized (raw_mass reports the quadrature mass, which is within
/// 1e-4 of 1 on grids resolving both factors) so that the factorized and
/// sampled evaluation paths agree pointwise. Throws CoverageError if the
/// grids miss the factors' supports.
JointTemporalAmplitude expand_factorized(const JointTemporalAmplitude& j, const TimeGrid& grid_a,
                                         const TimeGrid& grid_b);

}  // namespace jitterpovm
