#pragma once

#include <optional>
#include <vector>

#include "jitterpovm/density.hpp"
#include "jitterpovm/detector.hpp"
#include "jitterpovm/states.hpp"
#include "jitterpovm/time_grid.hpp"

namespace jitterpovm {

/// Joint density of the two click times (T_A, T_B) for one photon per arm,
/// sampled on a pair of uniform grids sharing one lattice spacing.
///
/// The 2-D integrals in this module use uniform weights h per axis (every
/// sample weighted equally) rather than trapezoid end-point halving: the
/// constructions keep boundary samples at (numerically) zero density, where
/// the two rules coincide, and uniform weights make the diagonal reduction
/// to the delay density mass-preserving exactly and the two delay-density
/// computation paths structurally identical sums.
struct JointFiringDensity {
  TimeGrid grid_a;
  TimeGrid grid_b;
  std::vector<double> values;  // row-major values[ia * nb + ib]
  double mass;                 // uniform-weight mass dt_a * dt_b * sum

  double value(int ia, int ib) const {
    return values[static_cast<std::size_t>(ia) * static_cast<std::size_t>(grid_b.n_points()) +
                  static_cast<std::size_t>(ib)];
  }
};

/// p(T_A, T_B) = eta_A eta_B * double convolution of the two jitter
/// responses with |phi(t_A, t_B)|^2. Total mass is eta_A * eta_B up to
/// quadrature error. The output grids must share the state grids' spacing
/// (ParameterError otherwise) and cover each arm's click support
/// (CoverageError otherwise).
JointFiringDensity joint_firing_density(const DetectorModel& det_a, const DetectorModel& det_b,
                                        const JointTemporalAmplitude& phi, const TimeGrid& grid_a,
                                        const TimeGrid& grid_b);

/// Output grids that joint_firing_density accepts for this state: one per
/// arm, on the state grids' lattice, spanning the full click support.
std::pair<TimeGrid, TimeGrid> default_firing_grids(const DetectorModel& det_a, const DetectorModel& det_b,
                                                   const JointTemporalAmplitude& phi);

/// Start-stop reduction p(delta) = integral of joint(T, T + delta) dT,
/// computed as uniform-weight sums along the diagonals. Requires the two
/// grids to share the same spacing (any relative offset); mass is
/// preserved exactly.
DensityOverDelay delay_density(const JointFiringDensity& joint);

/// Relative-delay intensity |chi(t_bar)|^2 of the pair emission: either an
/// exact point mass at zero delay (perfectly simultaneous pair) or a
/// sampled density.
class DelayProfile {
 public:
  static DelayProfile simultaneous() { return DelayProfile(std::nullopt); }
  static DelayProfile sampled(DensityOverDelay chi_intensity) { return DelayProfile(std::move(chi_intensity)); }

  bool is_simultaneous() const { return !chi_.has_value(); }
  const DensityOverDelay& chi_intensity() const { return chi_.value(); }

 private:
  explicit DelayProfile(std::optional<DensityOverDelay> chi) : chi_(std::move(chi)) {}
  std::optional<DensityOverDelay> chi_;
};

/// Delay density for a factorized pair state, where the pair envelope drops
/// out:
///   p(delta) = eta_A eta_B * integral |chi(t_bar)|^2 *
///              [integral pdf_A(tau) pdf_B(tau + delta - t_bar) dtau] dt_bar.
/// For a simultaneous pair this is the cross-correlation of the two jitter
/// densities. lattice_dt sets the sampling step for the jitter tables and
/// the output (for a sampled profile it defaults to the chi grid's own
/// spacing, and must equal it when given). The output grid is extended to
/// be symmetric around zero delay.
DensityOverDelay delay_density_factorized(const DetectorModel& det_a, const DetectorModel& det_b,
                                          const DelayProfile& chi, double lattice_dt = 0.0);

struct PeakStatistics {
  double mode;
  double mean;
  double stddev;
  double fwhm;
};

/// Shape summary of a (normalized) delay peak; FWHM crossings are found by
/// linear interpolation between samples. Throws DomainError on zero mass.
PeakStatistics peak_statistics(const DensityOverDelay& p);

}  // namespace jitterpovm
