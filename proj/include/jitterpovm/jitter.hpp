#pragma once

#include <string>

#include "jitterpovm/philox.hpp"

namespace jitterpovm {

enum class JitterKind { LogNormal, TruncatedGaussian, Rectangular, NearDelta };

/// Detector response distribution for the random delay between photon
/// arrival and electrical output. Causal: the density vanishes for
/// negative delays, and it integrates to 1 (detection efficiency lives in
/// DetectorModel, not here). Immutable after construction.
class JitterDistribution {
 public:
  /// Log-normal with location mu and scale sigma of the underlying normal.
  static JitterDistribution log_normal(double mu, double sigma);

  /// Log-normal matching the given first two moments:
  /// sigma^2 = ln(1 + std^2/mean^2), mu = ln(mean) - sigma^2/2.
  static JitterDistribution log_normal_from_moments(double mean, double stddev);

  /// Gaussian(mean, std) restricted to non-negative delays and renormalized.
  static JitterDistribution truncated_gaussian(double mean, double stddev);

  /// Uniform on [a, b], 0 <= a < b.
  static JitterDistribution rectangular(double a, double b);

  /// Narrow uniform on [center - halfwidth, center + halfwidth], clipped to
  /// non-negative delays and renormalized. Stands in for a Dirac response;
  /// the exact delta appears only as the halfwidth -> 0 limit.
  static JitterDistribution near_delta(double center, double halfwidth);

  JitterKind kind() const { return kind_; }

  double pdf(double tau) const;
  double cdf(double tau) const;

  /// Inverse cdf; p in [0, 1].
  double quantile(double p) const;

  /// Inverse-transform draw; consumes exactly one uniform from the stream.
  double sample(RandomStream& stream) const { return quantile(stream.next_double()); }

  double mean() const;
  double stddev() const;

  /// Largest delay kept on bounded grids: the (1 - tail_mass) quantile.
  /// The mass beyond it (tail_mass at most) is dropped by grid-based
  /// integrals; bounded-support kinds return their exact upper edge.
  double upper_support(double tail_mass = 1e-8) const;

  std::string describe() const;

 private:
  JitterDistribution(JitterKind kind, double p0, double p1);

  JitterKind kind_;
  // LogNormal: p0 = mu, p1 = sigma.  TruncatedGaussian: p0 = mean, p1 = std.
  // Rectangular / NearDelta: p0, p1 = support edges after clipping.
  double p0_;
  double p1_;
  double trunc_mass_ = 1.0;  // TruncatedGaussian: Phi(mean/std)
};

}  // namespace jitterpovm
