#include "jitterpovm/jitter.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "jitterpovm/errors.hpp"
#include "jitterpovm/normal.hpp"

namespace jitterpovm {

namespace {
constexpr double kSqrt2Pi = 2.5066282746310005024;

double clamp01(double x) { return std::min(1.0, std::max(0.0, x)); }
}  // namespace

JitterDistribution::JitterDistribution(JitterKind kind, double p0, double p1) : kind_(kind), p0_(p0), p1_(p1) {}

JitterDistribution JitterDistribution::log_normal(double mu, double sigma) {
  if (!(std::isfinite(mu)) || !(sigma > 0) || !std::isfinite(sigma))
    throw ParameterError("log_normal: sigma must be > 0 and parameters finite");
  return JitterDistribution(JitterKind::LogNormal, mu, sigma);
}

JitterDistribution JitterDistribution::log_normal_from_moments(double mean, double stddev) {
  if (!(mean > 0) || !(stddev > 0) || !std::isfinite(mean) || !std::isfinite(stddev))
    throw ParameterError("log_normal_from_moments: mean and std must be > 0");
  const double s2 = std::log1p(stddev * stddev / (mean * mean));
  const double mu = std::log(mean) - 0.5 * s2;
  return log_normal(mu, std::sqrt(s2));
}

JitterDistribution JitterDistribution::truncated_gaussian(double mean, double stddev) {
  if (!(stddev > 0) || !std::isfinite(mean) || !std::isfinite(stddev))
    throw ParameterError("truncated_gaussian: std must be > 0 and parameters finite");
  JitterDistribution d(JitterKind::TruncatedGaussian, mean, stddev);
  d.trunc_mass_ = normal_cdf(mean / stddev);
  if (!(d.trunc_mass_ > 0)) throw ParameterError("truncated_gaussian: no mass at non-negative delays");
  return d;
}

JitterDistribution JitterDistribution::rectangular(double a, double b) {
  if (!(a >= 0) || !(b > a) || !std::isfinite(b))
    throw ParameterError("rectangular: need 0 <= a < b");
  return JitterDistribution(JitterKind::Rectangular, a, b);
}

JitterDistribution JitterDistribution::near_delta(double center, double halfwidth) {
  if (!(center >= 0) || !(halfwidth > 0) || !std::isfinite(center) || !std::isfinite(halfwidth))
    throw ParameterError("near_delta: need center >= 0 and halfwidth > 0");
  const double lo = std::max(0.0, center - halfwidth);
  const double hi = center + halfwidth;
  return JitterDistribution(JitterKind::NearDelta, lo, hi);
}

double JitterDistribution::pdf(double tau) const {
  if (tau < 0) return 0.0;
  switch (kind_) {
    case JitterKind::LogNormal: {
      if (tau <= 0) return 0.0;
      const double z = (std::log(tau) - p0_) / p1_;
      return std::exp(-0.5 * z * z) / (tau * p1_ * kSqrt2Pi);
    }
    case JitterKind::TruncatedGaussian: {
      const double z = (tau - p0_) / p1_;
      return normal_pdf(z) / (p1_ * trunc_mass_);
    }
    case JitterKind::Rectangular:
    case JitterKind::NearDelta:
      return (tau >= p0_ && tau <= p1_) ? 1.0 / (p1_ - p0_) : 0.0;
  }
  return 0.0;
}

double JitterDistribution::cdf(double tau) const {
  if (tau <= 0) return 0.0;
  switch (kind_) {
    case JitterKind::LogNormal:
      return clamp01(normal_cdf((std::log(tau) - p0_) / p1_));
    case JitterKind::TruncatedGaussian:
      return clamp01((normal_cdf((tau - p0_) / p1_) - normal_cdf(-p0_ / p1_)) / trunc_mass_);
    case JitterKind::Rectangular:
    case JitterKind::NearDelta: {
      if (tau <= p0_) return 0.0;
      if (tau >= p1_) return 1.0;
      return (tau - p0_) / (p1_ - p0_);
    }
  }
  return 0.0;
}

double JitterDistribution::quantile(double p) const {
  if (!(p >= 0 && p <= 1)) throw ParameterError("quantile: p must be in [0, 1]");
  switch (kind_) {
    case JitterKind::LogNormal:
      if (p == 0) return 0.0;
      return std::exp(p0_ + p1_ * normal_quantile(p));
    case JitterKind::TruncatedGaussian: {
      if (p == 0) return 0.0;
      const double base = normal_cdf(-p0_ / p1_);
      return p0_ + p1_ * normal_quantile(std::min(1.0, base + p * trunc_mass_));
    }
    case JitterKind::Rectangular:
    case JitterKind::NearDelta:
      return p0_ + p * (p1_ - p0_);
  }
  return 0.0;
}

double JitterDistribution::mean() const {
  switch (kind_) {
    case JitterKind::LogNormal:
      return std::exp(p0_ + 0.5 * p1_ * p1_);
    case JitterKind::TruncatedGaussian:
      return p0_ + p1_ * normal_pdf(p0_ / p1_) / trunc_mass_;
    case JitterKind::Rectangular:
    case JitterKind::NearDelta:
      return 0.5 * (p0_ + p1_);
  }
  return 0.0;
}

double JitterDistribution::stddev() const {
  switch (kind_) {
    case JitterKind::LogNormal: {
      const double s2 = p1_ * p1_;
      return std::exp(p0_ + 0.5 * s2) * std::sqrt(std::expm1(s2));
    }
    case JitterKind::TruncatedGaussian: {
      const double alpha = -p0_ / p1_;
      const double lambda = normal_pdf(alpha) / trunc_mass_;
      const double var = p1_ * p1_ * (1.0 + alpha * lambda - lambda * lambda);
      return std::sqrt(std::max(0.0, var));
    }
    case JitterKind::Rectangular:
    case JitterKind::NearDelta:
      return (p1_ - p0_) / std::sqrt(12.0);
  }
  return 0.0;
}

double JitterDistribution::upper_support(double tail_mass) const {
  switch (kind_) {
    case JitterKind::LogNormal:
    case JitterKind::TruncatedGaussian:
      return quantile(1.0 - tail_mass);
    case JitterKind::Rectangular:
    case JitterKind::NearDelta:
      return p1_;
  }
  return 0.0;
}

std::string JitterDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case JitterKind::LogNormal:
      os << "log-normal(mu=" << p0_ << ", sigma=" << p1_ << ")";
      break;
    case JitterKind::TruncatedGaussian:
      os << "truncated-gaussian(mean=" << p0_ << ", std=" << p1_ << ")";
      break;
    case JitterKind::Rectangular:
      os << "rectangular(" << p0_ << ", " << p1_ << ")";
      break;
    case JitterKind::NearDelta:
      os << "near-delta[" << p0_ << ", " << p1_ << "]";
      break;
  }
  return os.str();
}

}  // namespace jitterpovm
