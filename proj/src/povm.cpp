#include "jitterpovm/povm.hpp"

#include <algorithm>
#include <cmath>

namespace jitterpovm {

PhotonArrivalPattern::PhotonArrivalPattern(std::vector<double> times) : arrival_times(std::move(times)) {
  for (double t : arrival_times) {
    if (!std::isfinite(t)) throw ParameterError("PhotonArrivalPattern: arrival times must be finite");
  }
}

double PhotonArrivalPattern::min_time() const {
  return *std::min_element(arrival_times.begin(), arrival_times.end());
}

double PhotonArrivalPattern::max_time() const {
  return *std::max_element(arrival_times.begin(), arrival_times.end());
}

namespace {

void require_coverage(const TimeGrid& grid, double lo, double hi, const char* op) {
  if (!grid.covers(lo, hi)) throw CoverageError(std::string(op) + ": grid does not cover the firing support", lo, hi);
}

// p(T) for one grid point. Direct products up to kMaxDirect photons; past
// that the survival products move to log space, with exact zeros (eta *
// cdf == 1) counted separately so nothing divides by zero.
constexpr int kMaxDirect = 30;

double point_density_direct(const std::vector<double>& fire, const std::vector<double>& survive) {
  const std::size_t k = fire.size();
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (fire[i] == 0.0) continue;
    double prod = fire[i];
    for (std::size_t j = 0; j < k; ++j) {
      if (j != i) prod *= survive[j];
    }
    total += prod;
  }
  return total;
}

double point_density_logspace(const std::vector<double>& fire, const std::vector<double>& survive) {
  const std::size_t k = fire.size();
  double log_sum = 0.0;
  std::size_t zeros = 0;
  std::size_t zero_at = 0;
  for (std::size_t j = 0; j < k; ++j) {
    if (survive[j] == 0.0) {
      if (++zeros > 1) return 0.0;  // two dead factors kill every term
      zero_at = j;
    } else {
      log_sum += std::log(survive[j]);
    }
  }
  if (zeros == 1) return fire[zero_at] * std::exp(log_sum);
  double total = 0.0;
  for (std::size_t i = 0; i < k; ++i) {
    if (fire[i] != 0.0) total += fire[i] * std::exp(log_sum - std::log(survive[i]));
  }
  return total;
}

}  // namespace

DensityOverTime firing_density(const DetectorModel& det, const PhotonArrivalPattern& arrivals, const TimeGrid& grid) {
  if (arrivals.k() == 0) throw DomainError("firing_density: empty arrival pattern has no firing density");
  require_coverage(grid, arrivals.min_time(), arrivals.max_time() + det.jitter.upper_support(), "firing_density");

  const std::size_t k = arrivals.arrival_times.size();
  const double eta = det.efficiency;
  std::vector<double> fire(k), survive(k);
  std::vector<double> values(static_cast<std::size_t>(grid.n_points()));
  for (int n = 0; n < grid.n_points(); ++n) {
    const double T = grid.t(n);
    for (std::size_t j = 0; j < k; ++j) {
      const double tau = T - arrivals.arrival_times[j];
      fire[j] = eta * det.jitter.pdf(tau);
      survive[j] = 1.0 - eta * det.jitter.cdf(tau);
    }
    values[static_cast<std::size_t>(n)] = (static_cast<int>(k) <= kMaxDirect)
                                              ? point_density_direct(fire, survive)
                                              : point_density_logspace(fire, survive);
  }
  return DensityOverTime(grid, std::move(values));
}

DensityOverTime firing_density_simultaneous(const DetectorModel& det, int k, double t, const TimeGrid& grid) {
  if (k < 1) throw DomainError("firing_density_simultaneous: need k >= 1");
  require_coverage(grid, t, t + det.jitter.upper_support(), "firing_density_simultaneous");

  const double eta = det.efficiency;
  std::vector<double> values(static_cast<std::size_t>(grid.n_points()));
  for (int n = 0; n < grid.n_points(); ++n) {
    const double tau = grid.t(n) - t;
    const double base = 1.0 - eta * det.jitter.cdf(tau);
    const double pw = (k == 1) ? 1.0 : std::pow(base, k - 1);
    values[static_cast<std::size_t>(n)] = static_cast<double>(k) * eta * det.jitter.pdf(tau) * pw;
  }
  return DensityOverTime(grid, std::move(values));
}

double on_probability(const DensityOverTime& p) { return p.mass(); }

double binned_on_probability(const DensityOverTime& p, double t_lo, double t_hi) {
  if (!(t_lo < t_hi)) throw DomainError("binned_on_probability: need t_lo < t_hi");
  return p.integral(t_lo, t_hi);
}

DensityOverTime add_dark_counts(const DensityOverTime& p, const DetectorModel& det) {
  std::vector<double> values = p.values();
  for (double& v : values) v += det.dark_count_rate;
  return DensityOverTime(p.grid(), std::move(values));
}

}  // namespace jitterpovm
