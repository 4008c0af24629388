#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "jitterpovm/errors.hpp"
#include "jitterpovm/povm.hpp"

using namespace jitterpovm;

namespace {

const JitterDistribution kJitter = JitterDistribution::log_normal_from_moments(1.0, 0.5);

TimeGrid grid_for(const JitterDistribution& j, double t_lo, double t_hi, double dt = 5e-4) {
  return TimeGrid::with_spacing(t_lo, t_hi + j.upper_support(), dt);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
  return worst;
}

}  // namespace

TEST_CASE("single photon at unit efficiency reproduces the jitter response") {
  DetectorModel det{1.0, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 0.0);
  DensityOverTime p = firing_density(det, PhotonArrivalPattern(1, 0.0), g);
  DensityOverTime ps = firing_density_simultaneous(det, 1, 0.0, g);
  for (int i = 0; i < g.n_points(); ++i) {
    CHECK(p.value(i) == kJitter.pdf(g.t(i)));   // bitwise: k = 1 has no survival factor
    CHECK(ps.value(i) == kJitter.pdf(g.t(i)));
  }
}

TEST_CASE("two simultaneous photons: first-click density 2 eta pdf (1 - eta cdf)") {
  DetectorModel det{1.0, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 0.0);
  DensityOverTime p = firing_density_simultaneous(det, 2, 0.0, g);
  for (int i = 0; i < g.n_points(); ++i) {
    const double want = 2.0 * kJitter.pdf(g.t(i)) * (1.0 - kJitter.cdf(g.t(i)));
    CHECK(p.value(i) == doctest::Approx(want).epsilon(1e-13));
  }
  // More photons race for the first click: the winning time moves earlier.
  DensityOverTime p1 = firing_density_simultaneous(det, 1, 0.0, g);
  CHECK(density_mode(p) < density_mode(p1));
  CHECK(density_moments(p).mean < density_moments(p1).mean);
}

TEST_CASE("equal arrival times reduce to the simultaneous formula") {
  DetectorModel det{0.7, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.5, 0.5);
  DensityOverTime a = firing_density(det, PhotonArrivalPattern(3, 0.5), g);
  DensityOverTime b = firing_density_simultaneous(det, 3, 0.5, g);
  CHECK(max_abs_diff(a.values(), b.values()) <= 1e-12);
}

TEST_CASE("firing density is invariant under photon reordering") {
  DetectorModel det{0.6, kJitter, 0.0};
  std::vector<double> times{0.0, 0.31, 1.7, 2.9, 4.1};
  TimeGrid g = grid_for(kJitter, 0.0, 4.1, 1e-3);
  DensityOverTime ref = firing_density(det, PhotonArrivalPattern(times), g);
  std::mt19937 rng(7);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(times.begin(), times.end(), rng);
    DensityOverTime p = firing_density(det, PhotonArrivalPattern(times), g);
    CHECK(max_abs_diff(ref.values(), p.values()) <= 1e-12);
  }
}

TEST_CASE("total click probability equals 1 - (1 - eta)^k") {
  std::vector<double> times{0.0, 0.31, 1.7, 2.9, 4.1};
  for (int k : {1, 2, 3, 5}) {
    for (double eta : {0.3, 0.5, 0.7, 1.0}) {
      DetectorModel det{eta, kJitter, 0.0};
      std::vector<double> prefix(times.begin(), times.begin() + k);
      TimeGrid g = grid_for(kJitter, prefix.front(), prefix.back());
      DensityOverTime p = firing_density(det, PhotonArrivalPattern(prefix), g);
      const double want = 1.0 - std::pow(1.0 - eta, k);
      CHECK(on_probability(p) == doctest::Approx(want).epsilon(1e-4));
    }
  }
  // A canonical spot value: three photons at eta = 1/2 click with p = 7/8.
  DetectorModel det{0.5, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 1.0);
  DensityOverTime p = firing_density(det, PhotonArrivalPattern(std::vector<double>{0.0, 0.4, 1.0}), g);
  CHECK(on_probability(p) == doctest::Approx(0.875).epsilon(1e-4));
}

TEST_CASE("well-separated clusters scale by the survival of earlier photons") {
  // Two photons 10 jitter-widths apart at eta = 1/2: near t = 0 the density
  // is eta * pdf(T); near t = 10 it is eta * (1 - eta) * pdf(T - 10).
  DetectorModel det{0.5, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 10.0, 1e-3);
  DensityOverTime p = firing_density(det, PhotonArrivalPattern(std::vector<double>{0.0, 10.0}), g);
  for (double T : {0.3, 0.9, 2.1}) {
    CHECK(p.value_at(T) == doctest::Approx(0.5 * kJitter.pdf(T)).epsilon(1e-6));
    CHECK(p.value_at(10.0 + T) == doctest::Approx(0.25 * kJitter.pdf(T)).epsilon(1e-4));
  }
}

TEST_CASE("no-click-yet probability matches the product of survivals") {
  for (int k : {1, 2, 5}) {
    DetectorModel det{1.0, kJitter, 0.0};
    TimeGrid g = grid_for(kJitter, 0.0, 0.0);
    DensityOverTime p = firing_density_simultaneous(det, k, 0.0, g);
    const std::vector<double> cum = p.cumulative();
    double worst = 0.0;
    for (int i = 0; i < g.n_points(); ++i) {
      const double survival = std::pow(1.0 - kJitter.cdf(g.t(i)), k);
      worst = std::max(worst, std::abs((1.0 - cum[static_cast<std::size_t>(i)]) - survival));
    }
    CHECK(worst <= 1e-4);
  }
}

TEST_CASE("more photons click sooner: cumulative dominance in k") {
  DetectorModel det{0.7, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 0.0);
  const std::vector<double> c1 = firing_density_simultaneous(det, 1, 0.0, g).cumulative();
  const std::vector<double> c2 = firing_density_simultaneous(det, 2, 0.0, g).cumulative();
  const std::vector<double> c5 = firing_density_simultaneous(det, 5, 0.0, g).cumulative();
  for (std::size_t i = 0; i < c1.size(); ++i) {
    CHECK(c2[i] >= c1[i] - 1e-12);
    CHECK(c5[i] >= c2[i] - 1e-12);
  }
}

TEST_CASE("quadrature error decays at second order under grid refinement") {
  DetectorModel det{0.8, kJitter, 0.0};
  const double hi = kJitter.upper_support();
  auto mass_at = [&](double dt) {
    TimeGrid g = TimeGrid::with_spacing(0.0, 0.4 + hi, dt);
    return on_probability(firing_density(det, PhotonArrivalPattern(std::vector<double>{0.0, 0.4}), g));
  };
  const double m1 = mass_at(0.02), m2 = mass_at(0.01), m3 = mass_at(0.005);
  const double order = std::log2(std::abs(m1 - m2) / std::abs(m2 - m3));
  CHECK(order >= 1.8);
}

TEST_CASE("binned click probabilities") {
  DetectorModel det{1.0, JitterDistribution::rectangular(0.0, 2.0), 0.0};
  TimeGrid g(0.0, 2.0, 4001);
  DensityOverTime p = firing_density(det, PhotonArrivalPattern(1, 0.0), g);
  CHECK(binned_on_probability(p, 0.0, 1.0) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(binned_on_probability(p, 0.0, 2.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(binned_on_probability(p, 1.5, 2.0) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(binned_on_probability(p, -3.0, -1.0) == 0.0);
  CHECK_THROWS_AS(binned_on_probability(p, 1.0, 0.5), DomainError);
}

TEST_CASE("dark counts add a constant rate over the window") {
  TimeGrid g(0.0, 10.0, 2001);
  DetectorModel det{1.0, kJitter, 0.01};
  // Vacuum input: the click density is the dark rate alone.
  DensityOverTime vac(g, std::vector<double>(2001, 0.0));
  DensityOverTime dark = add_dark_counts(vac, det);
  CHECK(dark.mass() == doctest::Approx(0.1).epsilon(1e-12));
  CHECK(dark.value_at(3.7) == doctest::Approx(0.01).epsilon(1e-12));
  // On a photon density, masses simply add (and may exceed 1).
  DensityOverTime p = firing_density(det, PhotonArrivalPattern(1, 0.0), TimeGrid::with_spacing(0.0, 12.7, 5e-4));
  DensityOverTime pd = add_dark_counts(p, det);
  CHECK(pd.mass() == doctest::Approx(p.mass() + 0.01 * 12.7).epsilon(1e-12));
  // Zero rate is the identity.
  DetectorModel clean{1.0, kJitter, 0.0};
  DensityOverTime same = add_dark_counts(p, clean);
  CHECK(max_abs_diff(same.values(), p.values()) == 0.0);
}

TEST_CASE("log-space evaluation keeps large k consistent and finite") {
  DetectorModel det{0.6, kJitter, 0.0};
  TimeGrid g = grid_for(kJitter, 0.0, 0.0, 1e-3);
  // k = 40 goes through the log-space product; the closed simultaneous form
  // is an independent reference.
  DensityOverTime a = firing_density(det, PhotonArrivalPattern(40, 0.0), g);
  DensityOverTime b = firing_density_simultaneous(det, 40, 0.0, g);
  for (int i = 0; i < g.n_points(); ++i) {
    CHECK(std::isfinite(a.value(i)));
    CHECK(a.value(i) == doctest::Approx(b.value(i)).epsilon(1e-9));
  }
  CHECK(on_probability(a) == doctest::Approx(1.0 - std::pow(0.4, 40)).epsilon(1e-4));

  // Bounded support at full efficiency: survival hits exactly zero past the
  // support without producing NaNs.
  DetectorModel hard{1.0, JitterDistribution::rectangular(0.0, 1.0), 0.0};
  TimeGrid gh(0.0, 1.5, 3001);
  DensityOverTime ph = firing_density(hard, PhotonArrivalPattern(40, 0.0), gh);
  CHECK(std::isfinite(ph.mass()));
  CHECK(ph.mass() == doctest::Approx(1.0).epsilon(1e-4));
  CHECK(ph.value_at(1.2) == 0.0);
}

TEST_CASE("invalid inputs are rejected") {
  DetectorModel det{0.5, kJitter, 0.0};
  TimeGrid g(0.0, 1.0, 101);
  CHECK_THROWS_AS(firing_density(det, PhotonArrivalPattern(std::vector<double>{}), g), DomainError);
  CHECK_THROWS_AS(firing_density_simultaneous(det, 0, 0.0, g), DomainError);
  // Grid must span [min arrival, max arrival + jitter support].
  CHECK_THROWS_AS(firing_density(det, PhotonArrivalPattern(1, 0.0), g), CoverageError);
  try {
    firing_density(det, PhotonArrivalPattern(1, 0.0), g);
  } catch (const CoverageError& e) {
    CHECK(e.required_min == doctest::Approx(0.0));
    CHECK(e.required_max == doctest::Approx(kJitter.upper_support()).epsilon(1e-12));
  }
  CHECK_THROWS_AS(DetectorModel(1.5, kJitter, 0.0), ParameterError);
  CHECK_THROWS_AS(DetectorModel(-0.1, kJitter, 0.0), ParameterError);
  CHECK_THROWS_AS(DetectorModel(0.5, kJitter, -1.0), ParameterError);
  CHECK_THROWS_AS(PhotonArrivalPattern(std::vector<double>{0.0, std::nan("")}), ParameterError);
}
