#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace jitterpovm {

/// Invalid parameter passed to a constructor or factory.
struct ParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Operation invoked outside its mathematical domain (empty arrival
/// pattern, zero-mass density, degenerate interval, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// A grid does not cover the support an operation needs. Carries the
/// bounds the grid would have to span.
struct CoverageError : std::runtime_error {
  double required_min;
  double required_max;
  CoverageError(const std::string& what, double lo, double hi)
      : std::runtime_error(what + " (required grid coverage: [" + std::to_string(lo) + ", " +
                           std::to_string(hi) + "])"),
        required_min(lo),
        required_max(hi) {}
};

/// Herald time incompatible with the state and causality: the click could
/// not have happened, so no conditional state exists.
struct ImpossibleHeraldError : DomainError {
  using DomainError::DomainError;
};

/// Conditioning selected no events; carries the counts so callers can
/// widen the window or raise the trial count.
struct InsufficientStatisticsError : std::runtime_error {
  std::uint64_t n_trials;
  std::uint64_t n_conditioned;
  InsufficientStatisticsError(const std::string& what, std::uint64_t trials, std::uint64_t conditioned)
      : std::runtime_error(what + " (" + std::to_string(conditioned) + " conditioned events out of " +
                           std::to_string(trials) + " trials)"),
        n_trials(trials),
        n_conditioned(conditioned) {}
};

}  // namespace jitterpovm
