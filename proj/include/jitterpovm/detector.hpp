#pragma once

#include "jitterpovm/errors.hpp"
#include "jitterpovm/jitter.hpp"

namespace jitterpovm {

/// ON/OFF detector: detection efficiency, timing-jitter response, and a
/// constant dark-count rate per unit time (0 by default).
struct DetectorModel {
  double efficiency;
  JitterDistribution jitter;
  double dark_count_rate;

  DetectorModel(double efficiency_, JitterDistribution jitter_, double dark_count_rate_ = 0.0)
      : efficiency(efficiency_), jitter(jitter_), dark_count_rate(dark_count_rate_) {
    if (!(efficiency >= 0.0 && efficiency <= 1.0))
      throw ParameterError("DetectorModel: efficiency must be in [0, 1]");
    if (!(dark_count_rate >= 0.0)) throw ParameterError("DetectorModel: dark-count rate must be >= 0");
  }
};

}  // namespace jitterpovm
