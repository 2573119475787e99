#pragma once

#include <span>

namespace edca {

struct Confidence {
  double mean = 0;
  double half_width = 0; // Student-t 95% two-sided
  int n = 0;
};

/// Sample mean and 95% confidence half-width over independent runs.
/// Throws std::invalid_argument for fewer than 2 samples.
Confidence confidence(std::span<const double> samples);

} // namespace edca
