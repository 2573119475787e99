#include "edca/stats.hpp"

#include <cmath>
#include <stdexcept>

namespace edca {

namespace {

// Two-sided 95% Student-t quantiles by degrees of freedom; 1.960 beyond 30.
constexpr double kT95[] = {
    0,     12.706, 4.303, 3.182, 2.776, 2.571, 2.447, 2.365, 2.306, 2.262, 2.228,
    2.201, 2.179,  2.160, 2.145, 2.131, 2.120, 2.110, 2.101, 2.093, 2.086, 2.080,
    2.074, 2.069,  2.064, 2.060, 2.056, 2.052, 2.048, 2.045, 2.042};

double t95(int dof) {
  if (dof < 1) return 0;
  if (dof <= 30) return kT95[dof];
  return 1.960;
}

} // namespace

Confidence confidence(std::span<const double> samples) {
  const int n = static_cast<int>(samples.size());
  if (n < 2) throw std::invalid_argument("confidence: need at least 2 samples");
  double mean = 0;
  for (double x : samples) mean += x;
  mean /= n;
  double var = 0;
  for (double x : samples) var += (x - mean) * (x - mean);
  var /= (n - 1);
  return {mean, t95(n - 1) * std::sqrt(var / n), n};
}

} // namespace edca
