#include "edca/arrival.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace edca {

double ArrivalKernel::arrival_count_prob(int k, double t) const {
  if (k < 0 || t < 0) return 0.0;
  const double mu = lambda * t;
  if (mu == 0.0) return k == 0 ? 1.0 : 0.0;
  // exp(-mu + k log mu - log k!)
  return std::exp(-mu + k * std::log(mu) - std::lgamma(k + 1.0));
}

double ArrivalKernel::p_nt(int l_after, double t, int l_before) const {
  if (l_after < l_before || l_after > queue_size) return 0.0;
  if (l_after < queue_size) return arrival_count_prob(l_after - l_before, t);
  // l_after == QS: everything not accounted for below lands here.
  double partial = 0.0;
  for (int lp = l_before; lp < queue_size; ++lp)
    partial += arrival_count_prob(lp - l_before, t);
  return std::clamp(1.0 - partial, 0.0, 1.0);
}

double ArrivalKernel::p_st(int l_after, double t, int l_before) const {
  if (l_before < 1)
    throw std::invalid_argument("p_st: no departure possible from an empty queue");
  if (l_after < l_before - 1 || l_after > queue_size) return 0.0;
  if (l_after < queue_size) return arrival_count_prob(l_after - l_before + 1, t);
  double partial = 0.0;
  for (int lp = l_before - 1; lp < queue_size; ++lp)
    partial += arrival_count_prob(lp - l_before + 1, t);
  return std::clamp(1.0 - partial, 0.0, 1.0);
}

double ArrivalKernel::rho(double t_slot) const {
  return -std::expm1(-lambda * t_slot);
}

} // namespace edca
