#include "paircorr/detail/power_sum.hpp"

#include <boost/math/special_functions/zeta.hpp>
#include <cmath>

#include "paircorr/detail/compensated_sum.hpp"

namespace paircorr::detail {

namespace {

// Euler-Maclaurin corrections relative to the leading term K^(s+1)/(s+1).
double asymptotic_relative_tail(double kd, double s) {
  const double lead_inv = (s + 1.0);
  double c = lead_inv / (2.0 * kd);
  c += s * lead_inv / (12.0 * kd * kd);
  c -= s * (s - 1.0) * (s - 2.0) * lead_inv / (720.0 * kd * kd * kd * kd);
  c += boost::math::zeta(-s) * lead_inv * std::exp(-(s + 1.0) * std::log(kd));
  return c;
}

}  // namespace

double power_sum_direct(std::uint64_t k, double s) {
  CompensatedSum acc;
  for (std::uint64_t p = 1; p <= k; ++p) acc.add(std::pow(static_cast<double>(p), s));
  return acc.value();
}

double power_sum_asymptotic(std::uint64_t k, double s) {
  if (k == 0) return 0.0;
  const double kd = static_cast<double>(k);
  const double lead = std::pow(kd, s + 1.0) / (s + 1.0);
  return lead * (1.0 + asymptotic_relative_tail(kd, s));
}

double power_sum(std::uint64_t k, double s) {
  return k <= kDirectSumLimit ? power_sum_direct(k, s) : power_sum_asymptotic(k, s);
}

double scaled_power_sum(std::uint64_t k, double s, double r) {
  if (k == 0) return 0.0;
  if (k <= kDirectSumLimit) {
    CompensatedSum acc;
    for (std::uint64_t p = 1; p <= k; ++p) acc.add(std::pow(static_cast<double>(p) * r, s));
    return acc.value();
  }
  const double kd = static_cast<double>(k);
  const double log_lead = (s + 1.0) * std::log(kd) - std::log(s + 1.0) + s * std::log(r);
  return std::exp(log_lead) * (1.0 + asymptotic_relative_tail(kd, s));
}

}  // namespace paircorr::detail
