#pragma once

#include <cstdint>

namespace paircorr::detail {

/// Above this many terms, sums of powers switch to Euler-Maclaurin.
inline constexpr std::uint64_t kDirectSumLimit = 1'000'000;

/// sum_{p=1}^{K} p^s by compensated direct summation.
double power_sum_direct(std::uint64_t k, double s);

/// Euler-Maclaurin form of the same sum: zeta(-s) + K^(s+1)/(s+1) + K^s/2
/// plus the B2 and B4 correction terms.
double power_sum_asymptotic(std::uint64_t k, double s);

/// sum_{p=1}^{K} p^s, direct up to kDirectSumLimit terms.
double power_sum(std::uint64_t k, double s);

/// sum_{p=1}^{K} (p r)^s for r > 0, evaluated without forming p^s when the
/// individual factors would overflow.
double scaled_power_sum(std::uint64_t k, double s, double r);

}  // namespace paircorr::detail
