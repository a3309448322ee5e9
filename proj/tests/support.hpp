#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace testing {

// Standard error of a sample mean from the sample itself.
struct MeanEstimate {
  double mean = 0.0;
  double se = 0.0;
};

inline MeanEstimate estimate(const std::vector<double>& xs) {
  double s = 0.0, s2 = 0.0;
  for (const double x : xs) {
    s += x;
    s2 += x * x;
  }
  const double n = static_cast<double>(xs.size());
  const double mean = s / n;
  const double var = (s2 - n * mean * mean) / (n - 1.0);
  return {mean, std::sqrt(var / n)};
}

// Closed-form limit degree law for X = x0, written out independently of the
// library: nonzero only on multiples of x0.
inline double explicit_pi(std::int64_t x0, double beta, std::int64_t j) {
  if (j % x0 != 0) return 0.0;
  const auto l = j / x0;
  const double x = static_cast<double>(x0);
  double value = (2.0 * x + beta) / (static_cast<double>(j) + 2.0 * x + 2.0 * beta);
  for (std::int64_t k = 1; k < l; ++k) {
    value *= (static_cast<double>(k) * x + beta) / (static_cast<double>(k + 2) * x + 2.0 * beta);
  }
  return value;
}

}  // namespace testing
