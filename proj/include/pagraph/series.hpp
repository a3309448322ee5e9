#pragma once

#include <algorithm>
#include <span>

namespace pagraph {

/// max - min of the values; 0 for an empty span.
inline double spread(std::span<const double> values) {
  if (values.empty()) return 0.0;
  const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
  return *hi - *lo;
}

inline double mean_of(std::span<const double> values) {
  if (values.empty()) return 0.0;
  double s = 0.0;
  for (const double v : values) s += v;
  return s / static_cast<double>(values.size());
}

/// The trailing `fraction` of a series (at least one element if nonempty).
inline std::span<const double> trailing(std::span<const double> values, double fraction) {
  auto keep = static_cast<std::size_t>(static_cast<double>(values.size()) * fraction);
  keep = std::clamp<std::size_t>(keep, values.empty() ? 0 : 1, values.size());
  return values.subspan(values.size() - keep);
}

}  // namespace pagraph
