#include "pagraph/analysis.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/special_functions/gamma.hpp>

#include "pagraph/error.hpp"
#include "pagraph/series.hpp"

namespace pagraph {

EmpiricalDistribution empirical_from_counts(const std::map<std::int64_t, std::int64_t>& counts,
                                            std::int64_t n) {
  EmpiricalDistribution emp;
  emp.n = n;
  for (const auto& [j, c] : counts) {
    if (c <= 0) continue;
    emp.counts.emplace(j, c);
    emp.vertices += c;
    emp.support_max = std::max(emp.support_max, j);
  }
  for (const auto& [j, c] : emp.counts) {
    emp.freq.emplace(j, static_cast<double>(c) / static_cast<double>(emp.vertices));
  }
  return emp;
}

EmpiricalDistribution empirical_distribution(const DegreeLedger& ledger) {
  return empirical_from_counts(ledger.counts(), ledger.step());
}

FunctionalLln functional_lln(const std::function<double(std::int64_t)>& f, double bound,
                             const EmpiricalDistribution& emp, const LimitSpectrum& spectrum) {
  auto checked = [&](std::int64_t j) {
    const double v = f(j);
    if (!(std::abs(v) <= bound)) {
      throw Error(ErrorCode::UnboundedF,
                  "|f(" + std::to_string(j) + ")| exceeds the declared bound");
    }
    return v;
  };
  FunctionalLln out;
  for (const auto& [j, fr] : emp.freq) out.empirical += checked(j) * fr;
  for (std::int64_t j = 1; j <= spectrum.j_max(); ++j) out.theoretical += checked(j) * spectrum.at(j);
  out.gap = std::abs(out.empirical - out.theoretical);
  return out;
}

namespace {

TailFit fit_points(const std::vector<double>& js, const std::vector<double>& ys, std::int64_t j_min,
                   std::int64_t j_max) {
  if (js.size() < 5) {
    throw Error(ErrorCode::InsufficientBins,
                "tail fit needs at least 5 usable bins, found " + std::to_string(js.size()));
  }
  std::vector<double> x(js.size()), y(ys.size());
  std::transform(js.begin(), js.end(), x.begin(), [](double v) { return std::log(v); });
  std::transform(ys.begin(), ys.end(), y.begin(), [](double v) { return std::log(v); });
  const double mx = mean_of(x), my = mean_of(y);
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  TailFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  fit.j_min = j_min;
  fit.j_max = j_max;
  fit.bins = x.size();
  return fit;
}

void check_range(std::int64_t j_min, std::int64_t j_max) {
  if (j_min < 1 || j_max <= j_min) {
    throw Error(ErrorCode::RangeError, "tail fit range must satisfy 1 <= j_min < j_max");
  }
}

}  // namespace

TailFit tail_fit(const EmpiricalDistribution& emp, std::int64_t j_min, std::int64_t j_max,
                 std::int64_t lattice, std::int64_t min_count) {
  check_range(j_min, j_max);
  std::vector<double> js, ys;
  for (auto it = emp.counts.lower_bound(j_min); it != emp.counts.end() && it->first <= j_max; ++it) {
    if (it->second < min_count || it->first % lattice != 0) continue;
    js.push_back(static_cast<double>(it->first));
    ys.push_back(emp.freq.at(it->first));
  }
  return fit_points(js, ys, j_min, j_max);
}

TailFit tail_fit(const LimitSpectrum& spectrum, std::int64_t j_min, std::int64_t j_max) {
  check_range(j_min, j_max);
  std::vector<double> js, ys;
  for (std::int64_t j = j_min; j <= std::min(j_max, spectrum.j_max()); ++j) {
    if (spectrum.at(j) <= 0.0) continue;
    js.push_back(static_cast<double>(j));
    ys.push_back(spectrum.at(j));
  }
  return fit_points(js, ys, j_min, j_max);
}

namespace {

ConvergenceReport plateau(std::vector<double> values, double threshold, double window,
                          std::string id) {
  if (!(window > 0.0 && window < 1.0)) throw Error(ErrorCode::RangeError, "window must lie in (0,1)");
  if (values.size() < 10) {
    throw Error(ErrorCode::SeriesTooShort,
                "series '" + id + "' has " + std::to_string(values.size()) + " points, need 10");
  }
  ConvergenceReport report;
  report.series_id = std::move(id);
  report.window = window;
  report.threshold = threshold;
  const auto tail = trailing(values, window);
  report.level = mean_of(tail);
  report.tail_oscillation = report.level > 0.0 ? spread(tail) / report.level : INFINITY;
  report.verdict = report.level > 0.0 && report.tail_oscillation < threshold;
  return report;
}

std::vector<double> scaled_values(const StepSeries& series, double exponent) {
  std::vector<double> out;
  out.reserve(series.size());
  std::int64_t last = -1;
  for (const auto& [n, v] : series) {
    if (n <= last) throw Error(ErrorCode::RangeError, "series steps must increase");
    last = n;
    if (n < 1) continue;
    out.push_back(v / std::pow(static_cast<double>(n), exponent));
  }
  return out;
}

}  // namespace

ConvergenceReport trajectory_limit_check(const StepSeries& series, double exponent,
                                         double threshold, double window, std::string series_id) {
  return plateau(scaled_values(series, exponent), threshold, window, std::move(series_id));
}

ConvergenceReport ratio_limit_check(const StepSeries& a, const StepSeries& b, double threshold,
                                    double window) {
  if (a.size() != b.size()) {
    throw Error(ErrorCode::MismatchedLengths, "ratio series need equal sampling");
  }
  std::vector<double> ratio;
  ratio.reserve(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].first != b[k].first) {
      throw Error(ErrorCode::MismatchedLengths, "ratio series sampled at different steps");
    }
    if (a[k].first >= 1) ratio.push_back(a[k].second / b[k].second);
  }
  return plateau(std::move(ratio), threshold, window, "degree_ratio");
}

ConvergenceReport max_degree_check(const StepSeries& max_series, double exponent, double threshold,
                                   double window) {
  return trajectory_limit_check(max_series, exponent, threshold, window, "max_degree");
}

FreezeReport freeze_detector(const std::vector<std::pair<std::int64_t, Vertex>>& series) {
  if (series.empty()) throw Error(ErrorCode::SeriesTooShort, "index series is empty");
  FreezeReport report;
  const Vertex final_index = series.back().second;
  for (std::size_t k = series.size(); k-- > 1;) {
    if (series[k - 1].second != final_index) {
      report.last_change_step = series[k].first;
      break;
    }
  }
  const auto horizon = series.back().first;
  report.frozen_fraction =
      horizon > 0 ? static_cast<double>(horizon - report.last_change_step) / static_cast<double>(horizon)
                  : 1.0;
  return report;
}

DistributionDistance distribution_distance(const EmpiricalDistribution& emp,
                                           const LimitSpectrum& spectrum, std::int64_t j_max) {
  if (j_max > spectrum.j_max()) {
    throw Error(ErrorCode::RangeError, "spectrum does not cover j <= " + std::to_string(j_max));
  }
  DistributionDistance out;
  out.abs_errors.resize(static_cast<std::size_t>(std::max<std::int64_t>(j_max, 0)));
  double inside_emp = 0.0, inside_pi = 0.0, l1 = 0.0;
  for (std::int64_t j = 1; j <= j_max; ++j) {
    const double e = emp.at(j), p = spectrum.at(j);
    const double d = std::abs(e - p);
    out.abs_errors[static_cast<std::size_t>(j - 1)] = d;
    out.max_abs_error = std::max(out.max_abs_error, d);
    inside_emp += e;
    inside_pi += p;
    l1 += d;
  }
  // Mass beyond j_max on each side, including the spectrum's own truncation.
  l1 += std::abs((1.0 - inside_emp) - (1.0 - inside_pi));
  out.total_variation = 0.5 * l1;
  return out;
}

namespace {

struct Binning {
  /// Largest degree covered by each bin; the last bin is open-ended.
  std::vector<std::int64_t> upper;
  std::vector<std::pair<double, double>> cells;
  double total_a = 0.0;
  double total_b = 0.0;

  std::size_t bin_of(std::int64_t j) const {
    const auto it = std::lower_bound(upper.begin(), upper.end(), j);
    return it == upper.end() ? upper.size() - 1 : static_cast<std::size_t>(it - upper.begin());
  }
};

Binning merge_bins(const DegreeCounts& counts_a, const DegreeCounts& counts_b) {
  std::map<std::int64_t, std::pair<double, double>> table;
  Binning binning;
  for (const auto& [j, c] : counts_a) {
    table[j].first += static_cast<double>(c);
    binning.total_a += static_cast<double>(c);
  }
  for (const auto& [j, c] : counts_b) {
    table[j].second += static_cast<double>(c);
    binning.total_b += static_cast<double>(c);
  }
  if (binning.total_a <= 0.0 || binning.total_b <= 0.0) {
    throw Error(ErrorCode::DegenerateBinning, "both pools must be nonempty");
  }
  const double total = binning.total_a + binning.total_b;
  const double smaller_row = std::min(binning.total_a, binning.total_b);

  std::pair<double, double> open{0.0, 0.0};
  for (const auto& [j, cell] : table) {
    open.first += cell.first;
    open.second += cell.second;
    if ((open.first + open.second) * smaller_row / total >= 5.0) {
      binning.cells.push_back(open);
      binning.upper.push_back(j);
      open = {0.0, 0.0};
    }
  }
  if (open.first + open.second > 0.0) {
    if (binning.cells.empty()) {
      binning.cells.push_back(open);
      binning.upper.push_back(table.rbegin()->first);
    } else {
      binning.cells.back().first += open.first;
      binning.cells.back().second += open.second;
      binning.upper.back() = table.rbegin()->first;
    }
  }
  if (binning.cells.size() < 2) {
    throw Error(ErrorCode::DegenerateBinning, "fewer than 2 bins after merging");
  }
  return binning;
}

ChiSquareResult pearson(const Binning& binning, double design_effect) {
  const double total = binning.total_a + binning.total_b;
  ChiSquareResult result;
  result.bins = binning.cells.size();
  result.dof = static_cast<std::int64_t>(result.bins) - 1;
  for (const auto& [a, b] : binning.cells) {
    const double col = a + b;
    const double ea = col * binning.total_a / total, eb = col * binning.total_b / total;
    result.statistic += (a - ea) * (a - ea) / ea + (b - eb) * (b - eb) / eb;
  }
  result.design_effect = design_effect;
  result.statistic /= design_effect;
  result.p_value =
      boost::math::gamma_q(0.5 * static_cast<double>(result.dof), 0.5 * result.statistic);
  return result;
}

DegreeCounts pool(const std::vector<DegreeCounts>& replicates) {
  DegreeCounts out;
  for (const auto& r : replicates) {
    for (const auto& [j, c] : r) out[j] += c;
  }
  return out;
}

// Per-bin design effect: ratio-estimator variance of the bin proportion
// across replicates over the multinomial variance p(1-p)/N.
std::vector<double> design_effects(const Binning& binning, const std::vector<DegreeCounts>& reps,
                                   double pooled_total) {
  const std::size_t k = binning.cells.size();
  const auto r = reps.size();
  std::vector<std::vector<double>> per_rep(r, std::vector<double>(k, 0.0));
  std::vector<double> sizes(r, 0.0), totals(k, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    for (const auto& [j, c] : reps[i]) {
      per_rep[i][binning.bin_of(j)] += static_cast<double>(c);
      sizes[i] += static_cast<double>(c);
    }
    for (std::size_t b = 0; b < k; ++b) totals[b] += per_rep[i][b];
  }
  std::vector<double> deff(k, 1.0);
  if (r < 2) return deff;
  for (std::size_t b = 0; b < k; ++b) {
    const double p = totals[b] / pooled_total;
    if (p <= 0.0 || p >= 1.0) continue;
    double ss = 0.0;
    for (std::size_t i = 0; i < r; ++i) {
      const double e = per_rep[i][b] - p * sizes[i];
      ss += e * e;
    }
    const double variance = ss * static_cast<double>(r) / static_cast<double>(r - 1) /
                            (pooled_total * pooled_total);
    deff[b] = variance / (p * (1.0 - p) / pooled_total);
  }
  return deff;
}

}  // namespace

ChiSquareResult embedding_equivalence_test(const DegreeCounts& counts_a,
                                           const DegreeCounts& counts_b) {
  return pearson(merge_bins(counts_a, counts_b), 1.0);
}

ChiSquareResult embedding_equivalence_test(const std::vector<DegreeCounts>& replicates_a,
                                           const std::vector<DegreeCounts>& replicates_b) {
  const Binning binning = merge_bins(pool(replicates_a), pool(replicates_b));
  const auto deff_a = design_effects(binning, replicates_a, binning.total_a);
  const auto deff_b = design_effects(binning, replicates_b, binning.total_b);
  const double total = binning.total_a + binning.total_b;
  double mean_deff = 0.0;
  for (std::size_t b = 0; b < binning.cells.size(); ++b) {
    const double p = (binning.cells[b].first + binning.cells[b].second) / total;
    const double combined = (binning.total_b * deff_a[b] + binning.total_a * deff_b[b]) / total;
    mean_deff += (1.0 - p) * combined;
  }
  mean_deff /= static_cast<double>(binning.cells.size() - 1);
  if (!(mean_deff > 0.0) || !std::isfinite(mean_deff)) mean_deff = 1.0;
  return pearson(binning, mean_deff);
}

double ks_distance_uniform(std::vector<double> sample) {
  if (sample.empty()) return 1.0;
  std::sort(sample.begin(), sample.end());
  const auto n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double u = std::clamp(sample[i], 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / n - u, u - static_cast<double>(i) / n});
  }
  return d;
}

}  // namespace pagraph
