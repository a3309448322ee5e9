#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "pagraph/graph.hpp"
#include "pagraph/theory.hpp"

namespace pagraph {

/// Degree frequencies R_j / (number of vertices).
struct EmpiricalDistribution {
  std::int64_t n = 0;
  std::int64_t vertices = 0;
  std::map<std::int64_t, std::int64_t> counts;
  std::map<std::int64_t, double> freq;
  std::int64_t support_max = 0;

  double at(std::int64_t j) const {
    const auto it = freq.find(j);
    return it == freq.end() ? 0.0 : it->second;
  }
};

EmpiricalDistribution empirical_distribution(const DegreeLedger& ledger);

/// From (possibly pooled) counts; `n` is informational.
EmpiricalDistribution empirical_from_counts(const std::map<std::int64_t, std::int64_t>& counts,
                                            std::int64_t n);

struct FunctionalLln {
  double empirical = 0.0;
  double theoretical = 0.0;
  double gap = 0.0;
};

/// sum_j f(j) freq_j against sum_j f(j) pi_j. Throws UnboundedF when
/// |f| exceeds `bound` anywhere on the evaluated support.
FunctionalLln functional_lln(const std::function<double(std::int64_t)>& f, double bound,
                             const EmpiricalDistribution& emp, const LimitSpectrum& spectrum);

struct TailFit {
  double slope = 0.0;
  double intercept = 0.0;
  std::int64_t j_min = 0;
  std::int64_t j_max = 0;
  double r_squared = 0.0;
  std::size_t bins = 0;
};

/// Log-log least squares of freq_j on j over [j_min, j_max], using only bins
/// with at least `min_count` observations and j on the given lattice.
TailFit tail_fit(const EmpiricalDistribution& emp, std::int64_t j_min, std::int64_t j_max,
                 std::int64_t lattice = 1, std::int64_t min_count = 5);

/// Same fit on the theoretical pi_j > 0.
TailFit tail_fit(const LimitSpectrum& spectrum, std::int64_t j_min, std::int64_t j_max);

struct ConvergenceReport {
  std::string series_id;
  /// (max - min) / mean over the trailing window.
  double tail_oscillation = 0.0;
  double level = 0.0;
  double window = 0.5;
  double threshold = 0.0;
  bool verdict = false;
};

/// A series of (n, value) samples at increasing n.
using StepSeries = std::vector<std::pair<std::int64_t, double>>;

/// Oscillation of value / n^exponent over the trailing window (n >= 1 only).
/// Passes when the oscillation is below `threshold` and the level is positive.
ConvergenceReport trajectory_limit_check(const StepSeries& series, double exponent,
                                         double threshold, double window = 0.5,
                                         std::string series_id = "degree");

/// d_a(n) / d_b(n) plateau check.
ConvergenceReport ratio_limit_check(const StepSeries& a, const StepSeries& b, double threshold,
                                    double window = 0.5);

ConvergenceReport max_degree_check(const StepSeries& max_series, double exponent, double threshold,
                                   double window = 0.5);

struct FreezeReport {
  std::int64_t last_change_step = 0;
  double frozen_fraction = 0.0;
};

/// Samples (n, I_n). The last change is the first sampled step carrying the
/// final value after a different one.
FreezeReport freeze_detector(const std::vector<std::pair<std::int64_t, Vertex>>& series);

struct DistributionDistance {
  double total_variation = 0.0;
  /// |freq_j - pi_j| for j = 1..j_max.
  std::vector<double> abs_errors;
  double max_abs_error = 0.0;
};

/// TV distance with all mass beyond j_max lumped into one cell.
DistributionDistance distribution_distance(const EmpiricalDistribution& emp,
                                           const LimitSpectrum& spectrum, std::int64_t j_max);

struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double p_value = 1.0;
  std::size_t bins = 0;
  /// Mean design effect the statistic was divided by (1 for the plain test).
  double design_effect = 1.0;
};

using DegreeCounts = std::map<std::int64_t, std::int64_t>;

/// Two-sample chi-square homogeneity test on degree counts. Adjacent bins
/// are merged (from small j upward) until every expected count is >= 5.
ChiSquareResult embedding_equivalence_test(const DegreeCounts& counts_a,
                                           const DegreeCounts& counts_b);

/// Same test on per-replicate counts. Vertices of one run are not independent
/// draws, so the pooled statistic is divided by the first-order Rao-Scott
/// mean design effect, estimated from the between-replicate variance of the
/// binned counts.
ChiSquareResult embedding_equivalence_test(const std::vector<DegreeCounts>& replicates_a,
                                           const std::vector<DegreeCounts>& replicates_b);

/// Kolmogorov-Smirnov distance of a sample from Uniform(0,1).
double ks_distance_uniform(std::vector<double> sample);

}  // namespace pagraph
