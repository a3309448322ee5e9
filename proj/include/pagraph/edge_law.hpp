#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pagraph/rng.hpp"

namespace pagraph {

enum class LawKind { Explicit, Deterministic, Geometric };

/// Unvalidated description of a law on the integers, as read from a flag or
/// config file. Explicit masses are (support point, probability) pairs.
struct RawEdgeLaw {
  LawKind kind = LawKind::Deterministic;
  std::vector<std::pair<std::int64_t, double>> masses;
  std::int64_t point = 1;
  double success = 0.5;
};

/// Law {p_j}_{j>=1} of the number of parallel edges a new vertex brings.
/// Also used for group sizes when grouping vertices.
class EdgeCountDistribution {
 public:
  static EdgeCountDistribution deterministic(std::int64_t x0);
  static EdgeCountDistribution geometric(double q);
  /// probs[k] is the mass at j = k+1.
  static EdgeCountDistribution explicit_law(std::vector<double> probs);

  LawKind kind() const noexcept { return kind_; }
  double mean() const noexcept { return mean_; }
  double pmf(std::int64_t j) const noexcept;
  /// Largest support point, or nullopt for unbounded support.
  std::optional<std::int64_t> max_support() const noexcept;
  /// gcd of the support points (1 for geometric).
  std::int64_t lattice_step() const noexcept { return lattice_; }

  std::int64_t point() const noexcept { return point_; }
  double success() const noexcept { return success_; }
  const std::vector<double>& probs() const noexcept { return probs_; }

  std::int64_t sample(Rng& rng) const;

  /// Round-trips through parse_edge_law: "det:K", "geom:Q", "explicit:p1,p2,...".
  std::string label() const;

 private:
  EdgeCountDistribution() = default;
  void finish();
  friend EdgeCountDistribution validate_edge_law(const RawEdgeLaw& raw);

  LawKind kind_ = LawKind::Deterministic;
  std::vector<double> probs_;
  std::vector<double> cdf_;
  std::int64_t point_ = 1;
  double success_ = 0.0;
  double mean_ = 1.0;
  std::int64_t lattice_ = 1;
};

/// Group-size law for vertex grouping; same representation.
using GroupingLaw = EdgeCountDistribution;

/// Checks the standing assumptions (positive integer support, normalized,
/// finite mean) and returns the normalized law with its mean cached.
EdgeCountDistribution validate_edge_law(const RawEdgeLaw& raw);

/// Parses "det:K", "geom:Q" or "explicit:p1,p2,..." into a raw law.
RawEdgeLaw parse_raw_edge_law(std::string_view text);

inline EdgeCountDistribution parse_edge_law(std::string_view text) {
  return validate_edge_law(parse_raw_edge_law(text));
}

}  // namespace pagraph
