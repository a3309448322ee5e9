#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "pagraph/edge_law.hpp"
#include "pagraph/rng.hpp"

namespace pagraph {

/// 1-based vertex label; v1 and v2 are the two initial vertices.
using Vertex = std::int64_t;

struct ModelConfig {
  double beta = 0.0;
  EdgeCountDistribution edge_law = EdgeCountDistribution::deterministic(1);
  std::int64_t n = 0;
  std::vector<Vertex> probe_vertices;
  std::int64_t record_stride = 1;
  /// Steps at which the full degree histogram R_j(n) is copied out.
  std::vector<std::int64_t> snapshot_steps;
  std::uint64_t seed = 0;
};

/// Throws RangeError naming the offending field.
void validate(const ModelConfig& config);

// Degree bookkeeping for the growing tree. Vertex i appears exactly d_i times
// in the endpoint list, so a uniform endpoint is a degree-proportional vertex.
class DegreeLedger {
 public:
  /// Two vertices joined by one edge.
  DegreeLedger();

  /// Ledger over an arbitrary degree sequence (all entries >= 1). Endpoints
  /// are laid out vertex by vertex.
  static DegreeLedger from_degrees(std::vector<std::int64_t> degrees, std::int64_t step);

  std::int64_t step() const noexcept { return step_; }
  std::int64_t num_vertices() const noexcept { return static_cast<std::int64_t>(degrees_.size()); }
  std::int64_t degree(Vertex v) const { return degrees_.at(static_cast<std::size_t>(v - 1)); }
  /// Entry k is the degree of vertex k+1.
  std::span<const std::int64_t> degrees() const noexcept { return degrees_; }
  std::span<const Vertex> endpoints() const noexcept { return endpoints_; }
  std::int64_t total_degree() const noexcept { return total_degree_; }
  std::int64_t max_degree() const noexcept { return max_degree_; }
  /// Smallest index attaining max_degree().
  Vertex argmax() const noexcept { return argmax_; }

  /// R_j: number of vertices of degree j.
  std::int64_t count(std::int64_t j) const noexcept;
  /// Nonzero R_j keyed by j.
  std::map<std::int64_t, std::int64_t> counts() const;
  /// Dense R_j indexed by j (entry 0 unused).
  std::span<const std::int64_t> dense_counts() const noexcept { return counts_; }

  /// Joins a new vertex to `chosen` with `x` parallel edges.
  void attach(Vertex chosen, std::int64_t x);

  /// Full O(total degree) consistency scan; returns false on any violation.
  bool consistent() const;

  bool operator==(const DegreeLedger&) const = default;

 private:
  void bump_count(std::int64_t from, std::int64_t to);

  std::vector<std::int64_t> degrees_;
  std::vector<Vertex> endpoints_;
  std::vector<std::int64_t> counts_;
  std::int64_t total_degree_ = 0;
  std::int64_t step_ = 0;
  std::int64_t max_degree_ = 0;
  Vertex argmax_ = 1;

  friend DegreeLedger group_ledger(const DegreeLedger&, std::span<const std::int64_t>);
};

struct StepOutcome {
  Vertex chosen_vertex;
  std::int64_t x;
  Vertex new_vertex;
};

/// Ledger after zero steps; config only needs to be valid.
DegreeLedger init_graph(const ModelConfig& config);

/// Draws a vertex with probability (d_i + beta) / sum_j (d_j + beta) without
/// modifying the ledger. With probability T / (T + N*beta) (T total degree,
/// N vertices) a uniform endpoint is returned, otherwise a uniform vertex.
Vertex select_vertex(const DegreeLedger& ledger, double beta, Rng& rng);

/// One growth step: select, draw X, attach.
StepOutcome attach_step(DegreeLedger& ledger, double beta, const EdgeCountDistribution& edge_law,
                        Rng& rng);

struct TrajectoryPoint {
  std::int64_t n;
  Vertex vertex;
  std::int64_t degree;

  bool operator==(const TrajectoryPoint&) const = default;
};

struct MaxPoint {
  std::int64_t n;
  std::int64_t max_degree;
  Vertex argmax;

  bool operator==(const MaxPoint&) const = default;
};

struct CountSnapshot {
  std::int64_t n;
  std::map<std::int64_t, std::int64_t> counts;

  bool operator==(const CountSnapshot&) const = default;
};

struct RunResult {
  double beta = 0.0;
  DegreeLedger ledger;
  std::vector<TrajectoryPoint> trajectories;
  /// M_n and I_n at every recorded step.
  std::vector<MaxPoint> max_series;
  /// Every step at which I_n changed, starting with (0, M_0, I_0).
  std::vector<MaxPoint> argmax_changes;
  std::vector<CountSnapshot> snapshots;
  /// Sum of all drawn edge counts X_1..X_n.
  std::int64_t edge_sum = 0;

  bool operator==(const RunResult&) const = default;
};

/// Runs n steps from the initial graph on the stream
/// Rng(stream_seed(config.seed, 0)), i.e. replicate 0 of config.seed.
/// Trajectories and M_n/I_n are recorded at multiples of record_stride and at n.
RunResult run_chain(const ModelConfig& config);

/// Same as run_chain but draws from the supplied stream (config.seed unused).
RunResult run_chain(const ModelConfig& config, Rng& rng);

/// Merges consecutive tree vertices v3, v4, ... into groups of sizes
/// L1, L2, ... drawn from `grouping`; v1 and v2 stay as they are. A trailing
/// incomplete group is dropped. Requires the run to have beta == 0.
DegreeLedger group_vertices(const RunResult& run, const GroupingLaw& grouping, Rng& rng);

/// Deterministic part of group_vertices for given group sizes.
DegreeLedger group_ledger(const DegreeLedger& ledger, std::span<const std::int64_t> group_sizes);

}  // namespace pagraph
