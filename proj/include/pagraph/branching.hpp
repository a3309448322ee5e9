#pragma once

#include <cstdint>
#include <vector>

#include "pagraph/edge_law.hpp"
#include "pagraph/rng.hpp"

namespace pagraph {

struct InitialLaw {
  enum class Kind { Fixed, EdgeLaw };
  Kind kind = Kind::Fixed;
  std::int64_t value = 1;
};

// Markov branching process with unit lifetime rate. A particle death leaves
// k+1 offspring (net +k) with probability p_k; immigrant batches arrive at
// rate beta with size ~ {p_j}.
struct BranchingConfig {
  EdgeCountDistribution edge_law = EdgeCountDistribution::deterministic(1);
  double beta = 0.0;
  InitialLaw initial;
};

struct JumpPath {
  std::int64_t initial = 1;
  std::vector<double> times;
  /// Population size right after each event.
  std::vector<std::int64_t> values;
  double horizon = 0.0;

  /// Size at time t (right-continuous), t in [0, horizon].
  std::int64_t value_at(double t) const;
  std::int64_t final_value() const { return values.empty() ? initial : values.back(); }
};

enum class Representation { Superposition, JumpChain };

/// Pure branching path (config.beta must be 0), truncated at the last event
/// not after `horizon`.
JumpPath simulate_mbp(const BranchingConfig& config, double horizon, Rng& rng);

/// Branching with immigration. Superposition starts an independent copy of
/// the pure process at each Poisson(beta) arrival; JumpChain holds for an
/// Exponential(i + beta) time in state i and jumps by X ~ {p_j}.
JumpPath simulate_mbpi(const BranchingConfig& config, double horizon, Rng& rng,
                       Representation representation);

// The embedded system after n global events. Processes are indexed 1..n+2;
// process j was started at start_times[j-1] (= tau_{j-2}).
struct EmbeddingRun {
  double beta = 0.0;
  std::vector<std::int64_t> sizes;
  std::vector<double> start_times;
  /// tau_1 .. tau_n.
  std::vector<double> taus;
  /// Process owning each global event.
  std::vector<std::int64_t> chosen;
  /// Net addition X_k at each event.
  std::vector<std::int64_t> increments;
  /// S_0 .. S_n.
  std::vector<double> s_series;
  std::int64_t total_size = 0;
};

/// Runs the embedding for n global events using independent per-process
/// exponential clocks merged through a priority queue.
EmbeddingRun run_embedding(const EdgeCountDistribution& edge_law, double beta, std::int64_t n,
                           Rng& rng);

/// S_n = 2 + 2 beta + 2 sum X + n beta, from the integer total 2 + 2 sum X.
inline double s_value(std::int64_t total_size, std::int64_t events, double beta) {
  return static_cast<double>(total_size) + static_cast<double>(events + 2) * beta;
}

struct TauDiagnostics {
  double alpha = 0.0;
  /// tau_n - sum_{j<=n} 1/S_{j-1}, indexed by n-1.
  std::vector<double> martingale_residual;
  /// tau_n - alpha log n, indexed by n-1.
  std::vector<double> log_drift_residual;
  /// max - min over the last half of indices.
  double martingale_tail_oscillation = 0.0;
  double log_drift_tail_oscillation = 0.0;
};

/// `s_series` must hold S_0..S_{n-1} or S_0..S_n for n = taus.size().
TauDiagnostics tau_diagnostics(const std::vector<double>& taus, const std::vector<double>& s_series,
                               double m, double beta);

struct ZetaTrajectory {
  std::vector<double> times;
  std::vector<double> scaled;
  /// (max - min) / mean of the scaled values at times >= tail_from.
  double tail_oscillation = 0.0;
  double tail_level = 0.0;
};

/// D(t) e^{-mt} at t = 0 and at each event time.
ZetaTrajectory zeta_trajectory(const JumpPath& path, double m, double tail_from);

}  // namespace pagraph
