#include "pagraph/branching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>

#include "pagraph/error.hpp"
#include "pagraph/series.hpp"

namespace pagraph {

namespace {

std::int64_t draw_initial(const BranchingConfig& config, Rng& rng) {
  if (config.initial.kind == InitialLaw::Kind::EdgeLaw) return config.edge_law.sample(rng);
  if (config.initial.value < 1) throw Error(ErrorCode::RangeError, "initial value must be >= 1");
  return config.initial.value;
}

void check_horizon(double horizon) {
  if (!(horizon >= 0.0) || !std::isfinite(horizon)) {
    throw Error(ErrorCode::RangeError, "horizon must be finite and >= 0");
  }
}

// Jump chain with holding rate size + immigration_rate, jumps X ~ edge law.
JumpPath jump_chain(const EdgeCountDistribution& law, double immigration_rate, std::int64_t start,
                    double horizon, Rng& rng) {
  JumpPath path;
  path.initial = start;
  path.horizon = horizon;
  std::int64_t size = start;
  double t = 0.0;
  while (true) {
    t += rng.exponential(static_cast<double>(size) + immigration_rate);
    if (t > horizon) break;
    size += law.sample(rng);
    path.times.push_back(t);
    path.values.push_back(size);
  }
  return path;
}

}  // namespace

std::int64_t JumpPath::value_at(double t) const {
  const auto it = std::upper_bound(times.begin(), times.end(), t);
  if (it == times.begin()) return initial;
  return values[static_cast<std::size_t>(it - times.begin()) - 1];
}

JumpPath simulate_mbp(const BranchingConfig& config, double horizon, Rng& rng) {
  if (config.beta != 0.0) {
    throw Error(ErrorCode::RangeError, "pure branching requires beta = 0");
  }
  check_horizon(horizon);
  return jump_chain(config.edge_law, 0.0, draw_initial(config, rng), horizon, rng);
}

JumpPath simulate_mbpi(const BranchingConfig& config, double horizon, Rng& rng,
                       Representation representation) {
  if (!(config.beta >= 0.0)) throw Error(ErrorCode::RangeError, "beta must be >= 0");
  check_horizon(horizon);
  const std::int64_t start = draw_initial(config, rng);
  if (representation == Representation::JumpChain) {
    return jump_chain(config.edge_law, config.beta, start, horizon, rng);
  }

  // Literal superposition: the founding copy plus one independent copy per
  // Poisson arrival, each shifted to its arrival time.
  struct Increment {
    double time;
    std::int64_t delta;
  };
  std::vector<Increment> events;
  auto add_copy = [&](double offset, std::int64_t copy_start, bool arrival) {
    if (arrival) events.push_back({offset, copy_start});
    const JumpPath copy = jump_chain(config.edge_law, 0.0, copy_start, horizon - offset, rng);
    std::int64_t prev = copy_start;
    for (std::size_t k = 0; k < copy.times.size(); ++k) {
      events.push_back({offset + copy.times[k], copy.values[k] - prev});
      prev = copy.values[k];
    }
  };
  add_copy(0.0, start, false);
  if (config.beta > 0.0) {
    double arrival = 0.0;
    while (true) {
      arrival += rng.exponential(config.beta);
      if (arrival > horizon) break;
      add_copy(arrival, config.edge_law.sample(rng), true);
    }
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const Increment& a, const Increment& b) { return a.time < b.time; });

  JumpPath path;
  path.initial = start;
  path.horizon = horizon;
  path.times.reserve(events.size());
  path.values.reserve(events.size());
  std::int64_t size = start;
  for (const auto& e : events) {
    size += e.delta;
    path.times.push_back(e.time);
    path.values.push_back(size);
  }
  return path;
}

EmbeddingRun run_embedding(const EdgeCountDistribution& edge_law, double beta, std::int64_t n,
                           Rng& rng) {
  if (n < 0) throw Error(ErrorCode::RangeError, "n must be >= 0");
  if (!(beta >= 0.0)) throw Error(ErrorCode::RangeError, "beta must be >= 0");

  EmbeddingRun run;
  run.beta = beta;
  run.sizes = {1, 1};
  run.start_times = {0.0, 0.0};
  run.total_size = 2;
  run.taus.reserve(static_cast<std::size_t>(n));
  run.chosen.reserve(static_cast<std::size_t>(n));
  run.increments.reserve(static_cast<std::size_t>(n));
  run.s_series.reserve(static_cast<std::size_t>(n) + 1);
  run.s_series.push_back(s_value(run.total_size, 0, beta));

  struct Clock {
    double time;
    std::int64_t process;
    bool operator>(const Clock& other) const {
      return time > other.time || (time == other.time && process > other.process);
    }
  };
  std::priority_queue<Clock, std::vector<Clock>, std::greater<>> clocks;
  auto rate = [&](std::int64_t process) {
    return static_cast<double>(run.sizes[static_cast<std::size_t>(process - 1)]) + beta;
  };
  clocks.push({rng.exponential(rate(1)), 1});
  clocks.push({rng.exponential(rate(2)), 2});

  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  for (std::int64_t event = 1; event <= n; ++event) {
    const Clock next = clocks.top();
    clocks.pop();
    const std::int64_t x = edge_law.sample(rng);
    if (x > (kMax - run.total_size) / 2) {
      throw Error(ErrorCode::OverflowGuard, "total size would exceed 64-bit range");
    }
    run.sizes[static_cast<std::size_t>(next.process - 1)] += x;
    run.total_size += 2 * x;
    run.taus.push_back(next.time);
    run.chosen.push_back(next.process);
    run.increments.push_back(x);
    run.s_series.push_back(s_value(run.total_size, event, beta));

    // Memorylessness: only the process that jumped needs a fresh clock.
    clocks.push({next.time + rng.exponential(rate(next.process)), next.process});
    run.sizes.push_back(x);
    run.start_times.push_back(next.time);
    const auto fresh = static_cast<std::int64_t>(run.sizes.size());
    clocks.push({next.time + rng.exponential(rate(fresh)), fresh});
  }
  return run;
}

TauDiagnostics tau_diagnostics(const std::vector<double>& taus, const std::vector<double>& s_series,
                               double m, double beta) {
  if (taus.empty()) throw Error(ErrorCode::SeriesTooShort, "tau series is empty");
  if (s_series.size() != taus.size() && s_series.size() != taus.size() + 1) {
    throw Error(ErrorCode::MismatchedLengths,
                "expected " + std::to_string(taus.size()) + " or " +
                    std::to_string(taus.size() + 1) + " S values, got " +
                    std::to_string(s_series.size()));
  }
  if (!(m > 0.0)) throw Error(ErrorCode::NonPositiveMean, "mean edge count must be > 0");

  TauDiagnostics out;
  out.alpha = 1.0 / (2.0 * m + beta);
  out.martingale_residual.resize(taus.size());
  out.log_drift_residual.resize(taus.size());
  double compensator = 0.0;
  for (std::size_t k = 0; k < taus.size(); ++k) {
    compensator += 1.0 / s_series[k];
    out.martingale_residual[k] = taus[k] - compensator;
    out.log_drift_residual[k] = taus[k] - out.alpha * std::log(static_cast<double>(k + 1));
  }
  out.martingale_tail_oscillation = spread(trailing(out.martingale_residual, 0.5));
  out.log_drift_tail_oscillation = spread(trailing(out.log_drift_residual, 0.5));
  return out;
}

ZetaTrajectory zeta_trajectory(const JumpPath& path, double m, double tail_from) {
  if (!(m > 0.0)) throw Error(ErrorCode::NonPositiveMean, "growth rate m must be > 0");
  ZetaTrajectory out;
  out.times.reserve(path.times.size() + 1);
  out.scaled.reserve(path.times.size() + 1);
  out.times.push_back(0.0);
  out.scaled.push_back(static_cast<double>(path.initial));
  for (std::size_t k = 0; k < path.times.size(); ++k) {
    out.times.push_back(path.times[k]);
    out.scaled.push_back(static_cast<double>(path.values[k]) * std::exp(-m * path.times[k]));
  }
  const auto first = std::lower_bound(out.times.begin(), out.times.end(), tail_from);
  const auto offset = static_cast<std::size_t>(first - out.times.begin());
  std::span<const double> tail(out.scaled);
  tail = offset < out.scaled.size() ? tail.subspan(offset) : tail.last(1);
  out.tail_level = mean_of(tail);
  out.tail_oscillation = out.tail_level > 0.0 ? spread(tail) / out.tail_level : 0.0;
  return out;
}

}  // namespace pagraph
