#include "pagraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pagraph/error.hpp"

namespace pagraph {

void validate(const ModelConfig& config) {
  if (!(config.beta >= 0.0) || !std::isfinite(config.beta)) {
    throw Error(ErrorCode::RangeError, "model.beta must be finite and >= 0");
  }
  if (config.n < 0) throw Error(ErrorCode::RangeError, "model.n must be >= 0");
  if (config.record_stride < 1) throw Error(ErrorCode::RangeError, "model.record_stride must be >= 1");
  for (const Vertex v : config.probe_vertices) {
    if (v < 1) throw Error(ErrorCode::RangeError, "model.probe_vertices entries must be >= 1");
  }
  for (const auto s : config.snapshot_steps) {
    if (s < 0) throw Error(ErrorCode::RangeError, "model.snapshot_steps entries must be >= 0");
  }
}

DegreeLedger::DegreeLedger()
    : degrees_{1, 1}, endpoints_{1, 2}, counts_{0, 2}, total_degree_(2), step_(0),
      max_degree_(1), argmax_(1) {}

DegreeLedger DegreeLedger::from_degrees(std::vector<std::int64_t> degrees, std::int64_t step) {
  DegreeLedger ledger;
  ledger.degrees_ = std::move(degrees);
  ledger.endpoints_.clear();
  ledger.total_degree_ = 0;
  ledger.max_degree_ = 0;
  ledger.argmax_ = 1;
  ledger.step_ = step;
  for (std::size_t k = 0; k < ledger.degrees_.size(); ++k) {
    const auto d = ledger.degrees_[k];
    if (d < 1) throw Error(ErrorCode::RangeError, "degrees must be >= 1");
    ledger.endpoints_.insert(ledger.endpoints_.end(), static_cast<std::size_t>(d),
                             static_cast<Vertex>(k) + 1);
    ledger.total_degree_ += d;
    if (d > ledger.max_degree_) {
      ledger.max_degree_ = d;
      ledger.argmax_ = static_cast<Vertex>(k) + 1;
    }
  }
  ledger.counts_.assign(static_cast<std::size_t>(ledger.max_degree_) + 1, 0);
  for (const auto d : ledger.degrees_) ++ledger.counts_[static_cast<std::size_t>(d)];
  return ledger;
}

std::int64_t DegreeLedger::count(std::int64_t j) const noexcept {
  if (j < 0 || static_cast<std::size_t>(j) >= counts_.size()) return 0;
  return counts_[static_cast<std::size_t>(j)];
}

std::map<std::int64_t, std::int64_t> DegreeLedger::counts() const {
  std::map<std::int64_t, std::int64_t> out;
  for (std::size_t j = 1; j < counts_.size(); ++j) {
    if (counts_[j] != 0) out.emplace(static_cast<std::int64_t>(j), counts_[j]);
  }
  return out;
}

void DegreeLedger::bump_count(std::int64_t from, std::int64_t to) {
  if (static_cast<std::size_t>(to) >= counts_.size()) counts_.resize(static_cast<std::size_t>(to) + 1, 0);
  if (from > 0) --counts_[static_cast<std::size_t>(from)];
  ++counts_[static_cast<std::size_t>(to)];
}

void DegreeLedger::attach(Vertex chosen, std::int64_t x) {
  constexpr auto kMax = std::numeric_limits<std::int64_t>::max();
  if (x > (kMax - total_degree_) / 2 || num_vertices() == kMax) {
    throw Error(ErrorCode::OverflowGuard, "total degree would exceed 64-bit range at step " +
                                              std::to_string(step_ + 1));
  }
  const Vertex fresh = num_vertices() + 1;
  auto& slot = degrees_.at(static_cast<std::size_t>(chosen - 1));
  const auto old = slot;
  const auto d = old + x;
  slot = d;
  bump_count(old, d);
  degrees_.push_back(x);
  bump_count(0, x);

  endpoints_.insert(endpoints_.end(), static_cast<std::size_t>(x), chosen);
  endpoints_.insert(endpoints_.end(), static_cast<std::size_t>(x), fresh);
  total_degree_ += 2 * x;
  ++step_;

  if (d > max_degree_ || (d == max_degree_ && chosen < argmax_)) {
    max_degree_ = d;
    argmax_ = chosen;
  }
  if (x > max_degree_) {
    max_degree_ = x;
    argmax_ = fresh;
  }
}

bool DegreeLedger::consistent() const {
  std::vector<std::int64_t> multiplicity(degrees_.size(), 0);
  for (const Vertex v : endpoints_) {
    if (v < 1 || v > num_vertices()) return false;
    ++multiplicity[static_cast<std::size_t>(v - 1)];
  }
  if (multiplicity != degrees_) return false;

  std::int64_t total = 0;
  std::int64_t best = 0;
  Vertex best_at = 1;
  std::vector<std::int64_t> counts(counts_.size(), 0);
  for (std::size_t k = 0; k < degrees_.size(); ++k) {
    const auto d = degrees_[k];
    if (d < 1 || static_cast<std::size_t>(d) >= counts.size()) return false;
    total += d;
    ++counts[static_cast<std::size_t>(d)];
    if (d > best) {
      best = d;
      best_at = static_cast<Vertex>(k) + 1;
    }
  }
  std::int64_t weighted = 0;
  std::int64_t vertices = 0;
  for (std::size_t j = 0; j < counts_.size(); ++j) {
    weighted += static_cast<std::int64_t>(j) * counts_[j];
    vertices += counts_[j];
  }
  return counts == counts_ && total == total_degree_ &&
         total == static_cast<std::int64_t>(endpoints_.size()) && weighted == total &&
         vertices == num_vertices() && best == max_degree_ && best_at == argmax_;
}

DegreeLedger init_graph(const ModelConfig& config) {
  validate(config);
  return DegreeLedger{};
}

Vertex select_vertex(const DegreeLedger& ledger, double beta, Rng& rng) {
  const auto total = ledger.total_degree();
  const auto vertices = ledger.num_vertices();
  if (beta > 0.0) {
    const double degree_share = static_cast<double>(total) /
                                (static_cast<double>(total) + static_cast<double>(vertices) * beta);
    if (!rng.bernoulli(degree_share)) {
      return static_cast<Vertex>(rng.index(static_cast<std::uint64_t>(vertices))) + 1;
    }
  }
  return ledger.endpoints()[rng.index(static_cast<std::uint64_t>(total))];
}

StepOutcome attach_step(DegreeLedger& ledger, double beta, const EdgeCountDistribution& edge_law,
                        Rng& rng) {
  const Vertex chosen = select_vertex(ledger, beta, rng);
  const std::int64_t x = edge_law.sample(rng);
  ledger.attach(chosen, x);
  return {chosen, x, ledger.num_vertices()};
}

namespace {

void record(const ModelConfig& config, const DegreeLedger& ledger, RunResult& result) {
  const auto n = ledger.step();
  for (const Vertex v : config.probe_vertices) {
    if (v <= ledger.num_vertices()) result.trajectories.push_back({n, v, ledger.degree(v)});
  }
  result.max_series.push_back({n, ledger.max_degree(), ledger.argmax()});
}

}  // namespace

RunResult run_chain(const ModelConfig& config) {
  Rng rng(stream_seed(config.seed, 0));
  return run_chain(config, rng);
}

RunResult run_chain(const ModelConfig& config, Rng& rng) {
  validate(config);
  RunResult result;
  result.beta = config.beta;
  auto& ledger = result.ledger;

  std::vector<std::int64_t> snapshot_steps = config.snapshot_steps;
  std::sort(snapshot_steps.begin(), snapshot_steps.end());
  snapshot_steps.erase(std::unique(snapshot_steps.begin(), snapshot_steps.end()), snapshot_steps.end());
  auto next_snapshot = snapshot_steps.begin();
  auto take_snapshots = [&] {
    while (next_snapshot != snapshot_steps.end() && *next_snapshot == ledger.step()) {
      result.snapshots.push_back({ledger.step(), ledger.counts()});
      ++next_snapshot;
    }
  };

  record(config, ledger, result);
  result.argmax_changes.push_back({0, ledger.max_degree(), ledger.argmax()});
  take_snapshots();

  for (std::int64_t step = 1; step <= config.n; ++step) {
    const Vertex before = ledger.argmax();
    const auto outcome = attach_step(ledger, config.beta, config.edge_law, rng);
    result.edge_sum += outcome.x;
    if (ledger.argmax() != before) {
      result.argmax_changes.push_back({step, ledger.max_degree(), ledger.argmax()});
    }
    if (step % config.record_stride == 0 || step == config.n) record(config, ledger, result);
    take_snapshots();
  }
  return result;
}

DegreeLedger group_ledger(const DegreeLedger& ledger, std::span<const std::int64_t> group_sizes) {
  // group_of[k] is the grouped label of vertex k+1, or 0 when dropped.
  std::vector<Vertex> group_of(static_cast<std::size_t>(ledger.num_vertices()), 0);
  std::vector<std::int64_t> degrees{ledger.degree(1), ledger.degree(2)};
  group_of[0] = 1;
  group_of[1] = 2;

  std::int64_t next = 3;
  for (const auto size : group_sizes) {
    if (next + size - 1 > ledger.num_vertices()) break;
    std::int64_t sum = 0;
    const auto label = static_cast<Vertex>(degrees.size()) + 1;
    for (std::int64_t v = next; v < next + size; ++v) {
      sum += ledger.degree(v);
      group_of[static_cast<std::size_t>(v - 1)] = label;
    }
    degrees.push_back(sum);
    next += size;
  }

  const auto groups = static_cast<std::int64_t>(degrees.size()) - 2;
  DegreeLedger out = DegreeLedger::from_degrees(std::move(degrees), groups);
  // Keep the original endpoint order so a one-to-one grouping is the identity.
  out.endpoints_.clear();
  for (const Vertex v : ledger.endpoints()) {
    const Vertex g = group_of[static_cast<std::size_t>(v - 1)];
    if (g != 0) out.endpoints_.push_back(g);
  }
  return out;
}

DegreeLedger group_vertices(const RunResult& run, const GroupingLaw& grouping, Rng& rng) {
  if (run.beta != 0.0) {
    throw Error(ErrorCode::BetaNotZero, "vertex grouping is only defined for runs with beta = 0");
  }
  const auto tree_vertices = run.ledger.num_vertices() - 2;
  std::vector<std::int64_t> sizes;
  std::int64_t covered = 0;
  while (covered < tree_vertices) {
    sizes.push_back(grouping.sample(rng));
    covered += sizes.back();
  }
  return group_ledger(run.ledger, sizes);
}

}  // namespace pagraph
