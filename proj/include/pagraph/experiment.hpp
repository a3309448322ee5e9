#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "pagraph/error.hpp"
#include "pagraph/graph.hpp"
#include "pagraph/rng.hpp"

namespace pagraph {

enum class Profile { Quick, Full, Theory };

std::string to_string(Profile profile);
Profile parse_profile(const std::string& text);

struct ExperimentConfig {
  ModelConfig model;
  std::int64_t replications = 1;
  std::int64_t parallelism = 1;
  std::filesystem::path outputs = ".";
  Profile profile = Profile::Quick;
  std::int64_t j_max = 1000;
  std::optional<double> y_max;
  std::int64_t quadrature_steps = 100000;
  std::int64_t fit_j_min = 3;
  std::int64_t fit_j_max = 30;
  /// Overrides for named verify thresholds.
  std::map<std::string, double> thresholds;
};

/// Command-line values; any field that is set overrides the config file.
struct FlagOverrides {
  std::optional<std::string> law;
  std::optional<double> beta;
  std::optional<std::int64_t> n;
  std::optional<std::int64_t> replications;
  std::optional<std::int64_t> parallelism;
  std::optional<std::uint64_t> seed;
  std::optional<std::int64_t> j_max;
  std::optional<std::int64_t> record_stride;
  std::optional<std::string> outputs;
  std::optional<std::string> profile;
  std::vector<Vertex> probes;
  std::vector<std::string> thresholds;  ///< "name=value"
};

/// Reads the optional JSON config file, applies flag overrides, fills
/// defaults and validates ranges. Throws ParseError or RangeError; range
/// errors name the field path (e.g. "model.beta").
ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const FlagOverrides& flags);

/// Same, from JSON text.
ExperimentConfig parse_config_text(const std::string& json_text, const FlagOverrides& flags);

/// Runs `task(index, rng)` for index = 0..count-1 on up to `parallelism`
/// workers. Replicate r draws from Rng(stream_seed(master_seed, r)), so the
/// returned vector (in index order) does not depend on the worker count.
/// The first failing index is rethrown as ReplicateFailed.
template <class Task>
auto replicate_map(std::int64_t count, std::int64_t parallelism, std::uint64_t master_seed,
                   Task task) -> std::vector<decltype(task(std::int64_t{}, std::declval<Rng&>()))> {
  using Value = decltype(task(std::int64_t{}, std::declval<Rng&>()));
  std::vector<std::optional<Value>> slots(static_cast<std::size_t>(count));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(count));
  std::atomic<std::int64_t> next{0};

  auto worker = [&] {
    for (std::int64_t r = next++; r < count; r = next++) {
      try {
        Rng rng(stream_seed(master_seed, static_cast<std::uint64_t>(r)));
        slots[static_cast<std::size_t>(r)].emplace(task(r, rng));
      } catch (...) {
        failures[static_cast<std::size_t>(r)] = std::current_exception();
      }
    }
  };
  const auto workers = std::clamp<std::int64_t>(parallelism, 1, std::max<std::int64_t>(count, 1));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::int64_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }

  for (std::size_t r = 0; r < failures.size(); ++r) {
    if (!failures[r]) continue;
    try {
      std::rethrow_exception(failures[r]);
    } catch (const std::exception& e) {
      throw Error(ErrorCode::ReplicateFailed, "replicate " + std::to_string(r) + ": " + e.what());
    }
  }
  std::vector<Value> out;
  out.reserve(slots.size());
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

enum class Task { Simulate, Embed };

struct ReplicateSummary {
  std::map<std::int64_t, std::int64_t> counts;
  std::int64_t total_degree = 0;
  std::int64_t max_degree = 0;
  Vertex argmax = 1;

  bool operator==(const ReplicateSummary&) const = default;
};

struct Aggregate {
  std::vector<ReplicateSummary> replicates;
  /// Sum of R_j over replicates.
  std::map<std::int64_t, std::int64_t> pooled_counts;
  std::int64_t pooled_total_degree = 0;

  bool operator==(const Aggregate&) const = default;
};

/// `replications` independent runs of the model (graph chain or embedding),
/// merged in replicate order.
Aggregate replicate(const ExperimentConfig& config, Task task);

}  // namespace pagraph
