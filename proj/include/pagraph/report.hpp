#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "pagraph/analysis.hpp"
#include "pagraph/branching.hpp"
#include "pagraph/experiment.hpp"
#include "pagraph/graph.hpp"
#include "pagraph/theory.hpp"

namespace pagraph {

inline constexpr const char* kVersion = "1.0.0";

struct Check {
  std::string criterion;  ///< Acceptance criterion id, "C1".."C10".
  std::string name;
  std::string anchor;     ///< Result of the source theory this check exercises.
  double value = 0.0;
  std::string comparison;  ///< "<", "<=", ">", ">=", "==".
  double threshold = 0.0;
  bool pass = false;
  std::string detail;
};

struct ReportDocument {
  nlohmann::json config;
  std::vector<Check> checks;
  std::string version = kVersion;
  std::uint64_t master_seed = 0;
  std::string profile;

  bool pass() const;
};

/// Evaluates `value comparison threshold`.
bool compare(double value, const std::string& comparison, double threshold);

nlohmann::json to_json(const ExperimentConfig& config);
nlohmann::json to_json(const ReportDocument& report);

/// Six decimals with trailing zeros stripped, keeping one: 1 -> "1.0".
std::string format_short(double value);
/// Round-trip precision.
std::string format_full(double value);

// All writers truncate and rewrite the target; failures raise IoError.

/// j,count,empirical,theoretical,abs_error for j = 1..support_max. The
/// theoretical columns are blank where the spectrum does not reach.
void write_degree_distribution(const std::filesystem::path& path, const EmpiricalDistribution& emp,
                               const LimitSpectrum* spectrum);

/// n,vertex,degree,scaled with scaled = degree / n^theta (blank at n = 0).
void write_trajectories(const std::filesystem::path& path, const RunResult& run, double theta);

/// n,M_n,I_n,scaled.
void write_max_degree(const std::filesystem::path& path, const RunResult& run, double theta);

/// n,tau,martingale_residual,log_drift_residual.
void write_tau(const std::filesystem::path& path, const std::vector<double>& taus,
               const TauDiagnostics& diagnostics);

/// j,pi_recursive,pi_quadrature,pi_explicit_or_blank.
void write_pi(const std::filesystem::path& path, const LimitSpectrum& recursive,
              const QuadratureResult* quadrature, std::optional<std::int64_t> explicit_x0);

void write_report(const std::filesystem::path& path, const ReportDocument& report);

}  // namespace pagraph
