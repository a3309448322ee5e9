#include "pagraph/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "pagraph/error.hpp"

namespace pagraph {

using nlohmann::json;

bool ReportDocument::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

bool compare(double value, const std::string& comparison, double threshold) {
  if (comparison == "<") return value < threshold;
  if (comparison == "<=") return value <= threshold;
  if (comparison == ">") return value > threshold;
  if (comparison == ">=") return value >= threshold;
  if (comparison == "==") return value == threshold;
  throw Error(ErrorCode::RangeError, "unknown comparison '" + comparison + "'");
}

std::string format_short(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", value);
  std::string s = buf;
  if (s == "-0.000000") s = "0.000000";
  const auto dot = s.find('.');
  if (dot == std::string::npos) return s;
  auto last = s.find_last_not_of('0');
  if (last == dot) ++last;
  return s.substr(0, last + 1);
}

std::string format_full(double value) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

namespace {

std::ofstream open_for_write(const std::filesystem::path& path) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create " + path.parent_path().string());
  }
  std::ofstream out(path, std::ios::out | std::ios::trunc);
  if (!out) throw Error(ErrorCode::IoError, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw Error(ErrorCode::IoError, "write to " + path.string() + " failed");
}

std::string scaled_or_blank(double value, std::int64_t n, double theta) {
  if (n < 1) return "";
  return format_short(value / std::pow(static_cast<double>(n), theta));
}

}  // namespace

void write_degree_distribution(const std::filesystem::path& path, const EmpiricalDistribution& emp,
                               const LimitSpectrum* spectrum) {
  auto out = open_for_write(path);
  out << "j,count,empirical,theoretical,abs_error\n";
  for (std::int64_t j = 1; j <= emp.support_max; ++j) {
    const auto it = emp.counts.find(j);
    const std::int64_t count = it == emp.counts.end() ? 0 : it->second;
    const double freq = emp.at(j);
    out << j << ',' << count << ',' << format_short(freq) << ',';
    if (spectrum && j <= spectrum->j_max()) {
      out << format_short(spectrum->at(j)) << ',' << format_short(std::abs(freq - spectrum->at(j)));
    } else {
      out << ',';
    }
    out << '\n';
  }
  finish(out, path);
}

void write_trajectories(const std::filesystem::path& path, const RunResult& run, double theta) {
  auto out = open_for_write(path);
  out << "n,vertex,degree,scaled\n";
  for (const auto& p : run.trajectories) {
    out << p.n << ',' << p.vertex << ',' << p.degree << ','
        << scaled_or_blank(static_cast<double>(p.degree), p.n, theta) << '\n';
  }
  finish(out, path);
}

void write_max_degree(const std::filesystem::path& path, const RunResult& run, double theta) {
  auto out = open_for_write(path);
  out << "n,M_n,I_n,scaled\n";
  for (const auto& p : run.max_series) {
    out << p.n << ',' << p.max_degree << ',' << p.argmax << ','
        << scaled_or_blank(static_cast<double>(p.max_degree), p.n, theta) << '\n';
  }
  finish(out, path);
}

void write_tau(const std::filesystem::path& path, const std::vector<double>& taus,
               const TauDiagnostics& diagnostics) {
  if (diagnostics.martingale_residual.size() != taus.size()) {
    throw Error(ErrorCode::MismatchedLengths, "tau diagnostics do not match the tau series");
  }
  auto out = open_for_write(path);
  out << "n,tau,martingale_residual,log_drift_residual\n";
  for (std::size_t k = 0; k < taus.size(); ++k) {
    out << k + 1 << ',' << format_full(taus[k]) << ',' << format_full(diagnostics.martingale_residual[k])
        << ',' << format_full(diagnostics.log_drift_residual[k]) << '\n';
  }
  finish(out, path);
}

void write_pi(const std::filesystem::path& path, const LimitSpectrum& recursive,
              const QuadratureResult* quadrature, std::optional<std::int64_t> explicit_x0) {
  auto out = open_for_write(path);
  out << "j,pi_recursive,pi_quadrature,pi_explicit_or_blank\n";
  for (std::int64_t j = 1; j <= recursive.j_max(); ++j) {
    out << j << ',' << format_full(recursive.at(j)) << ',';
    if (quadrature && static_cast<std::size_t>(j) <= quadrature->pi.size()) {
      out << format_full(quadrature->pi[static_cast<std::size_t>(j - 1)]);
    }
    out << ',';
    if (explicit_x0) out << format_full(pi_explicit(*explicit_x0, recursive.beta, j));
    out << '\n';
  }
  finish(out, path);
}

json to_json(const ExperimentConfig& config) {
  json model = {
      {"law", config.model.edge_law.label()},
      {"beta", config.model.beta},
      {"n", config.model.n},
      {"seed", config.model.seed},
      {"record_stride", config.model.record_stride},
      {"probe_vertices", config.model.probe_vertices},
  };
  json options = {
      {"jmax", config.j_max},
      {"quadrature_steps", config.quadrature_steps},
      {"fit_j_min", config.fit_j_min},
      {"fit_j_max", config.fit_j_max},
      {"thresholds", config.thresholds},
  };
  if (config.y_max) options["y_max"] = *config.y_max;
  return {
      {"model", model},
      {"replications", config.replications},
      {"parallelism", config.parallelism},
      {"outputs", config.outputs.string()},
      {"profile", to_string(config.profile)},
      {"options", options},
  };
}

namespace {

// JSON has no infinities or NaN; those are written as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

}  // namespace

json to_json(const ReportDocument& report) {
  json checks = json::array();
  for (const auto& c : report.checks) {
    checks.push_back({
        {"criterion", c.criterion},
        {"name", c.name},
        {"anchor", c.anchor},
        {"value", number(c.value)},
        {"comparison", c.comparison},
        {"threshold", number(c.threshold)},
        {"pass", c.pass},
        {"detail", c.detail},
    });
  }
  return {
      {"config", report.config},
      {"checks", checks},
      {"environment",
       {{"version", report.version}, {"master_seed", report.master_seed}, {"profile", report.profile}}},
      {"pass", report.pass()},
  };
}

void write_report(const std::filesystem::path& path, const ReportDocument& report) {
  auto out = open_for_write(path);
  out << to_json(report).dump(2) << '\n';
  finish(out, path);
}

}  // namespace pagraph
