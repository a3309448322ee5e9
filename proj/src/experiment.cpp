#include "pagraph/experiment.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "pagraph/branching.hpp"

namespace pagraph {

using nlohmann::json;

std::string to_string(Profile profile) {
  switch (profile) {
    case Profile::Quick: return "quick";
    case Profile::Full: return "full";
    case Profile::Theory: return "theory";
  }
  return "quick";
}

Profile parse_profile(const std::string& text) {
  if (text == "quick") return Profile::Quick;
  if (text == "full") return Profile::Full;
  if (text == "theory") return Profile::Theory;
  throw Error(ErrorCode::ParseError, "profile must be quick, full or theory; got '" + text + "'");
}

namespace {

template <class T>
T read_field(const json& obj, const char* key, const std::string& path, T fallback) {
  if (!obj.contains(key)) return fallback;
  try {
    return obj.at(key).get<T>();
  } catch (const json::exception&) {
    throw Error(ErrorCode::ParseError, "field '" + path + "' has the wrong type");
  }
}

void require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) throw Error(ErrorCode::RangeError, field + " " + rule);
}

}  // namespace

ExperimentConfig parse_config_text(const std::string& json_text, const FlagOverrides& flags) {
  json root = json::object();
  if (!json_text.empty()) {
    try {
      root = json::parse(json_text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw Error(ErrorCode::ParseError, "config root must be an object");
  }
  const json model = root.value("model", json::object());
  const json options = root.value("options", json::object());

  std::string law = read_field<std::string>(model, "law", "model.law", "det:1");
  double beta = read_field<double>(model, "beta", "model.beta", 0.0);
  std::int64_t n = read_field<std::int64_t>(model, "n", "model.n", 1000);
  std::uint64_t seed = read_field<std::uint64_t>(model, "seed", "model.seed", 0);
  std::optional<std::int64_t> stride;
  if (model.contains("record_stride")) {
    stride = read_field<std::int64_t>(model, "record_stride", "model.record_stride", 1);
  }
  std::vector<Vertex> probes =
      read_field<std::vector<Vertex>>(model, "probe_vertices", "model.probe_vertices", {1, 2});

  ExperimentConfig config;
  config.replications = read_field<std::int64_t>(root, "replications", "replications", 1);
  config.parallelism = read_field<std::int64_t>(root, "parallelism", "parallelism", 1);
  config.outputs = read_field<std::string>(root, "outputs", "outputs", ".");
  std::string profile = read_field<std::string>(root, "profile", "profile", "quick");
  config.j_max = read_field<std::int64_t>(options, "jmax", "options.jmax", 1000);
  if (options.contains("y_max")) config.y_max = read_field<double>(options, "y_max", "options.y_max", 0.0);
  config.quadrature_steps =
      read_field<std::int64_t>(options, "quadrature_steps", "options.quadrature_steps", 100000);
  config.fit_j_min = read_field<std::int64_t>(options, "fit_j_min", "options.fit_j_min", 3);
  config.fit_j_max = read_field<std::int64_t>(options, "fit_j_max", "options.fit_j_max", 30);
  config.thresholds = read_field<std::map<std::string, double>>(options, "thresholds",
                                                                "options.thresholds", {});

  if (flags.law) law = *flags.law;
  if (flags.beta) beta = *flags.beta;
  if (flags.n) n = *flags.n;
  if (flags.seed) seed = *flags.seed;
  if (flags.record_stride) stride = *flags.record_stride;
  if (!flags.probes.empty()) probes = flags.probes;
  if (flags.replications) config.replications = *flags.replications;
  if (flags.parallelism) config.parallelism = *flags.parallelism;
  if (flags.outputs) config.outputs = *flags.outputs;
  if (flags.profile) profile = *flags.profile;
  if (flags.j_max) config.j_max = *flags.j_max;
  for (const auto& item : flags.thresholds) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::ParseError, "threshold override must be name=value, got '" + item + "'");
    }
    try {
      config.thresholds[item.substr(0, eq)] = std::stod(item.substr(eq + 1));
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "threshold value in '" + item + "' is not a number");
    }
  }

  require(std::isfinite(beta) && beta >= 0.0, "model.beta", "must be finite and >= 0");
  require(n >= 0, "model.n", "must be >= 0");
  require(!stride || *stride >= 1, "model.record_stride", "must be >= 1");
  for (const Vertex v : probes) require(v >= 1, "model.probe_vertices", "entries must be >= 1");
  require(config.replications >= 1, "replications", "must be >= 1");
  require(config.parallelism >= 1, "parallelism", "must be >= 1");
  require(config.j_max >= 1, "options.jmax", "must be >= 1");
  require(!config.y_max || *config.y_max >= 0.0, "options.y_max", "must be >= 0");
  require(config.quadrature_steps >= 1000, "options.quadrature_steps", "must be >= 1000");
  require(config.fit_j_min >= 1 && config.fit_j_max > config.fit_j_min, "options.fit_j_min",
          "must satisfy 1 <= fit_j_min < fit_j_max");

  config.model.edge_law = parse_edge_law(law);
  config.model.beta = beta;
  config.model.n = n;
  config.model.seed = seed;
  config.model.record_stride = stride.value_or(std::max<std::int64_t>(1, n / 1000));
  config.model.probe_vertices = probes;
  config.profile = parse_profile(profile);
  return config;
}

ExperimentConfig parse_config(const std::optional<std::filesystem::path>& file,
                              const FlagOverrides& flags) {
  std::string text;
  if (file) {
    std::ifstream in(*file);
    if (!in) throw Error(ErrorCode::IoError, "cannot open config file " + file->string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    text = buffer.str();
  }
  return parse_config_text(text, flags);
}

Aggregate replicate(const ExperimentConfig& config, Task task) {
  const auto& model = config.model;
  auto summaries = replicate_map(
      config.replications, config.parallelism, model.seed, [&](std::int64_t, Rng& rng) {
        ReplicateSummary s;
        if (task == Task::Simulate) {
          ModelConfig quiet = model;
          quiet.probe_vertices.clear();
          quiet.snapshot_steps.clear();
          quiet.record_stride = std::max<std::int64_t>(1, model.n);
          const auto run = run_chain(quiet, rng);
          s.counts = run.ledger.counts();
          s.total_degree = run.ledger.total_degree();
          s.max_degree = run.ledger.max_degree();
          s.argmax = run.ledger.argmax();
        } else {
          const auto run = run_embedding(model.edge_law, model.beta, model.n, rng);
          for (std::size_t k = 0; k < run.sizes.size(); ++k) {
            const auto d = run.sizes[k];
            ++s.counts[d];
            if (d > s.max_degree) {
              s.max_degree = d;
              s.argmax = static_cast<Vertex>(k) + 1;
            }
          }
          s.total_degree = run.total_size;
        }
        return s;
      });

  Aggregate out;
  for (const auto& s : summaries) {
    for (const auto& [j, c] : s.counts) out.pooled_counts[j] += c;
    out.pooled_total_degree += s.total_degree;
  }
  out.replicates = std::move(summaries);
  return out;
}

}  // namespace pagraph
