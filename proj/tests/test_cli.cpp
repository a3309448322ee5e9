#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "pagraph/error.hpp"
#include "pagraph/experiment.hpp"
#include "pagraph/report.hpp"
#include "pagraph/verify.hpp"

using namespace pagraph;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("pagraph_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::string> lines(const fs::path& path) {
  std::vector<std::string> out;
  std::ifstream in(path);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int run_cli(const std::string& args) {
  const std::string command = std::string(PAGRAPH_CLI) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("minimal flags fill the defaults") {
  FlagOverrides flags;
  flags.law = "deterministic:1";
  flags.beta = 0.0;
  flags.n = 1000;
  const auto c = parse_config(std::nullopt, flags);
  CHECK(c.model.seed == 0);
  CHECK(c.model.n == 1000);
  CHECK(c.model.edge_law.mean() == 1.0);
  CHECK(c.replications == 1);
  CHECK(c.parallelism == 1);
  CHECK(c.model.record_stride == 1);
  CHECK(c.model.probe_vertices == std::vector<Vertex>{1, 2});
  CHECK(c.profile == Profile::Quick);
  CHECK(c.j_max == 1000);
}

TEST_CASE("range errors name the field") {
  FlagOverrides flags;
  flags.beta = -1.0;
  try {
    parse_config(std::nullopt, flags);
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::RangeError);
    CHECK(std::string(e.what()).find("model.beta") != std::string::npos);
  }
  try {
    parse_config_text(R"({"replications": 0})", {});
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("replications") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("{not json", {}), Error);
  CHECK_THROWS_AS(parse_config_text(R"({"model": {"n": "many"}})", {}), Error);
  CHECK_THROWS_AS(parse_config(fs::path("/nonexistent/config.json"), {}), Error);
}

TEST_CASE("flags override the config file") {
  const auto dir = scratch("config");
  const auto file = dir / "config.json";
  std::ofstream(file) << R"({"model": {"law": "geom:0.5", "beta": 1.5, "n": 500, "seed": 9},
                             "replications": 4, "options": {"jmax": 77}})";
  const auto from_file = parse_config(file, {});
  CHECK(from_file.model.n == 500);
  CHECK(from_file.model.seed == 9);
  CHECK(from_file.replications == 4);
  CHECK(from_file.j_max == 77);
  FlagOverrides flags;
  flags.n = 2000;
  const auto merged = parse_config(file, flags);
  CHECK(merged.model.n == 2000);
  CHECK(merged.model.beta == 1.5);
}

TEST_CASE("a single replicate is a direct run") {
  ExperimentConfig c;
  c.model.n = 3000;
  c.model.seed = 42;
  const auto agg = replicate(c, Task::Simulate);
  REQUIRE(agg.replicates.size() == 1);
  const auto direct = run_chain(c.model);
  CHECK(agg.replicates[0].counts == direct.ledger.counts());
  CHECK(agg.replicates[0].argmax == direct.ledger.argmax());
}

TEST_CASE("aggregates do not depend on the worker count") {
  for (const auto task : {Task::Simulate, Task::Embed}) {
    ExperimentConfig c;
    c.model.n = 2000;
    c.model.beta = 0.5;
    c.model.edge_law = parse_edge_law("explicit:0.5,0.5");
    c.replications = 24;
    c.parallelism = 1;
    const auto serial = replicate(c, task);
    c.parallelism = 8;
    const auto parallel = replicate(c, task);
    CHECK(serial == parallel);
  }
}

TEST_CASE("pooled handshake identity") {
  ExperimentConfig c;
  c.model.n = 10000;
  c.replications = 100;
  c.parallelism = 4;
  CHECK(replicate(c, Task::Simulate).pooled_total_degree == 100 * (2 + 2 * 10000));
}

TEST_CASE("replicate errors carry the index") {
  try {
    replicate_map(10, 3, 0, [](std::int64_t r, Rng&) {
      if (r == 6) throw std::runtime_error("boom");
      return r;
    });
    FAIL("no error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ReplicateFailed);
    CHECK(std::string(e.what()).find("replicate 6") != std::string::npos);
  }
}

TEST_CASE("stream seeds") {
  CHECK(stream_seed(0, 0) != stream_seed(0, 1));
  CHECK(stream_seed(0, 1) != stream_seed(1, 0));
  CHECK(splitmix64(0) == 0xe220a8397b1dcdafULL);
}

TEST_CASE("number formatting") {
  CHECK(format_short(1.0) == "1.0");
  CHECK(format_short(2.0 / 3.0) == "0.666667");
  CHECK(format_short(0.5) == "0.5");
}

TEST_CASE("degree distribution of the initial graph") {
  const auto dir = scratch("emit");
  const auto spectrum = pi_recursive(EdgeCountDistribution::deterministic(1), 0.0, 10);
  const auto emp = empirical_distribution(DegreeLedger{});
  const auto path = dir / "degree_distribution.csv";
  write_degree_distribution(path, emp, &spectrum);
  write_degree_distribution(path, emp, &spectrum);
  const auto rows = lines(path);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "j,count,empirical,theoretical,abs_error");
  CHECK(rows[1] == "1,2,1.0,0.666667,0.333333");
}

TEST_CASE("trajectories without probes are header only") {
  const auto dir = scratch("probes");
  ModelConfig c;
  c.n = 100;
  const auto run = run_chain(c);
  write_trajectories(dir / "trajectories.csv", run, 0.5);
  CHECK(lines(dir / "trajectories.csv") == std::vector<std::string>{"n,vertex,degree,scaled"});
  std::ofstream(dir / "blocker") << "x";
  CHECK_THROWS_AS(write_trajectories(dir / "blocker" / "t.csv", run, 0.5), Error);
}

TEST_CASE("report pass is the conjunction of checks") {
  ReportDocument report;
  Check good;
  good.name = "a";
  good.pass = true;
  report.checks = {good, good};
  CHECK(to_json(report)["pass"] == true);
  report.checks[1].pass = false;
  CHECK(to_json(report)["pass"] == false);
  CHECK(compare(1.0, "<", 2.0));
  CHECK_FALSE(compare(2.0, "<", 2.0));
  CHECK(compare(2.0, ">=", 2.0));
}

TEST_CASE("theory profile runs only the numerical checks") {
  ExperimentConfig c;
  c.profile = Profile::Theory;
  const auto report = verify(c);
  CHECK(report.pass());
  for (const auto& check : report.checks) {
    CHECK((check.criterion == "C1" || check.criterion == "C2" || check.criterion == "C4" ||
           check.criterion == "C5"));
    CHECK_FALSE(check.anchor.empty());
  }
}

TEST_CASE("a zero oscillation bound forces failure") {
  ExperimentConfig c;
  c.profile = Profile::Quick;
  c.thresholds["c6.degree_oscillation"] = 0.0;
  const auto report = verify(c);
  CHECK_FALSE(report.pass());
  for (const auto& check : report.checks) {
    if (check.name == "fraction_d1_plateau") CHECK(check.value == 0.0);
  }
  c.thresholds = {{"c6.no_such_threshold", 1.0}};
  CHECK_THROWS_AS(verify(c), Error);
}

TEST_CASE("command line exit codes and determinism") {
  const auto dir = scratch("cli");
  const auto a = (dir / "a").string(), b = (dir / "b").string();
  CHECK(run_cli("simulate --n 2000 --seed 5 --probe 1 2 3 --out " + a) == 0);
  CHECK(run_cli("simulate --n 2000 --seed 5 --probe 1 2 3 --out " + b) == 0);
  for (const char* file : {"degree_distribution.csv", "trajectories.csv", "max_degree.csv"}) {
    CHECK(slurp(dir / "a" / file) == slurp(dir / "b" / file));
    CHECK_FALSE(slurp(dir / "a" / file).empty());
  }
  CHECK(run_cli("embed --n 500 --out " + a) == 0);
  CHECK(fs::exists(dir / "a" / "tau.csv"));
  CHECK(run_cli("theory --law geom:0.5 --beta 1 --jmax 50 --out " + a) == 0);
  CHECK(lines(dir / "a" / "pi.csv").size() == 51);
  CHECK(run_cli("analyze --n 5000 --reps 3 --out " + a) == 0);

  CHECK(run_cli("simulate --beta -1 --out " + a) == 2);
  CHECK(run_cli("simulate --law poisson:1 --out " + a) == 2);
  CHECK(run_cli("frobnicate") == 2);
  CHECK(run_cli("verify --profile nonsense --out " + a) == 2);
  CHECK(run_cli("verify --profile theory --out " + a) == 0);
  CHECK(slurp(dir / "a" / "report.json").find("\"pass\": true") != std::string::npos);
  CHECK(run_cli("verify --profile theory --threshold c1.max_abs_diff=0 --out " + a) == 1);
}
