#include <cmath>
#include <numeric>

#include "doctest.h"
#include "pagraph/analysis.hpp"
#include "pagraph/branching.hpp"
#include "pagraph/error.hpp"
#include "pagraph/experiment.hpp"
#include "pagraph/graph.hpp"
#include "support.hpp"

using namespace pagraph;
using testing::estimate;

namespace {

BranchingConfig process(double beta, std::int64_t initial = 1, const char* law = "det:1") {
  BranchingConfig c;
  c.edge_law = parse_edge_law(law);
  c.beta = beta;
  c.initial.value = initial;
  return c;
}

// First event time censored at the horizon; E[min(T, h)] = (1 - e^{-rate h}) / rate.
double first_event_time(const JumpPath& path) {
  return path.times.empty() ? path.horizon : path.times.front();
}

double censored_mean(double rate, double horizon) { return -std::expm1(-rate * horizon) / rate; }

}  // namespace

TEST_CASE("zero horizon has no events") {
  Rng rng(1);
  const auto path = simulate_mbp(process(0.0), 0.0, rng);
  CHECK(path.times.empty());
  CHECK(path.final_value() == 1);
  CHECK(path.value_at(0.0) == 1);
}

TEST_CASE("pure process rejects immigration") {
  Rng rng(1);
  CHECK_THROWS_AS(simulate_mbp(process(1.0), 1.0, rng), Error);
}

TEST_CASE("Yule process has mean e^t") {
  Rng rng(2);
  std::vector<double> z;
  for (int r = 0; r < 100000; ++r) z.push_back(double(simulate_mbp(process(0.0), 1.0, rng).final_value()));
  const auto est = estimate(z);
  CHECK(std::abs(est.mean - std::exp(1.0)) <= 3 * est.se);
}

TEST_CASE("waiting time in state 3 is Exponential(3)") {
  Rng rng(3);
  std::vector<double> w;
  for (int r = 0; r < 100000; ++r) w.push_back(first_event_time(simulate_mbp(process(0.0, 3), 2.0, rng)));
  const auto est = estimate(w);
  CHECK(std::abs(est.mean - censored_mean(3.0, 2.0)) <= 3 * est.se);
}

TEST_CASE("waiting time in state 2 with beta 1.5 is Exponential(3.5)") {
  for (const auto rep : {Representation::JumpChain, Representation::Superposition}) {
    Rng rng(4);
    std::vector<double> w;
    for (int r = 0; r < 50000; ++r) w.push_back(first_event_time(simulate_mbpi(process(1.5, 2), 2.0, rng, rep)));
    const auto est = estimate(w);
    CHECK(std::abs(est.mean - censored_mean(3.5, 2.0)) <= 3 * est.se);
  }
}

TEST_CASE("without immigration both representations are the pure process") {
  for (const auto rep : {Representation::JumpChain, Representation::Superposition}) {
    Rng a(9), b(9);
    const auto expected = simulate_mbp(process(0.0, 1, "explicit:0.5,0.5"), 3.0, a);
    const auto path = simulate_mbpi(process(0.0, 1, "explicit:0.5,0.5"), 3.0, b, rep);
    CHECK(path.times == expected.times);
    CHECK(path.values == expected.values);
  }
}

TEST_CASE("birth with immigration matches the negative binomial law") {
  // Linear birth at rate i and immigration at rate 1 from one particle:
  // D(t) - 1 ~ NegativeBinomial(2, e^{-t}), mean 2(e^t - 1).
  for (const auto rep : {Representation::JumpChain, Representation::Superposition}) {
    Rng rng(rep == Representation::JumpChain ? 12 : 13);
    std::vector<double> d;
    for (int r = 0; r < 50000; ++r) d.push_back(double(simulate_mbpi(process(1.0), 1.0, rng, rep).final_value()));
    const auto est = estimate(d);
    CHECK(std::abs(est.mean - (1.0 + 2.0 * (std::exp(1.0) - 1.0))) <= 3 * est.se);
  }
}

TEST_CASE("the two representations agree in distribution at t = 1") {
  DegreeCounts jump, super;
  Rng rng(21);
  for (int r = 0; r < 10000; ++r) {
    ++jump[simulate_mbpi(process(1.0), 1.0, rng, Representation::JumpChain).final_value()];
    ++super[simulate_mbpi(process(1.0), 1.0, rng, Representation::Superposition).final_value()];
  }
  CHECK(embedding_equivalence_test(jump, super).p_value > 0.001);
}

TEST_CASE("jump paths are increasing in time and size") {
  Rng rng(5);
  const auto path = simulate_mbpi(process(0.5, 1, "geom:0.5"), 4.0, rng, Representation::Superposition);
  CHECK(std::is_sorted(path.times.begin(), path.times.end()));
  CHECK(std::is_sorted(path.values.begin(), path.values.end()));
  if (!path.times.empty()) CHECK(path.times.back() <= 4.0);
  CHECK(path.value_at(4.0) == path.final_value());
}

TEST_CASE("embedding with zero events") {
  Rng rng(1);
  const auto run = run_embedding(EdgeCountDistribution::deterministic(1), 0.0, 0, rng);
  CHECK(run.sizes == std::vector<std::int64_t>{1, 1});
  CHECK(run.taus.empty());
  CHECK(run.s_series == std::vector<double>{2.0});
}

TEST_CASE("embedding bookkeeping") {
  for (const double beta : {0.0, 1.0, 2.5}) {
    Rng rng(31);
    const auto law = parse_edge_law("explicit:0.3,0.3,0.4");
    const std::int64_t n = 2000;
    const auto run = run_embedding(law, beta, n, rng);
    REQUIRE(run.sizes.size() == std::size_t(n + 2));
    REQUIRE(run.taus.size() == std::size_t(n));
    CHECK(std::adjacent_find(run.taus.begin(), run.taus.end(), std::greater_equal<>()) == run.taus.end());
    CHECK(run.taus.front() > 0.0);
    const auto sizes = std::accumulate(run.sizes.begin(), run.sizes.end(), std::int64_t{0});
    CHECK(sizes == run.total_size);
    std::int64_t edges = 0;
    for (std::int64_t k = 0; k <= n; ++k) {
      const double expected = 2 + 2 * beta + 2 * double(edges) + double(k) * beta;
      CHECK(run.s_series[std::size_t(k)] == doctest::Approx(expected).epsilon(1e-12));
      if (k < n) edges += run.increments[std::size_t(k)];
    }
    for (std::int64_t j = 3; j <= n + 2; ++j) {
      CHECK(run.start_times[std::size_t(j - 1)] == run.taus[std::size_t(j - 3)]);
      CHECK(run.sizes[std::size_t(j - 1)] >= 1);
    }
  }
}

TEST_CASE("first event time has mean 1/S_0") {
  Rng rng(7);
  const auto law = EdgeCountDistribution::deterministic(1);
  std::vector<double> t;
  for (int r = 0; r < 100000; ++r) t.push_back(run_embedding(law, 0.0, 1, rng).taus.front());
  const auto est = estimate(t);
  CHECK(std::abs(est.mean - 0.5) <= 3 * est.se);
}

TEST_CASE("embedding and chain agree on pooled degree counts at n = 500") {
  const auto law = EdgeCountDistribution::deterministic(1);
  const auto chain = replicate_map(2000, 1, 101, [](std::int64_t, Rng& rng) {
    ModelConfig c;
    c.n = 500;
    c.record_stride = 500;
    return run_chain(c, rng).ledger.counts();
  });
  const auto embed = replicate_map(2000, 1, 202, [&](std::int64_t, Rng& rng) {
    DegreeCounts counts;
    for (const auto d : run_embedding(law, 0.0, 500, rng).sizes) ++counts[d];
    return counts;
  });
  CHECK(embedding_equivalence_test(chain, embed).p_value > 0.001);
}

TEST_CASE("tau diagnostics on synthetic input") {
  std::vector<double> taus, s;
  for (int n = 1; n <= 100; ++n) taus.push_back(0.5 * std::log(double(n)));
  s.assign(101, 2.0);
  const auto d = tau_diagnostics(taus, s, 1.0, 0.0);
  CHECK(d.alpha == 0.5);
  for (const double r : d.log_drift_residual) CHECK(std::abs(r) < 1e-15);
  CHECK(d.log_drift_tail_oscillation < 1e-15);
  CHECK(d.martingale_residual.front() == doctest::Approx(-0.5));
  s.resize(50);
  CHECK_THROWS_AS(tau_diagnostics(taus, s, 1.0, 0.0), Error);
}

TEST_CASE("tau_n - log(n)/2 settles in most runs") {
  Rng rng(8);
  const auto law = EdgeCountDistribution::deterministic(1);
  int settled = 0;
  for (int r = 0; r < 100; ++r) {
    const auto run = run_embedding(law, 0.0, 10000, rng);
    settled += tau_diagnostics(run.taus, run.s_series, 1.0, 0.0).log_drift_tail_oscillation < 0.1;
  }
  CHECK(settled >= 90);
}

TEST_CASE("S_n/n approaches 2m + beta") {
  Rng rng(10);
  const auto run = run_embedding(parse_edge_law("explicit:0.5,0.5"), 1.0, 100000, rng);
  CHECK(std::abs(run.s_series.back() / 100000.0 - 4.0) < 0.05);
}

TEST_CASE("zeta trajectory of an eventless path") {
  JumpPath path;
  path.horizon = 2.0;
  const auto z = zeta_trajectory(path, 1.0, 1.0);
  CHECK(z.scaled == std::vector<double>{1.0});
  CHECK(z.tail_oscillation == 0.0);
}

TEST_CASE("scaled branching sizes stay positive") {
  Rng rng(14);
  for (int r = 0; r < 2000; ++r) {
    const auto path = simulate_mbpi(process(1.0), 8.0, rng, Representation::JumpChain);
    const auto z = zeta_trajectory(path, 1.0, 6.0);
    CHECK(z.scaled.back() > 0.0);
    CHECK(std::all_of(z.scaled.begin(), z.scaled.end(), [](double v) { return v > 0.0; }));
  }
}
