#include <cmath>

#include "doctest.h"
#include "pagraph/analysis.hpp"
#include "pagraph/error.hpp"
#include "pagraph/experiment.hpp"
#include "support.hpp"

using namespace pagraph;

namespace {

RunResult tree(std::int64_t n, std::uint64_t seed = 1, const char* law = "det:1", double beta = 0.0) {
  ModelConfig c;
  c.n = n;
  c.seed = seed;
  c.beta = beta;
  c.edge_law = parse_edge_law(law);
  c.record_stride = n;
  return run_chain(c);
}

LimitSpectrum closed_form(std::int64_t j_max, double beta = 0.0) {
  std::vector<double> pi;
  for (std::int64_t j = 1; j <= j_max; ++j) pi.push_back(testing::explicit_pi(1, beta, j));
  return make_spectrum(std::move(pi), 1.0, beta);
}

ErrorCode code_of(auto&& call) {
  try {
    call();
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an error");
  return ErrorCode::ParseError;
}

}  // namespace

TEST_CASE("empirical frequencies") {
  const auto init = empirical_distribution(DegreeLedger{});
  CHECK(init.freq.size() == 1);
  CHECK(init.at(1) == 1.0);
  const auto e = empirical_distribution(DegreeLedger::from_degrees({3, 1, 1, 1}, 2));
  CHECK(e.freq.size() == 2);
  CHECK(e.at(1) == 0.75);
  CHECK(e.at(3) == 0.25);
  CHECK(e.support_max == 3);
}

TEST_CASE("law of large numbers for degree frequencies") {
  const auto run = tree(200000);
  const auto emp = empirical_distribution(run.ledger);
  const auto spectrum = closed_form(2000);
  CHECK(std::abs(emp.at(1) - 2.0 / 3.0) < 0.01);

  const auto indicator = functional_lln([](std::int64_t j) { return j == 1 ? 1.0 : 0.0; }, 1.0, emp, spectrum);
  CHECK(indicator.gap < 0.01);
  const auto capped = functional_lln([](std::int64_t j) { return double(std::min<std::int64_t>(j, 10)); }, 10.0, emp, spectrum);
  // sum_j min(j, 10) * 4 / (j (j+1) (j+2)) written out as a check on the library side
  double exact = 0.0;
  for (std::int64_t j = 1; j <= 100000; ++j) exact += double(std::min<std::int64_t>(j, 10)) * 4.0 / (double(j) * (j + 1.0) * (j + 2.0));
  CHECK(capped.theoretical == doctest::Approx(exact).epsilon(1e-5));
  CHECK(capped.gap < 0.03);

  const auto one = functional_lln([](std::int64_t) { return 1.0; }, 1.0, emp, spectrum);
  CHECK(one.empirical == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(one.theoretical == doctest::Approx(1.0 - spectrum.truncation_mass).epsilon(1e-12));

  CHECK(code_of([&] { functional_lln([](std::int64_t j) { return double(j); }, 5.0, emp, spectrum); }) ==
        ErrorCode::UnboundedF);
}

TEST_CASE("tail fit recovers a pure power law") {
  std::vector<double> pi;
  for (std::int64_t j = 1; j <= 200; ++j) pi.push_back(std::pow(double(j), -3.0));
  const auto fit = tail_fit(make_spectrum(pi, 1.0, 0.0), 10, 100);
  CHECK(std::abs(fit.slope + 3.0) < 1e-6);
  CHECK(fit.bins == 91);
  CHECK(fit.r_squared == doctest::Approx(1.0));

  EmpiricalDistribution emp;
  for (std::int64_t j = 1; j <= 200; ++j) {
    emp.counts[j] = 1000;
    emp.freq[j] = std::pow(double(j), -2.5);
  }
  CHECK(std::abs(tail_fit(emp, 10, 100).slope + 2.5) < 1e-6);
  CHECK(code_of([&] { tail_fit(emp, 10, 12); }) == ErrorCode::InsufficientBins);
  CHECK(code_of([&] { tail_fit(emp, 30, 10); }) == ErrorCode::RangeError);
}

TEST_CASE("tail slopes of the limit law") {
  const auto theory = tail_fit(closed_form(500), 20, 500);
  CHECK(theory.slope >= -3.15);
  CHECK(theory.slope <= -2.85);
  const auto shifted = tail_fit(closed_form(500, 1.0), 20, 500);
  CHECK(std::abs(shifted.slope + 4.0) <= 0.2);
  const auto empirical = tail_fit(empirical_distribution(tree(1000000, 2).ledger), 3, 30);
  CHECK(empirical.slope >= -3.4);
  CHECK(empirical.slope <= -2.6);
}

TEST_CASE("lattice-restricted fit for even degrees") {
  const auto emp = empirical_distribution(tree(200000, 3, "det:2").ledger);
  const auto fit = tail_fit(emp, 4, 60, 2);
  CHECK(std::abs(fit.slope + 3.0) < 0.4);
}

TEST_CASE("convergence checks on synthetic series") {
  StepSeries d, m;
  for (std::int64_t n = 0; n <= 1000000; n += 10000) {
    d.emplace_back(n, std::ceil(3.0 * std::sqrt(double(n))));
    m.emplace_back(n, std::ceil(std::sqrt(double(n))));
  }
  const auto a = trajectory_limit_check(d, 0.5, 0.01);
  CHECK(a.tail_oscillation < 1e-3);
  CHECK(a.level == doctest::Approx(3.0).epsilon(1e-3));
  CHECK(a.verdict);
  CHECK(max_degree_check(m, 0.5, 0.01).tail_oscillation < 2e-3);
  CHECK(ratio_limit_check(d, m, 0.01).level == doctest::Approx(3.0).epsilon(2e-3));
  // Wrong exponent: 3 n^{1/4} grows by 2^{1/4} across the trailing half.
  CHECK(trajectory_limit_check(d, 0.25, 0.2).tail_oscillation > 0.15);
  CHECK_FALSE(trajectory_limit_check(d, 0.25, 0.1).verdict);

  StepSeries short_series(d.begin(), d.begin() + 5);
  CHECK(code_of([&] { trajectory_limit_check(short_series, 0.5, 0.1); }) == ErrorCode::SeriesTooShort);
}

TEST_CASE("growth and freezing in seeded ensembles") {
  int degree_ok = 0, ratio_ok = 0, max_ok = 0, frozen = 0;
  const int runs = 100;
  const std::int64_t n = 100000;
  for (int r = 0; r < runs; ++r) {
    Rng rng(stream_seed(1, std::uint64_t(r)));
    ModelConfig c;
    c.n = n;
    c.probe_vertices = {1, 2};
    c.record_stride = 100;
    const auto run = run_chain(c, rng);
    StepSeries d1, d2, mx;
    for (const auto& p : run.trajectories) (p.vertex == 1 ? d1 : d2).emplace_back(p.n, double(p.degree));
    for (const auto& p : run.max_series) mx.emplace_back(p.n, double(p.max_degree));
    degree_ok += trajectory_limit_check(d1, 0.5, 0.2).verdict;
    ratio_ok += ratio_limit_check(d1, d2, 0.2).verdict;
    max_ok += max_degree_check(mx, 0.5, 0.25).verdict;
    std::vector<std::pair<std::int64_t, Vertex>> index;
    for (const auto& p : run.max_series) index.emplace_back(p.n, p.argmax);
    frozen += freeze_detector(index).last_change_step <= n / 2;
  }
  CHECK(degree_ok >= 90);
  CHECK(ratio_ok >= 85);
  CHECK(max_ok >= 85);
  CHECK(frozen >= 85);
}

TEST_CASE("wrong exponent shows drift") {
  // beta = 2 gives theta = 1/4, so M_n / sqrt(n) decays.
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    ModelConfig c;
    c.n = 100000;
    c.beta = 2.0;
    c.seed = seed;
    c.record_stride = 10000;
    const auto run = run_chain(c);
    const auto at = [&](std::int64_t step) {
      for (const auto& p : run.max_series) {
        if (p.n == step) return double(p.max_degree) / std::sqrt(double(step));
      }
      return 0.0;
    };
    CHECK(at(100000) < 0.9 * at(10000));
  }
}

TEST_CASE("freeze detector") {
  std::vector<std::pair<std::int64_t, Vertex>> constant, alternating;
  for (std::int64_t n = 0; n <= 1000; n += 10) {
    constant.emplace_back(n, 4);
    alternating.emplace_back(n, (n / 10) % 2 ? 1 : 2);
  }
  CHECK(freeze_detector(constant).last_change_step == 0);
  CHECK(freeze_detector(constant).frozen_fraction == 1.0);
  CHECK(freeze_detector(alternating).last_change_step == 1000);
  CHECK(freeze_detector(alternating).frozen_fraction < 0.01);
}

TEST_CASE("total variation distance") {
  std::map<std::int64_t, std::int64_t> counts = {{1, 6}, {2, 3}, {4, 1}};
  const auto emp = empirical_from_counts(counts, 8);
  const auto same = distribution_distance(emp, make_spectrum({0.6, 0.3, 0.0, 0.1}, 1.0, 0.0), 4);
  CHECK(same.total_variation < 1e-15);
  CHECK(same.max_abs_error < 1e-15);

  const auto big = empirical_distribution(tree(1000000, 4).ledger);
  CHECK(distribution_distance(big, closed_form(1000), 50).total_variation < 0.01);

  const auto even = empirical_distribution(tree(100000, 5, "det:2").ledger);
  CHECK(distribution_distance(even, closed_form(1000), 50).total_variation >= 0.3);
}

TEST_CASE("chi-square homogeneity") {
  const DegreeCounts pool = {{1, 600}, {2, 250}, {3, 100}, {4, 30}, {5, 20}};
  const auto same = embedding_equivalence_test(pool, pool);
  CHECK(same.statistic == 0.0);
  CHECK(same.p_value == 1.0);
  CHECK(code_of([] { embedding_equivalence_test(DegreeCounts{{1, 3}}, DegreeCounts{{1, 2}}); }) ==
        ErrorCode::DegenerateBinning);

  // 2x2 table worked by hand: expected counts 50 everywhere, statistic 2.
  const auto two = embedding_equivalence_test(DegreeCounts{{1, 55}, {2, 45}}, DegreeCounts{{1, 45}, {2, 55}});
  CHECK(two.statistic == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(two.dof == 1);
  CHECK(two.p_value == doctest::Approx(0.15729920705028513).epsilon(1e-9));

  const auto pools = [](double beta, std::uint64_t master) {
    return replicate_map(500, 1, master, [beta](std::int64_t, Rng& rng) {
      ModelConfig c;
      c.n = 200;
      c.beta = beta;
      c.record_stride = 200;
      return run_chain(c, rng).ledger.counts();
    });
  };
  const auto flat = pools(0.0, 1), shifted = pools(1.0, 2), again = pools(0.0, 3);
  CHECK(embedding_equivalence_test(flat, shifted).p_value < 1e-6);
  const auto null = embedding_equivalence_test(flat, again);
  CHECK(null.p_value > 0.001);
  CHECK(null.design_effect > 0.0);
}

TEST_CASE("KS distance from uniform") {
  std::vector<double> grid;
  for (int k = 0; k < 100; ++k) grid.push_back((k + 0.5) / 100.0);
  CHECK(ks_distance_uniform(grid) == doctest::Approx(0.005));
  CHECK(ks_distance_uniform(std::vector<double>(10, 0.5)) == doctest::Approx(0.5));
}
