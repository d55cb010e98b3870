#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "eivm/dist.hpp"
#include "eivm/json_io.hpp"
#include "eivm/rng.hpp"
#include "eivm/verify.hpp"
#include "test_support.hpp"

using namespace eivm;
using namespace eivm::verify;
using test_support::close_abs;

namespace {

simulate::Scenario small_scenario() {
  simulate::Scenario s;
  s.model = simulate::Scenario::Model::structural;
  s.xi = simulate::XiFamily::normal(1.0, 1.0);
  s.errors = {simulate::ErrorKindFamily::gaussian_correlated,
              linalg::SymMatrix::from_rowmajor(2, {0.5, 0.1, 0.1, 0.4})};
  s.beta = 2.0;
  s.alpha = 1.0;
  s.n = 300;
  s.identifiability = model::IdentifiabilityConfig::a3(0.4, 0.1);
  return s;
}

}  // namespace

TEST_CASE("ks_statistic: perfect quantile samples") {
  const std::size_t n = 100;
  std::vector<double> samples(n);
  for (std::size_t i = 1; i <= n; ++i)
    samples[i - 1] = dist::normal_quantile((static_cast<double>(i) - 0.5) / n);
  const auto r = ks_statistic(samples);
  CHECK(close_abs(r.d, 0.5 / static_cast<double>(n), 1e-12));
  CHECK(r.p > 0.999);
}

TEST_CASE("ks_statistic: constant samples are far from normal") {
  for (double c : {-2.0, 0.0, 1.3}) {
    const auto r = ks_statistic(std::vector<double>(25, c));
    CHECK(r.d >= 0.5);
  }
  CHECK_THROWS_AS(ks_statistic(std::vector<double>(5, 0.0)), std::invalid_argument);
}

TEST_CASE("ks_statistic: p-values roughly uniform under the null") {
  std::size_t below = 0;
  const std::size_t trials = 200;
  for (std::uint64_t t = 0; t < trials; ++t) {
    rng::Counter rnd(rng::derive_key(31337, t));
    std::vector<double> samples(1000);
    for (auto& s : samples) s = rnd.next_normal();
    if (ks_statistic(samples).p < 0.05) ++below;
  }
  const double frac = static_cast<double>(below) / static_cast<double>(trials);
  CHECK(frac >= 0.01);
  CHECK(frac <= 0.09);
}

TEST_CASE("mardia_statistics: kurtosis near d(d+2) for standard normal draws") {
  rng::Counter rnd(404);
  const std::size_t r = 5000, d = 3;
  std::vector<double> rows(r * d);
  for (auto& v : rows) v = rnd.next_normal();
  const auto m = mardia_statistics(rows, d);
  CHECK(close_abs(m.b2, 15.0, 0.5));
  CHECK(std::abs(m.b1) < 0.05);
}

TEST_CASE("mardia_statistics: negation-closed rows have exactly zero skewness") {
  // Integer rows closed under negation; the third-moment tensor of the raw
  // rows cancels exactly in integer arithmetic.
  const std::vector<double> rows = {
      1, 0, 0, -1, 0, 0, 0, 2, 0, 0, -2, 0, 0, 0, 3, 0, 0, -3, 1, 1, 1, -1, -1, -1,
      2, 1, 0, -2, -1, 0,
  };
  const auto m = mardia_statistics(rows, 3);
  CHECK(m.b1 == 0.0);
}

TEST_CASE("mardia_statistics: singular covariance rejected") {
  const std::vector<double> rows = {1, 1, 2, 2, 3, 3, 4, 4, 5, 5, 6, 6};
  CHECK_THROWS_AS(mardia_statistics(rows, 2), NotPositiveDefinite);
}

TEST_CASE("obrien_statistic: worked values") {
  CHECK(close_abs(obrien_statistic({3, 4}), 0.64, 1e-15));
  CHECK(close_abs(obrien_statistic(std::vector<double>(8, 2.5)), 1.0 / 8.0, 1e-15));
  CHECK(obrien_statistic({0, 0, 0, 1}) == 1.0);
  CHECK_THROWS_AS(obrien_statistic({0, 0, 0}), std::invalid_argument);
}

TEST_CASE("run_monte_carlo: smoke run with sane summaries") {
  const auto scenario = small_scenario();
  const auto report = run_monte_carlo(scenario, model::Variant::A3, 200, 0.95, 99,
                                      linalg::RootMode::symmetric, 2);
  CHECK(report.replications_used + report.failures.total() == 200);
  CHECK(report.mode_a.coverage >= 0.0);
  CHECK(report.mode_a.coverage <= 1.0);
  CHECK(report.mode_b.coverage > 0.8);  // should be near 0.95 even at n = 300
  CHECK(report.chi2_crit == dist::chi2_quantile(3, 0.95));
  CHECK(report.mode_diff_median >= 0.0);
  for (const auto& k : report.mode_b.ks_component) CHECK(k.p > 0.0);
}

TEST_CASE("run_monte_carlo: report independent of the thread count") {
  const auto scenario = small_scenario();
  const auto r1 = run_monte_carlo(scenario, model::Variant::A3, 150, 0.95, 7,
                                  linalg::RootMode::symmetric, 1);
  const auto r2 = run_monte_carlo(scenario, model::Variant::A3, 150, 0.95, 7,
                                  linalg::RootMode::symmetric, 4);
  const auto j1 = json_io::mc_report_to_json(r1, scenario).dump(2);
  const auto j2 = json_io::mc_report_to_json(r2, scenario).dump(2);
  CHECK(j1 == j2);
}

TEST_CASE("run_monte_carlo: failures tallied and excluded from coverage") {
  // theta close to the typical S_xx makes the A3 proviso fail occasionally.
  simulate::Scenario s;
  s.model = simulate::Scenario::Model::structural;
  s.xi = simulate::XiFamily::normal(0.0, 1.0);
  s.errors = {simulate::ErrorKindFamily::gaussian_correlated,
              linalg::SymMatrix::from_rowmajor(2, {0.5, 0.0, 0.0, 2.0})};
  s.beta = 2.0;
  s.alpha = 1.0;
  s.n = 40;
  s.identifiability = model::IdentifiabilityConfig::a3(2.0, 0.0);

  const auto report = run_monte_carlo(s, model::Variant::A3, 300, 0.95, 12345,
                                      linalg::RootMode::symmetric, 2,
                                      /*abort_failure_fraction=*/0.9);
  CHECK(report.failures.total() > 0);
  CHECK(report.replications_used == 300 - report.failures.total());

  // With the default 5% policy this scenario aborts.
  CHECK_THROWS_AS(run_monte_carlo(s, model::Variant::A3, 300, 0.95, 12345,
                                  linalg::RootMode::symmetric, 2),
                  std::runtime_error);
}

TEST_CASE("run_monte_carlo: argument validation") {
  const auto scenario = small_scenario();
  CHECK_THROWS_AS(run_monte_carlo(scenario, model::Variant::A1, 200, 0.95, 1),
                  std::invalid_argument);
  CHECK_THROWS_AS(run_monte_carlo(scenario, model::Variant::A3, 50, 0.95, 1),
                  std::invalid_argument);
}

TEST_CASE("replications_csv: one row per mode per success") {
  const auto scenario = small_scenario();
  const auto report = run_monte_carlo(scenario, model::Variant::A3, 120, 0.95, 5,
                                      linalg::RootMode::symmetric, 2);
  const std::string csv = replications_csv(report);
  const std::size_t lines = std::count(csv.begin(), csv.end(), '\n');
  CHECK(lines == 1 + 2 * report.replications_used);
  CHECK(csv.rfind("rep,mode,T1,T2,T3,norm2\n", 0) == 0);
}

TEST_CASE("run_monte_carlo: variants agree when all constants are known") {
  // With a diagonal gamma every identifiability assumption holds at once; the
  // three variant coverages should sit in one band.
  simulate::Scenario s;
  s.model = simulate::Scenario::Model::structural;
  s.xi = simulate::XiFamily::normal(1.0, 1.0);
  s.errors = {simulate::ErrorKindFamily::gaussian_correlated,
              linalg::SymMatrix::from_rowmajor(2, {0.5, 0.0, 0.0, 0.4})};
  s.beta = 2.0;
  s.alpha = 1.0;
  s.n = 1000;

  for (const auto& config :
       {model::IdentifiabilityConfig::a1(1.25), model::IdentifiabilityConfig::a2(0.5, 0.0),
        model::IdentifiabilityConfig::a3(0.4, 0.0)}) {
    s.identifiability = config;
    const auto report = run_monte_carlo(s, config.variant, 1000, 0.95, 2024,
                                        linalg::RootMode::symmetric, 2);
    CHECK(report.mode_b.coverage > 0.92);
    CHECK(report.mode_b.coverage < 0.98);
  }
}

TEST_CASE("lindeberg_array_experiment: homogeneous weights reduce to the iid case") {
  const auto report = lindeberg_array_experiment(1, {400}, 200, 0.95, 71,
                                                 linalg::RootMode::symmetric, 2,
                                                 /*c_lo=*/1.0, /*c_hi=*/1.0);
  REQUIRE(report.entries.size() == 1);
  const auto& e = report.entries[0];
  CHECK(e.coverage > 0.88);
  CHECK(e.coverage <= 1.0);
  // Sigma = I_1; the scaled covariance concentrates near 1.
  CHECK(close_abs(e.mean_scaled_cov(0, 0), 1.0, 0.05));
}

TEST_CASE("lindeberg_array_experiment: heterogeneous weights recover Sigma") {
  const auto report =
      lindeberg_array_experiment(2, {500}, 300, 0.95, 72, linalg::RootMode::symmetric, 2);
  const auto& e = report.entries[0];
  CHECK(close_abs(e.mean_scaled_cov(0, 0), 2.0, 0.15));
  CHECK(close_abs(e.mean_scaled_cov(1, 1), 2.0, 0.15));
  CHECK(close_abs(e.mean_scaled_cov(0, 1), 0.0, 0.15));
  CHECK(e.raikov_median > 0.0);
  CHECK(e.coverage > 0.88);
}
