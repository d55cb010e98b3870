#include <doctest.h>

#include <cmath>

#include "eivm/errors.hpp"
#include "eivm/estimators.hpp"
#include "eivm/rng.hpp"
#include "eivm/simulate.hpp"
#include "test_support.hpp"

using namespace eivm;
using estimators::estimate;
using model::IdentifiabilityConfig;
using model::make_dataset;
using test_support::close_abs;

namespace {

model::Dataset line_012() { return simulate::generate_noiseless(2.0, 1.0, {0, 1, 2}); }

model::Dataset random_noisy(eivm::rng::Counter& rnd, std::size_t n = 60) {
  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double xi = 3.0 * rnd.next_normal();
    x[i] = xi + 0.3 * rnd.next_normal();
    y[i] = 1.5 * xi - 0.7 + 0.3 * rnd.next_normal();
  }
  return make_dataset(x, y);
}

}  // namespace

TEST_CASE("estimate: exact line recovered by all variants") {
  const auto data = line_012();

  const auto e1 = estimate(data, IdentifiabilityConfig::a1(1.0));
  CHECK(close_abs(e1.beta_hat, 2.0, 1e-12));
  CHECK(close_abs(e1.alpha_hat, 1.0, 1e-12));
  CHECK(close_abs(e1.gamma_hat, 0.0, 1e-12));

  const auto e3 = estimate(data, IdentifiabilityConfig::a3(0.0, 0.0));
  CHECK(close_abs(e3.beta_hat, 2.0, 1e-12));
  CHECK(close_abs(e3.alpha_hat, 1.0, 1e-12));
  CHECK(close_abs(e3.gamma_hat, 0.0, 1e-12));

  const auto e2 = estimate(data, IdentifiabilityConfig::a2(0.0, 0.0));
  CHECK(close_abs(e2.beta_hat, 2.0, 1e-12));
  CHECK(close_abs(e2.alpha_hat, 1.0, 1e-12));
  CHECK(close_abs(e2.gamma_hat, 0.0, 1e-12));
}

TEST_CASE("estimate: flat response degenerates variant A1") {
  const auto data = make_dataset({1, 2, 3}, {5, 5, 5});
  try {
    estimate(data, IdentifiabilityConfig::a1(1.0));
    FAIL("expected DegenerateDenominator");
  } catch (const DegenerateDenominator& e) {
    CHECK(e.name() == "S_xy");
    CHECK(e.value() == 0.0);
  }
}

TEST_CASE("estimate: noiseless recovery on random lines") {
  eivm::rng::Counter rnd(21);
  for (int rep = 0; rep < 50; ++rep) {
    double beta = 6.0 * rnd.next_unit() - 3.0;
    if (std::abs(beta) < 0.2) beta += beta >= 0 ? 0.5 : -0.5;
    const double alpha = 10.0 * rnd.next_unit() - 5.0;
    std::vector<double> x(50);
    for (auto& v : x) v = 4.0 * rnd.next_normal();
    const auto data = simulate::generate_noiseless(beta, alpha, x);

    for (const auto& config :
         {IdentifiabilityConfig::a1(1.7), IdentifiabilityConfig::a2(0.0, 0.0),
          IdentifiabilityConfig::a3(0.0, 0.0)}) {
      const auto e = estimate(data, config);
      CHECK(close_abs(e.beta_hat, beta, 1e-10));
      CHECK(close_abs(e.alpha_hat, alpha, 1e-10));
      CHECK(close_abs(e.gamma_hat, 0.0, 1e-10));
    }
  }
}

TEST_CASE("estimate: orthogonal-regression reciprocity under A1 with lambda 1") {
  eivm::rng::Counter rnd(22);
  const auto config = IdentifiabilityConfig::a1(1.0);
  int checked = 0;
  for (int rep = 0; rep < 200; ++rep) {
    const auto data = random_noisy(rnd);
    const auto m = model::compute_moments(data);
    if (m.s_xy <= 0.0) continue;
    const auto fwd = estimate(data, config);
    const auto rev = estimate(make_dataset(data.y, data.x), config);
    CHECK(close_abs(fwd.beta_hat * rev.beta_hat, 1.0, 1e-10));
    ++checked;
  }
  CHECK(checked > 150);
}

TEST_CASE("estimate: translation equivariance") {
  eivm::rng::Counter rnd(23);
  const double c = 4.5, d = -2.25;
  for (const auto& config :
       {IdentifiabilityConfig::a1(1.0), IdentifiabilityConfig::a2(0.09, 0.0),
        IdentifiabilityConfig::a3(0.09, 0.0)}) {
    for (int rep = 0; rep < 30; ++rep) {
      const auto data = random_noisy(rnd);
      const auto base = estimate(data, config);

      std::vector<double> xs = data.x, ys = data.y;
      for (auto& v : xs) v += c;
      for (auto& v : ys) v += d;
      const auto shifted = estimate(make_dataset(xs, ys), config);

      CHECK(close_abs(shifted.beta_hat, base.beta_hat, 1e-10));
      CHECK(close_abs(shifted.alpha_hat, base.alpha_hat + d - c * base.beta_hat, 1e-10));
      CHECK(close_abs(shifted.gamma_hat, base.gamma_hat, 1e-10));
    }
  }
}

TEST_CASE("estimate: A1 slope sign matches S_xy") {
  eivm::rng::Counter rnd(24);
  for (int rep = 0; rep < 100; ++rep) {
    std::vector<double> x(30), y(30);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rnd.next_normal();
      y[i] = rnd.next_normal();
    }
    const auto data = make_dataset(x, y);
    const auto m = model::compute_moments(data);
    if (std::abs(m.s_xy) < 1e-6) continue;
    const auto e = estimate(data, IdentifiabilityConfig::a1(2.0));
    CHECK(std::signbit(e.beta_hat) == std::signbit(m.s_xy));
  }
}

TEST_CASE("estimate: A2/A3 provisos") {
  // y variance below the known Var(delta) violates S_yy - lambda_theta > 0.
  const auto quiet = make_dataset({0, 1, 2, 3}, {0.0, 0.01, 0.0, 0.01});
  CHECK_THROWS_AS(estimate(quiet, IdentifiabilityConfig::a2(5.0, 0.0)),
                  DegenerateDenominator);

  // x variance below the known Var(eps) violates S_xx - theta > 0.
  const auto narrow = make_dataset({0, 0.1, 0.2}, {0, 1, 2});
  CHECK_THROWS_AS(estimate(narrow, IdentifiabilityConfig::a3(5.0, 0.0)),
                  DegenerateDenominator);
}

TEST_CASE("estimate: negative moment estimate flagged, not clamped") {
  // Exact line with an overstated known Var(eps) drives gamma negative.
  const auto data = simulate::generate_noiseless(1.0, 0.0, {0, 1, 2});
  const auto e = estimate(data, IdentifiabilityConfig::a3(0.5, 0.0));
  CHECK(e.gamma_hat < 0.0);
  CHECK(e.gamma_negative);
}
