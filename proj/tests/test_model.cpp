#include <doctest.h>

#include <sstream>

#include "eivm/model.hpp"
#include "eivm/rng.hpp"
#include "test_support.hpp"

using namespace eivm::model;
using test_support::close_abs;
using test_support::close_rel;

TEST_CASE("compute_moments: constant data has zero moments") {
  const auto m = compute_moments(make_dataset({1, 1, 1}, {5, 5, 5}));
  CHECK(m.s_xx == 0.0);
  CHECK(m.s_yy == 0.0);
  CHECK(m.s_xy == 0.0);
}

TEST_CASE("compute_moments: hand-computed centered sums") {
  const auto m = compute_moments(make_dataset({1, 2, 3}, {1, 2, 3}));
  CHECK(close_abs(m.x_bar, 2.0, 1e-15));
  CHECK(close_abs(m.s_xx, 2.0 / 3.0, 1e-15));
  CHECK(close_abs(m.s_xy, 2.0 / 3.0, 1e-15));
  CHECK(close_abs(m.s_yy, 2.0 / 3.0, 1e-15));

  // Two-point case exercises the raw-vector overload.
  const auto m2 = compute_moments(std::vector<double>{1, 2}, std::vector<double>{2, 1});
  CHECK(close_abs(m2.s_xy, -0.25, 1e-15));
  CHECK(close_abs(m2.s_xx, 0.25, 1e-15));
  CHECK(close_abs(m2.s_yy, 0.25, 1e-15));
}

TEST_CASE("compute_moments: divisor is n and per-row products average back") {
  eivm::rng::Counter rnd(11);
  std::vector<double> x(37), y(37);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = 10.0 * rnd.next_unit();
    y[i] = 10.0 * rnd.next_unit();
  }
  const auto m = compute_moments(make_dataset(x, y));
  double axx = 0, ayy = 0, axy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    axx += m.s_i_xx[i];
    ayy += m.s_i_yy[i];
    axy += m.s_i_xy[i];
  }
  const double n = static_cast<double>(x.size());
  CHECK(close_rel(m.s_xx, axx / n, 1e-12));
  CHECK(close_rel(m.s_yy, ayy / n, 1e-12));
  CHECK(close_rel(m.s_xy, axy / n, 1e-12));
  CHECK(m.s_xx >= 0.0);
  CHECK(m.s_yy >= 0.0);
  CHECK(m.s_xy * m.s_xy <= m.s_xx * m.s_yy * (1.0 + 1e-12));
}

TEST_CASE("compute_moments: translation invariance and scaling") {
  eivm::rng::Counter rnd(12);
  for (int rep = 0; rep < 25; ++rep) {
    std::vector<double> x(20), y(20);
    for (std::size_t i = 0; i < x.size(); ++i) {
      x[i] = rnd.next_normal();
      y[i] = rnd.next_normal();
    }
    const auto base = compute_moments(make_dataset(x, y));

    const double c = 7.25, d = -3.5;
    std::vector<double> xs = x, ys = y;
    for (auto& v : xs) v += c;
    for (auto& v : ys) v += d;
    const auto shifted = compute_moments(make_dataset(xs, ys));
    CHECK(close_rel(shifted.s_xx, base.s_xx, 1e-10));
    CHECK(close_rel(shifted.s_yy, base.s_yy, 1e-10));
    CHECK(close_rel(shifted.s_xy, base.s_xy, 1e-10));

    const double a = 2.5;
    std::vector<double> xa = x;
    for (auto& v : xa) v *= a;
    const auto scaled = compute_moments(make_dataset(xa, y));
    CHECK(close_rel(scaled.s_xx, a * a * base.s_xx, 1e-12));
    CHECK(close_rel(scaled.s_xy, a * base.s_xy, 1e-12));
  }
}

TEST_CASE("make_dataset: invariants") {
  CHECK_THROWS_AS(make_dataset({1, 2}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({1, 2, 3}, {1, 2}), std::invalid_argument);
  CHECK_THROWS_AS(make_dataset({1, 2, std::nan("")}, {1, 2, 3}), std::invalid_argument);
}

TEST_CASE("csv: round trip") {
  const Dataset d = make_dataset({0.5, 1.25, -3.75}, {2.0, 0.1, 1e-7});
  std::stringstream ss;
  write_csv(ss, d);
  const Dataset back = read_csv(ss);
  REQUIRE(back.n() == d.n());
  for (std::size_t i = 0; i < d.n(); ++i) {
    CHECK(back.x[i] == d.x[i]);
    CHECK(back.y[i] == d.y[i]);
  }
}

TEST_CASE("csv: errors name the offending line") {
  std::stringstream bad_header("a,b\n1,2\n");
  CHECK_THROWS_WITH_AS(read_csv(bad_header), doctest::Contains("line 1"),
                       std::invalid_argument);

  std::stringstream bad_row("x,y\n1,2\nabc,1\n3,4\n");
  CHECK_THROWS_WITH_AS(read_csv(bad_row), doctest::Contains("line 3"),
                       std::invalid_argument);

  std::stringstream missing("x,y\n1\n");
  CHECK_THROWS_AS(read_csv(missing), std::invalid_argument);
}
