#include <doctest.h>

#include <cmath>

#include "eivm/linalg.hpp"
#include "test_support.hpp"

using namespace eivm::linalg;
using test_support::close_abs;
using test_support::random_spd;
using test_support::reconstruction_error;

namespace {

Matrix lower_times_transpose(const LowerTriangular& l) {
  const Matrix m = l.as_matrix();
  return m * m.transposed();
}

}  // namespace

TEST_CASE("cholesky_sqrt: identity is its own factor") {
  const auto l = cholesky_sqrt(SymMatrix::identity(2));
  CHECK(l(0, 0) == 1.0);
  CHECK(l(1, 1) == 1.0);
  CHECK(l(1, 0) == 0.0);
}

TEST_CASE("cholesky_sqrt: 2x2 worked factor and reconstruction") {
  const auto a = SymMatrix::from_rowmajor(2, {4, 2, 2, 5});
  const auto l = cholesky_sqrt(a);
  CHECK(close_abs(l(0, 0), 2.0, 1e-15));
  CHECK(close_abs(l(1, 0), 1.0, 1e-15));
  CHECK(close_abs(l(1, 1), 2.0, 1e-15));
  CHECK(l(0, 1) == 0.0);
  CHECK(reconstruction_error(lower_times_transpose(l), a) <= 1e-14);
}

TEST_CASE("cholesky_sqrt: indefinite matrix rejected") {
  const auto a = SymMatrix::from_rowmajor(2, {1, 2, 2, 1});  // eigenvalues 3, -1
  CHECK_THROWS_AS(cholesky_sqrt(a), eivm::NotPositiveDefinite);
}

TEST_CASE("sym_sqrt: diagonal and identity cases") {
  const auto s = sym_sqrt(SymMatrix::diagonal({4, 9}));
  CHECK(close_abs(s(0, 0), 2.0, 1e-12));
  CHECK(close_abs(s(1, 1), 3.0, 1e-12));
  CHECK(close_abs(s(0, 1), 0.0, 1e-12));

  const auto i3 = sym_sqrt(SymMatrix::identity(3));
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      CHECK(close_abs(i3(i, j), i == j ? 1.0 : 0.0, 1e-14));
}

TEST_CASE("sym_sqrt: closed form for [[2,1],[1,2]]") {
  const auto a = SymMatrix::from_rowmajor(2, {2, 1, 1, 2});
  const auto s = sym_sqrt(a);
  // Eigenvalues 3 and 1 give entries (sqrt(3)+-1)/2.
  CHECK(close_abs(s(0, 0), 1.3660254037844386, 1e-12));
  CHECK(close_abs(s(0, 1), 0.3660254037844386, 1e-12));
  CHECK(close_abs(s(1, 1), 1.3660254037844386, 1e-12));
  CHECK(reconstruction_error(s.as_matrix() * s.as_matrix(), a) <= 1e-12);
}

TEST_CASE("sym_sqrt: output exactly symmetric") {
  eivm::rng::Counter rnd(7);
  for (int rep = 0; rep < 20; ++rep) {
    const auto s = sym_sqrt(random_spd(3, rnd));
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j) CHECK(s(i, j) == s(j, i));
  }
}

TEST_CASE("inv_transpose_sqrt: identity and diagonal") {
  for (RootMode mode : {RootMode::cholesky, RootMode::symmetric}) {
    const auto r = inv_transpose_sqrt(SymMatrix::identity(3), mode);
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 3; ++j)
        CHECK(close_abs(r(i, j), i == j ? 1.0 : 0.0, 1e-13));

    const auto d = inv_transpose_sqrt(SymMatrix::diagonal({4, 9}), mode);
    CHECK(close_abs(d(0, 0), 0.5, 1e-13));
    CHECK(close_abs(d(1, 1), 1.0 / 3.0, 1e-13));
    CHECK(close_abs(d(0, 1), 0.0, 1e-13));
    CHECK(close_abs(d(1, 0), 0.0, 1e-13));
  }
}

TEST_CASE("inv_transpose_sqrt: cholesky mode is transposed inverse factor") {
  // chol([[4,2],[2,5]]) = [[2,0],[1,2]]; its inverse transposed is
  // [[1/2, -1/4], [0, 1/2]].
  const auto a = SymMatrix::from_rowmajor(2, {4, 2, 2, 5});
  const auto r = inv_transpose_sqrt(a, RootMode::cholesky);
  CHECK(close_abs(r(0, 0), 0.5, 1e-14));
  CHECK(close_abs(r(0, 1), -0.25, 1e-14));
  CHECK(close_abs(r(1, 0), 0.0, 1e-14));
  CHECK(close_abs(r(1, 1), 0.5, 1e-14));
}

TEST_CASE("roots reconstruct random SPD matrices") {
  eivm::rng::Counter rnd(123);
  for (std::size_t dim : {2u, 3u, 5u}) {
    for (int rep = 0; rep < 200; ++rep) {
      const SymMatrix a = random_spd(dim, rnd);
      const double norm_a = test_support::frobenius(a);

      const auto l = cholesky_sqrt(a);
      for (std::size_t i = 0; i < dim; ++i) CHECK(l(i, i) > 0.0);
      CHECK(reconstruction_error(lower_times_transpose(l), a) <= 1e-10 * norm_a);

      const auto s = sym_sqrt(a);
      CHECK(reconstruction_error(s.as_matrix() * s.as_matrix(), a) <= 1e-9 * norm_a);

      // A^{T/2} * A^{-T/2} = I for both root conventions.
      for (RootMode mode : {RootMode::cholesky, RootMode::symmetric}) {
        const Matrix root_t = mode == RootMode::cholesky
                                  ? l.as_matrix().transposed()
                                  : s.as_matrix();
        const Matrix prod = root_t * inv_transpose_sqrt(a, mode);
        CHECK(reconstruction_error(prod, SymMatrix::identity(dim)) <= 1e-9 * norm_a);
      }
    }
  }
}

TEST_CASE("pd_inverse agrees with the definition") {
  eivm::rng::Counter rnd(5);
  for (int rep = 0; rep < 50; ++rep) {
    const SymMatrix a = random_spd(3, rnd);
    const SymMatrix inv = pd_inverse(a);
    CHECK(reconstruction_error(a.as_matrix() * inv.as_matrix(),
                               SymMatrix::identity(3)) <= 1e-9 * test_support::frobenius(a));
  }
}

TEST_CASE("dimension limits enforced") {
  CHECK_THROWS_AS(SymMatrix::identity(17), std::invalid_argument);
  CHECK_THROWS_AS(SymMatrix(0), std::invalid_argument);
}
