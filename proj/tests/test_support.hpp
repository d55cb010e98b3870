#ifndef EIVM_TEST_SUPPORT_HPP
#define EIVM_TEST_SUPPORT_HPP

#include <cmath>
#include <functional>
#include <vector>

#include "eivm/linalg.hpp"
#include "eivm/rng.hpp"

// Shared helpers for the test suites: tolerance checks, random test-data
// generators, and independent numeric oracles (quadrature; reconstruction by
// explicit multiplication) kept apart from the implementation paths they
// check.

namespace test_support {

inline bool close_abs(double a, double b, double tol) { return std::abs(a - b) <= tol; }

inline bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Random SPD matrix M*M^T + eps*I.
inline eivm::linalg::SymMatrix random_spd(std::size_t dim, eivm::rng::Counter& rnd,
                                          double eps = 1e-3) {
  eivm::linalg::Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j < dim; ++j) m(i, j) = 2.0 * rnd.next_unit() - 1.0;
  eivm::linalg::SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < dim; ++k) v += m(i, k) * m(j, k);
      s.set(i, j, v + (i == j ? eps : 0.0));
    }
  return s;
}

inline double frobenius(const eivm::linalg::SymMatrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

// Frobenius distance between a general product and a symmetric target.
inline double reconstruction_error(const eivm::linalg::Matrix& product,
                                   const eivm::linalg::SymMatrix& target) {
  double s = 0.0;
  for (std::size_t i = 0; i < target.dim(); ++i)
    for (std::size_t j = 0; j < target.dim(); ++j) {
      const double d = product(i, j) - target(i, j);
      s += d * d;
    }
  return std::sqrt(s);
}

// Composite Simpson quadrature, the independent oracle for CDF checks.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      int intervals = 4000) {
  if (intervals % 2 == 1) ++intervals;
  const double h = (b - a) / intervals;
  double s = f(a) + f(b);
  for (int i = 1; i < intervals; ++i) s += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return s * h / 3.0;
}

}  // namespace test_support

#endif  // EIVM_TEST_SUPPORT_HPP
