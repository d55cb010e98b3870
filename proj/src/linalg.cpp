#include "eivm/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace eivm::linalg {

namespace {

void check_dim(std::size_t dim) {
  if (dim < 1) throw std::invalid_argument("matrix dimension must be >= 1");
  if (dim > kMaxDim)
    throw std::invalid_argument("matrix dimension " + std::to_string(dim) +
                                " exceeds supported maximum " + std::to_string(kMaxDim));
}

double pd_cutoff(const SymMatrix& a) {
  return kPdTolerance * std::max(a.trace(), 0.0);
}

}  // namespace

Matrix Matrix::identity(std::size_t dim) {
  Matrix m(dim);
  for (std::size_t i = 0; i < dim; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.dim() != b.dim()) throw std::invalid_argument("matrix product: dimension mismatch");
  const std::size_t n = a.dim();
  Matrix c(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

SymMatrix::SymMatrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) { check_dim(dim); }

SymMatrix SymMatrix::from_rowmajor(std::size_t dim, const std::vector<double>& entries) {
  check_dim(dim);
  if (entries.size() != dim * dim)
    throw std::invalid_argument("from_rowmajor: wrong number of entries");
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i)
    for (std::size_t j = 0; j <= i; ++j) s.set(i, j, entries[i * dim + j]);
  return s;
}

SymMatrix SymMatrix::identity(std::size_t dim) {
  SymMatrix s(dim);
  for (std::size_t i = 0; i < dim; ++i) s.set(i, i, 1.0);
  return s;
}

SymMatrix SymMatrix::diagonal(const std::vector<double>& d) {
  SymMatrix s(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) s.set(i, i, d[i]);
  return s;
}

void SymMatrix::set(std::size_t i, std::size_t j, double v) {
  a_[i * dim_ + j] = v;
  a_[j * dim_ + i] = v;
}

double SymMatrix::trace() const {
  double t = 0.0;
  for (std::size_t i = 0; i < dim_; ++i) t += (*this)(i, i);
  return t;
}

Matrix SymMatrix::as_matrix() const {
  Matrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j < dim_; ++j) m(i, j) = (*this)(i, j);
  return m;
}

Matrix LowerTriangular::as_matrix() const {
  Matrix m(dim_);
  for (std::size_t i = 0; i < dim_; ++i)
    for (std::size_t j = 0; j <= i; ++j) m(i, j) = (*this)(i, j);
  return m;
}

LowerTriangular LowerTriangular::inverse() const {
  LowerTriangular inv(dim_);
  for (std::size_t j = 0; j < dim_; ++j) {
    inv.at(j, j) = 1.0 / (*this)(j, j);
    for (std::size_t i = j + 1; i < dim_; ++i) {
      double s = 0.0;
      for (std::size_t k = j; k < i; ++k) s += (*this)(i, k) * inv(k, j);
      inv.at(i, j) = -s / (*this)(i, i);
    }
  }
  return inv;
}

LowerTriangular cholesky_sqrt(const SymMatrix& a) {
  const std::size_t n = a.dim();
  check_dim(n);
  const double cutoff = pd_cutoff(a);
  LowerTriangular l(n);
  for (std::size_t j = 0; j < n; ++j) {
    double d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    if (d <= cutoff)
      throw NotPositiveDefinite("cholesky pivot " + std::to_string(j) + " = " +
                                std::to_string(d) + " below tolerance");
    l.at(j, j) = std::sqrt(d);
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l.at(i, j) = s / l(j, j);
    }
  }
  return l;
}

EigenSym eigen_sym(const SymMatrix& a) {
  const std::size_t n = a.dim();
  check_dim(n);
  Matrix m = a.as_matrix();
  Matrix q = Matrix::identity(n);

  // Cyclic Jacobi sweeps; converges quadratically once the off-diagonal
  // mass is small.
  for (int sweep = 0; sweep < 30; ++sweep) {
    double off = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) off += std::abs(m(i, j));
    if (off == 0.0) break;

    for (std::size_t p = 0; p < n; ++p) {
      for (std::size_t r = p + 1; r < n; ++r) {
        const double apr = m(p, r);
        const double scale = std::abs(m(p, p)) + std::abs(m(r, r));
        if (std::abs(apr) <= 1e-18 * scale || apr == 0.0) continue;

        const double theta = (m(r, r) - m(p, p)) / (2.0 * apr);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;

        for (std::size_t k = 0; k < n; ++k) {
          const double mkp = m(k, p), mkr = m(k, r);
          m(k, p) = c * mkp - s * mkr;
          m(k, r) = s * mkp + c * mkr;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double mpk = m(p, k), mrk = m(r, k);
          m(p, k) = c * mpk - s * mrk;
          m(r, k) = s * mpk + c * mrk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double qkp = q(k, p), qkr = q(k, r);
          q(k, p) = c * qkp - s * qkr;
          q(k, r) = s * qkp + c * qkr;
        }
      }
    }
  }

  EigenSym e;
  e.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) e.values[i] = m(i, i);
  e.vectors = q;
  return e;
}

namespace {

// Q f(diag) Q^T assembled symmetrically (compute lower triangle, mirror up).
SymMatrix assemble_spectral(const EigenSym& e, const std::vector<double>& f) {
  const std::size_t n = e.values.size();
  SymMatrix s(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = 0; k < n; ++k) v += e.vectors(i, k) * f[k] * e.vectors(j, k);
      s.set(i, j, v);
    }
  return s;
}

void check_min_eigen(const SymMatrix& a, const EigenSym& e) {
  const double cutoff = pd_cutoff(a);
  double wmin = e.values[0];
  for (double w : e.values) wmin = std::min(wmin, w);
  if (wmin <= cutoff)
    throw NotPositiveDefinite("minimum eigenvalue " + std::to_string(wmin) +
                              " below tolerance");
}

}  // namespace

SymMatrix sym_sqrt(const SymMatrix& a) {
  EigenSym e = eigen_sym(a);
  check_min_eigen(a, e);
  std::vector<double> f(e.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = std::sqrt(e.values[k]);
  return assemble_spectral(e, f);
}

Matrix inv_transpose_sqrt(const SymMatrix& a, RootMode mode) {
  if (mode == RootMode::cholesky) {
    // (L^{-1})^T, upper triangular.
    return cholesky_sqrt(a).inverse().as_matrix().transposed();
  }
  EigenSym e = eigen_sym(a);
  check_min_eigen(a, e);
  std::vector<double> f(e.values.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = 1.0 / std::sqrt(e.values[k]);
  return assemble_spectral(e, f).as_matrix();
}

SymMatrix pd_inverse(const SymMatrix& a) {
  LowerTriangular linv = cholesky_sqrt(a).inverse();
  // A^{-1} = L^{-T} L^{-1}
  const std::size_t n = a.dim();
  SymMatrix inv(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      double v = 0.0;
      for (std::size_t k = std::max(i, j); k < n; ++k) v += linv(k, i) * linv(k, j);
      inv.set(i, j, v);
    }
  return inv;
}

bool is_positive_definite(const SymMatrix& a) {
  try {
    cholesky_sqrt(a);
    return true;
  } catch (const NotPositiveDefinite&) {
    return false;
  }
}

std::vector<double> row_times(const std::vector<double>& row, const Matrix& m) {
  if (row.size() != m.dim()) throw std::invalid_argument("row_times: dimension mismatch");
  std::vector<double> out(row.size(), 0.0);
  for (std::size_t j = 0; j < row.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < row.size(); ++i) s += row[i] * m(i, j);
    out[j] = s;
  }
  return out;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (std::size_t i = 0; i < m.dim(); ++i)
    for (std::size_t j = 0; j < m.dim(); ++j) s += m(i, j) * m(i, j);
  return std::sqrt(s);
}

}  // namespace eivm::linalg
