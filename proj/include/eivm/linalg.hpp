#ifndef EIVM_LINALG_HPP
#define EIVM_LINALG_HPP

#include <cstddef>
#include <vector>

#include "eivm/errors.hpp"

// Small dense symmetric-matrix utilities: positive definiteness checks,
// Cholesky and symmetric positive definite square roots, and the
// inverse-transpose roots used for Studentization. Everything here is sized
// for tiny matrices (typically 2x2 or 3x3, at most kMaxDim).

namespace eivm::linalg {

inline constexpr std::size_t kMaxDim = 16;

// A matrix is rejected as non-PD when a Cholesky pivot or minimum eigenvalue
// falls at or below this fraction of trace(A). Scale-relative guard against
// near-singular Studentization matrices.
inline constexpr double kPdTolerance = 1e-12;

enum class RootMode { cholesky, symmetric };

// Dense square matrix, row-major. General (not necessarily symmetric);
// used for inverse-transpose roots and intermediate products.
class Matrix {
 public:
  Matrix() : dim_(0) {}
  explicit Matrix(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}
  static Matrix identity(std::size_t dim);

  std::size_t dim() const { return dim_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }

  Matrix transposed() const;

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

Matrix operator*(const Matrix& a, const Matrix& b);

// Symmetric matrix. Construction mirrors the lower triangle into the upper
// one, so entries(i,j) == entries(j,i) holds exactly.
class SymMatrix {
 public:
  SymMatrix() : dim_(0) {}
  explicit SymMatrix(std::size_t dim);

  // Builds from row-major entries; the strict upper triangle is ignored and
  // replaced by the mirror of the lower triangle.
  static SymMatrix from_rowmajor(std::size_t dim, const std::vector<double>& entries);
  static SymMatrix identity(std::size_t dim);
  static SymMatrix diagonal(const std::vector<double>& d);

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  // Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, double v);

  double trace() const;
  Matrix as_matrix() const;

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

// Lower triangular matrix with zeros strictly above the diagonal. When
// produced by cholesky_sqrt the diagonal entries are strictly positive.
class LowerTriangular {
 public:
  LowerTriangular() : dim_(0) {}
  explicit LowerTriangular(std::size_t dim) : dim_(dim), a_(dim * dim, 0.0) {}

  std::size_t dim() const { return dim_; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * dim_ + j]; }
  double& at(std::size_t i, std::size_t j) { return a_[i * dim_ + j]; }

  Matrix as_matrix() const;
  // Inverse by forward substitution; result is again lower triangular.
  LowerTriangular inverse() const;

 private:
  std::size_t dim_;
  std::vector<double> a_;
};

// Left Cholesky square root: L lower triangular with positive diagonal and
// L*L^T = A. Throws NotPositiveDefinite if a pivot <= kPdTolerance*trace(A).
LowerTriangular cholesky_sqrt(const SymMatrix& a);

// Symmetric eigendecomposition A = Q diag(w) Q^T by cyclic Jacobi rotations.
// eigenvectors are the columns of q.
struct EigenSym {
  std::vector<double> values;
  Matrix vectors;
};
EigenSym eigen_sym(const SymMatrix& a);

// Symmetric positive definite square root: S symmetric PD with S*S = A.
// Throws NotPositiveDefinite if min eigenvalue <= kPdTolerance*trace(A).
SymMatrix sym_sqrt(const SymMatrix& a);

// A^{-T/2} = (A^{-1/2})^T for the chosen root convention. For the symmetric
// root this equals A^{-1/2}; for the Cholesky root it is upper triangular.
Matrix inv_transpose_sqrt(const SymMatrix& a, RootMode mode);

// Inverse of a PD matrix via its Cholesky factor.
SymMatrix pd_inverse(const SymMatrix& a);

// True iff cholesky_sqrt would succeed.
bool is_positive_definite(const SymMatrix& a);

// row (length dim) times square matrix -> row.
std::vector<double> row_times(const std::vector<double>& row, const Matrix& m);

double frobenius_norm(const Matrix& m);

}  // namespace eivm::linalg

#endif  // EIVM_LINALG_HPP
