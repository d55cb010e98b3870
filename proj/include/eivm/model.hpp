#ifndef EIVM_MODEL_HPP
#define EIVM_MODEL_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include "eivm/linalg.hpp"

// Core domain types for the two-variable measurement error model
//   y_i = beta*xi_i + alpha + delta_i,   x_i = xi_i + eps_i,
// plus the sample-moment quantities every estimator is built from.

namespace eivm::model {

// Paired observations (x_i, y_i). Both coordinates are observed with noise.
struct Dataset {
  std::vector<double> x;
  std::vector<double> y;

  std::size_t n() const { return x.size(); }
};

// Validates lengths (equal, >= 3) and finiteness; throws std::invalid_argument.
Dataset make_dataset(std::vector<double> x, std::vector<double> y);

// Everything a generator knows about the data it produced. gamma is the
// error variance targeted by the variant's moment estimator: Var(delta) for
// variant A3, Var(eps) for A1/A2.
struct GroundTruth {
  double beta = 0.0;
  double alpha = 0.0;
  double gamma = 0.0;
  std::vector<double> xi;
  linalg::SymMatrix gamma_matrix;  // 2x2 error covariance, (delta, eps) order
};

// Which identifiability assumption holds and the known error-moment
// constants that come with it.
//   A1: the variance ratio lambda = Var(delta)/Var(eps) is known, and
//       cov(delta, eps) = 0 (mu is implicitly zero, not a field).
//   A2: Var(delta) = lambda_theta and mu = cov(delta, eps) are known.
//   A3: Var(eps) = theta and mu are known.
enum class Variant { A1 = 1, A2 = 2, A3 = 3 };

struct IdentifiabilityConfig {
  Variant variant = Variant::A1;
  double lambda = 1.0;        // A1 only, > 0
  double lambda_theta = 0.0;  // A2 only, >= 0
  double theta = 0.0;         // A3 only, >= 0
  double mu = 0.0;            // A2/A3 only

  static IdentifiabilityConfig a1(double lambda);
  static IdentifiabilityConfig a2(double lambda_theta, double mu);
  static IdentifiabilityConfig a3(double theta, double mu);
};

const char* variant_name(Variant v);

// Sample means and centered second-moment quantities. The aggregate moments
// use divisor n; the per-observation deviation products s_i_uv average back
// to S_uv exactly by construction.
struct MomentStats {
  double x_bar = 0.0;
  double y_bar = 0.0;
  double s_xx = 0.0;
  double s_yy = 0.0;
  double s_xy = 0.0;
  std::vector<double> s_i_xx;
  std::vector<double> s_i_yy;
  std::vector<double> s_i_xy;

  std::size_t n() const { return s_i_xx.size(); }
};

// Two-pass computation: means first, then centered products. The vector
// overload accepts any equal-length pair with n >= 2; estimation itself
// requires a full Dataset (n >= 3).
MomentStats compute_moments(const std::vector<double>& x, const std::vector<double>& y);
MomentStats compute_moments(const Dataset& data);

// CSV interface: header "x,y", one observation per row, no missing values.
// Parse failures throw std::invalid_argument naming the 1-based line.
Dataset read_csv(std::istream& in);
Dataset read_csv_file(const std::string& path);
void write_csv(std::ostream& out, const Dataset& data);

}  // namespace eivm::model

#endif  // EIVM_MODEL_HPP
