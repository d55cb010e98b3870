#ifndef EIVM_SIMULATE_HPP
#define EIVM_SIMULATE_HPP

#include <cstdint>
#include <cstddef>
#include <utility>
#include <vector>

#include "eivm/linalg.hpp"
#include "eivm/model.hpp"
#include "eivm/rng.hpp"

// Synthetic data generation for the structural model (random i.i.d.
// explanatory variables, possibly with infinite variance) and the functional
// model (deterministic designs, possibly with divergent second moments).

namespace eivm::simulate {

using model::Dataset;
using model::GroundTruth;
using model::IdentifiabilityConfig;
using model::Variant;

// Mean-zero i.i.d. error pairs (delta, eps) with covariance gamma_matrix and
// finite fourth moments. gaussian_plus_discrete keeps delta continuous while
// eps is a symmetric two-point variable at +-sqrt(Var eps).
enum class ErrorKindFamily {
  gaussian_correlated,
  uniform_independent,
  gaussian_plus_discrete,
};

struct ErrorFamily {
  ErrorKindFamily kind = ErrorKindFamily::gaussian_correlated;
  linalg::SymMatrix gamma_matrix;  // 2x2, order (delta, eps), positive definite
};

// Validates positive definiteness and per-kind structural requirements
// (uniform_independent needs a diagonal gamma).
void validate_error_family(const ErrorFamily& family);

// i.i.d. explanatory variables. pareto_symmetric_tail2 has
// P(|xi - m| > t) = t^{-2} for t >= 1: infinite variance, yet still
// normal-attracted, which is the stress case for the slope CLTs.
struct XiFamily {
  enum class Kind { normal, uniform, pareto_symmetric_tail2 };
  Kind kind = Kind::normal;
  double p1 = 0.0;  // normal: mean; uniform: a; pareto: center m
  double p2 = 1.0;  // normal: variance; uniform: b; pareto: unused

  static XiFamily normal(double mean, double var);
  static XiFamily uniform(double a, double b);
  static XiFamily pareto_symmetric_tail2(double m);
};

// Deterministic designs. equispaced has bounded second moments;
// alternating_growth xi_i = (-1)^i i^p with 0 < p < 1/2 has a vanishing mean,
// a divergent mean square, and a max-square share of order 1/n.
struct DesignFamily {
  enum class Kind { equispaced, alternating_growth };
  Kind kind = Kind::equispaced;
  double a = 0.0;  // equispaced lower endpoint
  double b = 1.0;  // equispaced upper endpoint
  double p = 0.25; // alternating_growth exponent

  static DesignFamily equispaced(double a, double b);
  static DesignFamily alternating_growth(double p);
};

struct Scenario {
  enum class Model { structural, functional };
  Model model = Model::structural;
  XiFamily xi;          // used when model == structural
  DesignFamily design;  // used when model == functional
  ErrorFamily errors;
  double beta = 0.0;
  double alpha = 0.0;
  std::size_t n = 0;
  IdentifiabilityConfig identifiability;
};

// Checks the scenario invariants, in particular that the identifiability
// constants agree with gamma_matrix (A1: zero covariance and matching ratio;
// A2: Var delta and mu; A3: Var eps and mu). Throws std::invalid_argument.
void validate(const Scenario& scenario);

// The error variance the scenario's variant estimates: Var(delta) under A3,
// Var(eps) under A1/A2.
double true_gamma(const Scenario& scenario);

std::vector<std::pair<double, double>> generate_errors(const ErrorFamily& family,
                                                       std::size_t n,
                                                       std::uint64_t seed);

std::vector<double> generate_xi(const XiFamily& family, std::size_t n,
                                std::uint64_t seed);

// Deterministic design values xi_1..xi_n.
std::vector<double> design_xi(const DesignFamily& family, std::size_t n);

// Draws a dataset according to the scenario. The xi draws and the error
// draws come from disjoint substreams of `seed`, so the explanatory
// variables are independent of the errors by construction.
std::pair<Dataset, GroundTruth> generate(const Scenario& scenario, std::uint64_t seed);

// Exact line y = beta*x + alpha, for degenerate-input paths that a proper
// scenario (whose error covariance must be positive definite) cannot reach.
Dataset generate_noiseless(double beta, double alpha, const std::vector<double>& x);

}  // namespace eivm::simulate

#endif  // EIVM_SIMULATE_HPP
