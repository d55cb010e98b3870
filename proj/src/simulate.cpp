#include "eivm/simulate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace eivm::simulate {

namespace {

constexpr std::uint64_t kXiStream = 0;
constexpr std::uint64_t kErrorStream = 1;

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * (1.0 + std::abs(a) + std::abs(b));
}

}  // namespace

XiFamily XiFamily::normal(double mean, double var) {
  if (!(var > 0.0)) throw std::invalid_argument("xi normal: variance must be > 0");
  return {Kind::normal, mean, var};
}

XiFamily XiFamily::uniform(double a, double b) {
  if (!(a < b)) throw std::invalid_argument("xi uniform: need a < b");
  return {Kind::uniform, a, b};
}

XiFamily XiFamily::pareto_symmetric_tail2(double m) {
  return {Kind::pareto_symmetric_tail2, m, 0.0};
}

DesignFamily DesignFamily::equispaced(double a, double b) {
  DesignFamily d;
  d.kind = Kind::equispaced;
  d.a = a;
  d.b = b;
  return d;
}

DesignFamily DesignFamily::alternating_growth(double p) {
  if (!(p > 0.0 && p < 0.5))
    throw std::invalid_argument("alternating_growth: exponent must be in (0, 1/2)");
  DesignFamily d;
  d.kind = Kind::alternating_growth;
  d.p = p;
  return d;
}

void validate_error_family(const ErrorFamily& family) {
  const auto& g = family.gamma_matrix;
  if (g.dim() != 2)
    throw std::invalid_argument("error family: gamma_matrix must be 2x2");
  if (!linalg::is_positive_definite(g))
    throw std::invalid_argument("error family: gamma_matrix must be positive definite");
  if (family.kind == ErrorKindFamily::uniform_independent && g(0, 1) != 0.0)
    throw std::invalid_argument(
        "uniform_independent errors require a diagonal gamma_matrix");
}

void validate(const Scenario& scenario) {
  if (scenario.n < 3) throw std::invalid_argument("scenario: n must be >= 3");
  validate_error_family(scenario.errors);
  if (scenario.model == Scenario::Model::functional &&
      scenario.design.kind == DesignFamily::Kind::alternating_growth &&
      !(scenario.design.p > 0.0 && scenario.design.p < 0.5))
    throw std::invalid_argument("scenario: alternating_growth exponent out of range");

  const auto& g = scenario.errors.gamma_matrix;
  const auto& id = scenario.identifiability;
  const double var_delta = g(0, 0);
  const double var_eps = g(1, 1);
  const double cov = g(0, 1);
  const double tol = 1e-9;
  switch (id.variant) {
    case Variant::A1:
      if (cov != 0.0)
        throw std::invalid_argument(
            "inconsistent identifiability constants: variant A1 requires zero error "
            "covariance, gamma_matrix has " + std::to_string(cov));
      if (!close_rel(id.lambda, var_delta / var_eps, tol))
        throw std::invalid_argument(
            "inconsistent identifiability constants: lambda does not match the "
            "variance ratio of gamma_matrix");
      break;
    case Variant::A2:
      if (!close_rel(id.lambda_theta, var_delta, tol) || !close_rel(id.mu, cov, tol))
        throw std::invalid_argument(
            "inconsistent identifiability constants: variant A2 constants do not "
            "match gamma_matrix");
      break;
    case Variant::A3:
      if (!close_rel(id.theta, var_eps, tol) || !close_rel(id.mu, cov, tol))
        throw std::invalid_argument(
            "inconsistent identifiability constants: variant A3 constants do not "
            "match gamma_matrix");
      break;
  }
}

double true_gamma(const Scenario& scenario) {
  const auto& g = scenario.errors.gamma_matrix;
  return scenario.identifiability.variant == Variant::A3 ? g(0, 0) : g(1, 1);
}

std::vector<std::pair<double, double>> generate_errors(const ErrorFamily& family,
                                                       std::size_t n,
                                                       std::uint64_t seed) {
  validate_error_family(family);
  const auto& g = family.gamma_matrix;
  rng::Counter rnd(seed);
  std::vector<std::pair<double, double>> out(n);

  switch (family.kind) {
    case ErrorKindFamily::gaussian_correlated: {
      const linalg::LowerTriangular l = linalg::cholesky_sqrt(g);
      for (std::size_t i = 0; i < n; ++i) {
        const double g1 = rnd.next_normal();
        const double g2 = rnd.next_normal();
        out[i] = {l(0, 0) * g1, l(1, 0) * g1 + l(1, 1) * g2};
      }
      break;
    }
    case ErrorKindFamily::uniform_independent: {
      const double hd = std::sqrt(3.0 * g(0, 0));
      const double he = std::sqrt(3.0 * g(1, 1));
      for (std::size_t i = 0; i < n; ++i) {
        const double u1 = rnd.next_unit();
        const double u2 = rnd.next_unit();
        out[i] = {hd * (2.0 * u1 - 1.0), he * (2.0 * u2 - 1.0)};
      }
      break;
    }
    case ErrorKindFamily::gaussian_plus_discrete: {
      // eps = +-sqrt(theta); delta = (mu/theta)*eps + gaussian remainder, so
      // Cov(delta, eps) = mu and Var(delta) = lambda*theta.
      const double theta = g(1, 1);
      const double mu = g(0, 1);
      const double step = std::sqrt(theta);
      const double slope = mu / theta;
      const double resid_sd =
          std::sqrt((g(0, 0) * theta - mu * mu) / theta);  // det(gamma)/theta > 0
      for (std::size_t i = 0; i < n; ++i) {
        const double eps = rnd.next_sign_bit() ? step : -step;
        const double delta = slope * eps + resid_sd * rnd.next_normal();
        out[i] = {delta, eps};
      }
      break;
    }
  }
  return out;
}

std::vector<double> generate_xi(const XiFamily& family, std::size_t n,
                                std::uint64_t seed) {
  rng::Counter rnd(seed);
  std::vector<double> xi(n);
  switch (family.kind) {
    case XiFamily::Kind::normal: {
      const double sd = std::sqrt(family.p2);
      for (std::size_t i = 0; i < n; ++i) xi[i] = family.p1 + sd * rnd.next_normal();
      break;
    }
    case XiFamily::Kind::uniform: {
      const double span = family.p2 - family.p1;
      for (std::size_t i = 0; i < n; ++i) xi[i] = family.p1 + span * rnd.next_unit();
      break;
    }
    case XiFamily::Kind::pareto_symmetric_tail2: {
      // |xi - m| = U^{-1/2} with U uniform(0,1), random sign: the tail is
      // exactly t^{-2} beyond 1.
      for (std::size_t i = 0; i < n; ++i) {
        const double mag = 1.0 / std::sqrt(rnd.next_unit());
        xi[i] = family.p1 + (rnd.next_sign_bit() ? mag : -mag);
      }
      break;
    }
  }
  return xi;
}

std::vector<double> design_xi(const DesignFamily& family, std::size_t n) {
  std::vector<double> xi(n);
  switch (family.kind) {
    case DesignFamily::Kind::equispaced: {
      const double span = family.b - family.a;
      for (std::size_t i = 1; i <= n; ++i)
        xi[i - 1] = family.a + span * static_cast<double>(i) / static_cast<double>(n);
      break;
    }
    case DesignFamily::Kind::alternating_growth: {
      if (!(family.p > 0.0 && family.p < 0.5))
        throw std::invalid_argument("alternating_growth: exponent must be in (0, 1/2)");
      for (std::size_t i = 1; i <= n; ++i) {
        const double mag = std::pow(static_cast<double>(i), family.p);
        xi[i - 1] = (i % 2 == 0) ? mag : -mag;
      }
      break;
    }
  }
  return xi;
}

std::pair<Dataset, GroundTruth> generate(const Scenario& scenario, std::uint64_t seed) {
  validate(scenario);
  const std::size_t n = scenario.n;

  std::vector<double> xi =
      scenario.model == Scenario::Model::structural
          ? generate_xi(scenario.xi, n, rng::derive_key(seed, kXiStream))
          : design_xi(scenario.design, n);
  const auto errors =
      generate_errors(scenario.errors, n, rng::derive_key(seed, kErrorStream));

  std::vector<double> x(n), y(n);
  for (std::size_t i = 0; i < n; ++i) {
    y[i] = scenario.beta * xi[i] + scenario.alpha + errors[i].first;
    x[i] = xi[i] + errors[i].second;
  }

  GroundTruth truth;
  truth.beta = scenario.beta;
  truth.alpha = scenario.alpha;
  truth.gamma = true_gamma(scenario);
  truth.xi = std::move(xi);
  truth.gamma_matrix = scenario.errors.gamma_matrix;
  return {model::make_dataset(std::move(x), std::move(y)), std::move(truth)};
}

Dataset generate_noiseless(double beta, double alpha, const std::vector<double>& x) {
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = beta * x[i] + alpha;
  return model::make_dataset(x, std::move(y));
}

}  // namespace eivm::simulate
