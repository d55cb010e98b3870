#include "eivm/studentize.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "eivm/errors.hpp"

namespace eivm::studentize {

namespace {

double scaling_u(Variant j, const MomentStats& stats, const IdentifiabilityConfig& config) {
  switch (j) {
    case Variant::A1: return 2.0 * stats.s_xy;
    case Variant::A2: return stats.s_xy - config.mu;
    case Variant::A3: return stats.s_xx - config.theta;
  }
  return 0.0;
}

void check_variant_match(Variant j, const IdentifiabilityConfig& config) {
  if (j != config.variant)
    throw std::invalid_argument("variant does not match identifiability config");
}

}  // namespace

Scalings scaling_factors(Variant j, const MomentStats& stats,
                         const IdentifiabilityConfig& config, double beta_hat,
                         std::size_t n) {
  check_variant_match(j, config);
  if (n < 3) throw std::invalid_argument("scaling_factors: need n >= 3");
  Scalings s;
  s.variant = j;
  s.u = scaling_u(j, stats, config);
  s.l = (j == Variant::A1)
            ? static_cast<double>(n - 2) * (config.lambda + beta_hat * beta_hat) /
                  static_cast<double>(n)
            : 1.0;
  return s;
}

ZRows build_z(const MomentStats& stats, const Dataset& data, Variant j,
              const IdentifiabilityConfig& config, double beta_value,
              const UnknownConstants& unknowns) {
  check_variant_match(j, config);
  const std::size_t n = data.n();
  const double beta = beta_value;

  if (j == Variant::A1 || j == Variant::A2) {
    const double ratio = stats.s_xx > 0.0 ? std::sqrt(stats.s_yy / stats.s_xx) : 0.0;
    if (std::abs(beta) <= kBetaTolerance * (1.0 + ratio)) throw BetaNearZero(beta);
  }

  const double u_scale = scaling_u(j, stats, config);
  if (std::abs(u_scale) <= 1e-12 * (stats.s_xx + stats.s_yy))
    throw DegenerateDenominator("U(j,n)", u_scale);

  // Known constants per variant; unknown ones come from `unknowns` (zero in
  // production, arbitrary in the centering-invariance check).
  double mu = 0.0, lambda_theta = 0.0, theta = 0.0;
  switch (j) {
    case Variant::A1:
      mu = 0.0;
      theta = unknowns.theta;
      lambda_theta = config.lambda * unknowns.theta;
      break;
    case Variant::A2:
      mu = config.mu;
      lambda_theta = config.lambda_theta;
      theta = unknowns.theta;
      break;
    case Variant::A3:
      mu = config.mu;
      theta = config.theta;
      lambda_theta = unknowns.lambda_theta;
      break;
  }

  ZRows z;
  z.variant = j;
  z.beta_used = beta;
  z.rows.resize(n);

  const double b2 = beta * beta;
  const double xbar_over_u = stats.x_bar / u_scale;
  for (std::size_t i = 0; i < n; ++i) {
    const double sxx = stats.s_i_xx[i];
    const double syy = stats.s_i_yy[i];
    const double sxy = stats.s_i_xy[i];

    double u;
    switch (j) {
      case Variant::A1:
        u = (-2.0 * b2 / (config.lambda + b2)) *
            (config.lambda * sxx - syy - (config.lambda - b2) / beta * sxy);
        break;
      case Variant::A2:
        u = (syy - lambda_theta) - beta * (sxy - mu);
        break;
      default:
        u = (sxy - mu) - beta * (sxx - theta);
        break;
    }

    double w = (syy - lambda_theta) - 2.0 * beta * (sxy - mu) + b2 * (sxx - theta);
    if (j == Variant::A2) w /= b2;

    const double v = data.y[i] - unknowns.alpha - beta * data.x[i] - xbar_over_u * u;

    z.rows[i] = {u, v, w};
  }
  return z;
}

ZRows build_z(const Dataset& data, Variant j, const IdentifiabilityConfig& config,
              double beta_value, const UnknownConstants& unknowns) {
  return build_z(model::compute_moments(data), data, j, config, beta_value, unknowns);
}

SymMatrix sample_covariance(const std::vector<double>& rows, std::size_t d) {
  if (d < 1) throw std::invalid_argument("sample_covariance: d must be >= 1");
  if (rows.size() % d != 0)
    throw std::invalid_argument("sample_covariance: row data not a multiple of d");
  const std::size_t n = rows.size() / d;
  if (n < 2) throw std::invalid_argument("sample_covariance: need n >= 2 rows");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += rows[i * d + k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(n);

  SymMatrix v(d);
  std::vector<double> acc(d * d, 0.0);
  std::vector<double> c(d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = 0; k < d; ++k) c[k] = rows[i * d + k] - mean[k];
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b <= a; ++b) acc[a * d + b] += c[a] * c[b];
  }
  const double div = static_cast<double>(n - 1);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b <= a; ++b) v.set(a, b, acc[a * d + b] / div);
  return v;
}

SymMatrix studentization_matrix(const ZRows& z) {
  std::vector<double> flat;
  flat.reserve(z.rows.size() * 3);
  for (const Vec3& r : z.rows) {
    flat.push_back(r[0]);
    flat.push_back(r[1]);
    flat.push_back(r[2]);
  }
  SymMatrix v = sample_covariance(flat, 3);
  linalg::cholesky_sqrt(v);  // PD check; throws NotPositiveDefinite
  return v;
}

Vec3 studentized_statistic(const EstimateTriple& estimates, const Vec3& truth,
                           const Scalings& scalings, const SymMatrix& v,
                           std::size_t n, RootMode root_mode) {
  const linalg::Matrix root = linalg::inv_transpose_sqrt(v, root_mode);
  const double sqn = std::sqrt(static_cast<double>(n));
  const std::vector<double> dev = {scalings.u * (estimates.beta_hat - truth[0]),
                                   estimates.alpha_hat - truth[1],
                                   scalings.l * (estimates.gamma_hat - truth[2])};
  const std::vector<double> t = linalg::row_times(dev, root);
  return {sqn * t[0], sqn * t[1], sqn * t[2]};
}

std::vector<double> multivariate_student_statistic(const std::vector<double>& rows,
                                                   std::size_t d, RootMode root_mode) {
  if (d < 1 || rows.size() % d != 0)
    throw std::invalid_argument("multivariate_student_statistic: bad row data");
  const std::size_t n = rows.size() / d;
  if (n < d + 1)
    throw std::invalid_argument("multivariate_student_statistic: need n >= d + 1");

  SymMatrix v = sample_covariance(rows, d);
  const linalg::Matrix root = linalg::inv_transpose_sqrt(v, root_mode);

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += rows[i * d + k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(n);

  std::vector<double> st = linalg::row_times(mean, root);
  const double sqn = std::sqrt(static_cast<double>(n));
  for (double& x : st) x *= sqn;
  return st;
}

SymMatrix asymptotic_cov_estimate(const SymMatrix& v, const Scalings& scalings) {
  if (scalings.u == 0.0 || !std::isfinite(scalings.u))
    throw DegenerateDenominator("U(j,n)", scalings.u);
  if (scalings.l == 0.0 || !std::isfinite(scalings.l))
    throw DegenerateDenominator("L(j,n)", scalings.l);
  const double d[3] = {scalings.u, 1.0, scalings.l};
  SymMatrix c(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) c.set(i, j, v(i, j) / (d[i] * d[j]));
  return c;
}

StudentizedResult fit(const Dataset& data, const IdentifiabilityConfig& config,
                      Mode mode, RootMode root_mode, const std::optional<Vec3>& truth) {
  if (mode == Mode::true_beta && !truth.has_value())
    throw std::invalid_argument("fit: mode true_beta requires the true parameters");

  const MomentStats stats = model::compute_moments(data);
  StudentizedResult r;
  r.mode = mode;
  r.root_mode = root_mode;
  r.n = data.n();
  r.estimates = estimators::estimate(stats, config);
  r.scalings =
      scaling_factors(config.variant, stats, config, r.estimates.beta_hat, data.n());

  const double beta_for_z =
      (mode == Mode::plug_in) ? r.estimates.beta_hat : (*truth)[0];
  const ZRows z = build_z(stats, data, config.variant, config, beta_for_z);
  r.v = studentization_matrix(z);
  if (truth.has_value())
    r.t = studentized_statistic(r.estimates, *truth, r.scalings, r.v, data.n(), root_mode);
  return r;
}

ConfidenceRegion confidence_region(const StudentizedResult& result, double level) {
  if (result.mode != Mode::plug_in)
    throw std::invalid_argument("confidence_region: requires a plug-in (mode b) result");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("confidence_region: level must be in (0,1)");

  ConfidenceRegion cr;
  cr.level = level;
  cr.center = {result.estimates.beta_hat, result.estimates.alpha_hat,
               result.estimates.gamma_hat};
  cr.chi2_crit = chi2_quantile(3, level);
  cr.radius = std::sqrt(cr.chi2_crit / static_cast<double>(result.n));

  const SymMatrix vinv = linalg::pd_inverse(result.v);
  const double d[3] = {result.scalings.u, 1.0, result.scalings.l};
  SymMatrix shape(3);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j <= i; ++j) shape.set(i, j, d[i] * vinv(i, j) * d[j]);
  cr.shape = shape;

  const SymMatrix c = asymptotic_cov_estimate(result.v, result.scalings);
  const double zq = dist::normal_quantile(0.5 * (1.0 + level));
  const double sqn = std::sqrt(static_cast<double>(result.n));
  for (std::size_t i = 0; i < 3; ++i) {
    const double half = zq * std::sqrt(c(i, i)) / sqn;
    cr.marginal[i] = {cr.center[i] - half, cr.center[i] + half};
  }
  return cr;
}

double ellipsoid_quadratic_form(const Vec3& deviation, const Scalings& scalings,
                                const SymMatrix& v, std::size_t n) {
  const SymMatrix vinv = linalg::pd_inverse(v);
  const double dev[3] = {scalings.u * deviation[0], deviation[1],
                         scalings.l * deviation[2]};
  double q = 0.0;
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j) q += dev[i] * vinv(i, j) * dev[j];
  return static_cast<double>(n) * q;
}

}  // namespace eivm::studentize
