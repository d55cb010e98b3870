#include "eivm/estimators.hpp"

#include <cmath>

#include "eivm/errors.hpp"

namespace eivm::estimators {

namespace {

double moment_scale(const MomentStats& m) { return m.s_xx + m.s_yy; }

bool near_zero(double denom, double scale) {
  return std::abs(denom) <= kDegeneracyTolerance * scale;
}

}  // namespace

EstimateTriple estimate(const MomentStats& stats, const IdentifiabilityConfig& config) {
  const double scale = moment_scale(stats);
  EstimateTriple out;
  out.variant = config.variant;

  switch (config.variant) {
    case Variant::A1: {
      if (near_zero(stats.s_xy, scale))
        throw DegenerateDenominator("S_xy", stats.s_xy);
      const double lambda = config.lambda;
      const double t = (lambda * stats.s_xx - stats.s_yy) / (2.0 * stats.s_xy);
      const double sign = stats.s_xy > 0.0 ? 1.0 : -1.0;
      out.beta_hat = sign * std::sqrt(t * t + lambda) - t;
      out.gamma_hat =
          (stats.s_yy - 2.0 * stats.s_xy * out.beta_hat +
           stats.s_xx * out.beta_hat * out.beta_hat) /
          (lambda + out.beta_hat * out.beta_hat);
      break;
    }
    case Variant::A2: {
      const double num = stats.s_yy - config.lambda_theta;
      const double den = stats.s_xy - config.mu;
      if (near_zero(den, scale))
        throw DegenerateDenominator("S_xy - mu", den);
      if (!(num > kDegeneracyTolerance * scale))
        throw DegenerateDenominator("S_yy - lambda_theta", num);
      out.beta_hat = num / den;
      out.gamma_hat = stats.s_xx - den / out.beta_hat;
      break;
    }
    case Variant::A3: {
      const double den = stats.s_xx - config.theta;
      if (!(den > kDegeneracyTolerance * scale))
        throw DegenerateDenominator("S_xx - theta", den);
      out.beta_hat = (stats.s_xy - config.mu) / den;
      out.gamma_hat = stats.s_yy - (stats.s_xy - config.mu) * out.beta_hat;
      break;
    }
  }

  out.alpha_hat = stats.y_bar - stats.x_bar * out.beta_hat;
  if (!std::isfinite(out.beta_hat) || !std::isfinite(out.alpha_hat) ||
      !std::isfinite(out.gamma_hat))
    throw DegenerateDenominator("non-finite estimate", out.beta_hat);
  out.gamma_negative = out.gamma_hat < 0.0;
  return out;
}

EstimateTriple estimate(const Dataset& data, const IdentifiabilityConfig& config) {
  return estimate(model::compute_moments(data), config);
}

}  // namespace eivm::estimators
