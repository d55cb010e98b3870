#ifndef EIVM_ESTIMATORS_HPP
#define EIVM_ESTIMATORS_HPP

#include "eivm/model.hpp"

// Slope/intercept/error-variance estimators for the measurement error model
// under each identifiability assumption:
//   A1 (known variance ratio lambda, zero error covariance):
//     beta = sign(S_xy) * sqrt(t^2 + lambda) - t,  t = (lambda*S_xx - S_yy)/(2*S_xy)
//     gamma = (S_yy - 2*S_xy*beta + S_xx*beta^2) / (lambda + beta^2)
//   A2 (known Var(delta) = lambda_theta and mu):
//     beta = (S_yy - lambda_theta) / (S_xy - mu),  gamma = S_xx - (S_xy - mu)/beta
//   A3 (known Var(eps) = theta and mu):
//     beta = (S_xy - mu) / (S_xx - theta),  gamma = S_yy - (S_xy - mu)*beta
// with alpha = y_bar - x_bar*beta throughout.

namespace eivm::estimators {

using model::Dataset;
using model::IdentifiabilityConfig;
using model::MomentStats;
using model::Variant;

// Denominators are treated as zero when within this fraction of the moment
// scale S_xx + S_yy; the provisos are stated as exact inequalities, finite
// precision needs a relative guard.
inline constexpr double kDegeneracyTolerance = 1e-12;

struct EstimateTriple {
  double beta_hat = 0.0;
  double alpha_hat = 0.0;
  double gamma_hat = 0.0;
  Variant variant = Variant::A1;
  // Moment estimators can go negative in finite samples; flagged, not clamped.
  bool gamma_negative = false;
};

// Throws DegenerateDenominator naming the violated proviso.
EstimateTriple estimate(const MomentStats& stats, const IdentifiabilityConfig& config);
EstimateTriple estimate(const Dataset& data, const IdentifiabilityConfig& config);

}  // namespace eivm::estimators

#endif  // EIVM_ESTIMATORS_HPP
