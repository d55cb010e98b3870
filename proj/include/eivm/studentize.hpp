#ifndef EIVM_STUDENTIZE_HPP
#define EIVM_STUDENTIZE_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <vector>

#include "eivm/dist.hpp"
#include "eivm/estimators.hpp"
#include "eivm/linalg.hpp"
#include "eivm/model.hpp"

// Studentization machinery for the estimator triples: the scalings U(j,n)
// and L(j,n), the per-observation z-vectors (u_i, v_i, w_i), the 3x3
// Studentization matrix V with divisor n-1, the Studentized statistic
//   T = sqrt(n) * (U*(beta_hat-beta), alpha_hat-alpha, L*(gamma_hat-gamma)) * V^{-T/2},
// the generic multivariate Student statistic sqrt(n) * zbar * V^{-T/2}, the
// scaled covariance estimate diag(U,1,L)^{-1} V diag(U,1,L)^{-1}, and
// confidence regions obtained by inverting the plug-in statistic.

namespace eivm::studentize {

using estimators::EstimateTriple;
using linalg::RootMode;
using linalg::SymMatrix;
using model::Dataset;
using model::IdentifiabilityConfig;
using model::MomentStats;
using model::Variant;

using Vec3 = std::array<double, 3>;

using dist::chi2_quantile;

// The plug-in slope (mode b) makes the statistic computable from data alone;
// the true-slope version (mode a) exists for simulation studies.
enum class Mode { true_beta, plug_in };

struct Scalings {
  double u = 0.0;
  // 1 for variants A2/A3; (n-2)*(lambda + beta_hat^2)/n for A1.
  double l = 1.0;
  Variant variant = Variant::A1;
};

Scalings scaling_factors(Variant j, const MomentStats& stats,
                         const IdentifiabilityConfig& config, double beta_hat,
                         std::size_t n);

// n x 3 rows (u_i, v_i, w_i).
struct ZRows {
  std::vector<Vec3> rows;
  Variant variant = Variant::A1;
  double beta_used = 0.0;
};

// Additive stand-ins for quantities the formulas reference but the variant
// does not know (the intercept always; theta under A1/A2; lambda*theta under
// A3). They enter every row as the same constant, so the centered covariance
// V is invariant to them; production code passes zeros.
struct UnknownConstants {
  double alpha = 0.0;
  double theta = 0.0;
  double lambda_theta = 0.0;
};

// Slopes this close to zero are rejected for variants A1/A2, whose row
// formulas divide by beta. Relative to 1 + sqrt(S_yy/S_xx).
inline constexpr double kBetaTolerance = 1e-8;

ZRows build_z(const Dataset& data, Variant j, const IdentifiabilityConfig& config,
              double beta_value, const UnknownConstants& unknowns = {});
ZRows build_z(const MomentStats& stats, const Dataset& data, Variant j,
              const IdentifiabilityConfig& config, double beta_value,
              const UnknownConstants& unknowns = {});

// Sample covariance of generic d-dimensional rows with divisor n-1.
SymMatrix sample_covariance(const std::vector<double>& rows, std::size_t d);

// V for the z-rows, positive definite or NotPositiveDefinite is thrown
// (degenerate data, e.g. an exact line).
SymMatrix studentization_matrix(const ZRows& z);

Vec3 studentized_statistic(const EstimateTriple& estimates, const Vec3& truth,
                           const Scalings& scalings, const SymMatrix& v,
                           std::size_t n, RootMode root_mode);

// sqrt(n) * rowmean * V^{-T/2} for n x d data; requires n >= d + 1.
std::vector<double> multivariate_student_statistic(const std::vector<double>& rows,
                                                   std::size_t d, RootMode root_mode);

// diag(U,1,L)^{-1} V diag(U,1,L)^{-1}, the natural estimate of the
// asymptotic covariance of the unscaled estimator triple.
SymMatrix asymptotic_cov_estimate(const SymMatrix& v, const Scalings& scalings);

struct StudentizedResult {
  EstimateTriple estimates;
  Scalings scalings;
  SymMatrix v;
  // Present when the true parameters were supplied (simulation studies).
  std::optional<Vec3> t;
  Mode mode = Mode::plug_in;
  RootMode root_mode = RootMode::symmetric;
  std::size_t n = 0;
};

// Full pipeline: estimate, scale, build z at the mode's slope, form V, and
// Studentize against `truth` when given. Mode true_beta requires truth.
StudentizedResult fit(const Dataset& data, const IdentifiabilityConfig& config,
                      Mode mode, RootMode root_mode,
                      const std::optional<Vec3>& truth = std::nullopt);

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Ellipsoid { p : (p - center) * shape * (p - center)^T <= radius^2 } in
// (beta, alpha, gamma) space, where shape = D V^{-1} D with D = diag(U,1,L)
// and radius^2 = chi2_quantile(3, level)/n, together with marginal normal
// intervals from the scaled covariance estimate.
struct ConfidenceRegion {
  Vec3 center{};
  SymMatrix shape;
  double radius = 0.0;
  double chi2_crit = 0.0;
  double level = 0.0;
  std::array<Interval, 3> marginal;
};

// Requires a plug-in (mode b) result and 0 < level < 1.
ConfidenceRegion confidence_region(const StudentizedResult& result, double level);

// Quadratic form n * dev * V^{-1} * dev^T with dev = (U*db, da, L*dg);
// equals the squared norm of the Studentized statistic in either root mode.
double ellipsoid_quadratic_form(const Vec3& deviation, const Scalings& scalings,
                                const SymMatrix& v, std::size_t n);

}  // namespace eivm::studentize

#endif  // EIVM_STUDENTIZE_HPP
