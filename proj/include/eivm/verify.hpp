#ifndef EIVM_VERIFY_HPP
#define EIVM_VERIFY_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "eivm/simulate.hpp"
#include "eivm/studentize.hpp"

// Monte Carlo verification harness: replicated Studentized statistics under
// a scenario, empirical ellipsoid coverage against the chi-square law,
// normality diagnostics (per-component Kolmogorov-Smirnov, Mardia skewness
// and kurtosis), the heterogeneous triangular-array experiment for the
// generic Student statistic, and design-condition diagnostics.

namespace eivm::verify {

using linalg::RootMode;
using linalg::SymMatrix;
using model::Variant;
using simulate::DesignFamily;
using simulate::Scenario;
using studentize::Vec3;

struct KsResult {
  double d = 0.0;
  double p = 1.0;
};

// Two-sided KS distance of the samples from the standard normal CDF, with
// the asymptotic Kolmogorov p-value. Requires n >= 20.
KsResult ks_statistic(std::vector<double> samples);

// Same against the uniform law on (0,1); used after probability-integral
// transforms.
KsResult ks_statistic_uniform(std::vector<double> samples);

struct MardiaResult {
  double b1 = 0.0;  // multivariate skewness; ~0 under normality
  double b2 = 0.0;  // multivariate kurtosis; -> d(d+2) under normality
};

// rows is R x d, flattened row-major; requires R > d + 1 and a positive
// definite sample covariance.
MardiaResult mardia_statistics(const std::vector<double>& rows, std::size_t d);

// max_i v_i^2 / sum_i v_i^2; vanishes for normal-attracted i.i.d. sequences.
double obrien_statistic(const std::vector<double>& values);

struct DesignDiagnostics {
  std::size_t n = 0;
  double xi_bar = 0.0;
  double xi2_bar = 0.0;
  double f3_ratio = 0.0;   // max xi_i^2 / sum xi_i^2
  bool degenerate = false; // zero empirical variance (constant design)
};

// Trend table of the design conditions across a grid of sample sizes; no
// pass/fail verdict, limits cannot be certified from finite data.
std::vector<DesignDiagnostics> check_design_conditions(const DesignFamily& design,
                                                       const std::vector<std::size_t>& n_grid);

// Outcome of one replication.
enum class RepStatus : int {
  ok = 0,
  degenerate_denominator,
  beta_near_zero,
  not_positive_definite,
};

struct Replication {
  RepStatus status = RepStatus::ok;
  Vec3 t_true_beta{};  // mode (a)
  Vec3 t_plug_in{};    // mode (b)
};

struct FailureCounts {
  std::size_t degenerate_denominator = 0;
  std::size_t beta_near_zero = 0;
  std::size_t not_positive_definite = 0;
  std::size_t total() const {
    return degenerate_denominator + beta_near_zero + not_positive_definite;
  }
};

// Per-mode summary over the successful replications.
struct ModeSummary {
  double coverage = 0.0;                  // fraction with |T|^2 <= chi2 critical value
  std::array<KsResult, 3> ks_component{}; // each T component vs standard normal
  KsResult ks_norm2_pit{};                // chi2_3 PIT of |T|^2 vs uniform
  MardiaResult mardia{};
};

struct McReport {
  std::string name;
  Variant variant = Variant::A1;
  std::size_t replications_requested = 0;
  std::size_t replications_used = 0;
  FailureCounts failures;
  double level = 0.0;
  double chi2_crit = 0.0;
  std::uint64_t master_seed = 0;
  RootMode root_mode = RootMode::symmetric;
  ModeSummary mode_a;
  ModeSummary mode_b;
  double mode_diff_median = 0.0;  // median Euclidean distance between the two T's
  double coverage_diff = 0.0;
  std::vector<Replication> replications;  // in replication order
};

// Replications that fail a statistical proviso are tallied and excluded from
// the summaries; the run aborts only if the failure fraction exceeds
// `abort_failure_fraction` (a mis-specified scenario). Replication r uses
// substream r of the master seed, so the report does not depend on the
// number of worker threads.
McReport run_monte_carlo(const Scenario& scenario, Variant j, std::size_t replications,
                         double level, std::uint64_t master_seed,
                         RootMode root_mode = RootMode::symmetric,
                         unsigned threads = 1, double abort_failure_fraction = 0.05,
                         const std::string& name = "");

// Writes "rep,mode,T1,T2,T3,norm2" rows for every successful replication.
std::string replications_csv(const McReport& report);

// Heterogeneous triangular-array experiment for the generic Student
// statistic: rows Z_i = sqrt(c_i/n) * W_i with bounded i.i.d. W (mean zero,
// identity covariance from independent uniform components) and weights c_i
// alternating between c_lo and c_hi. The row covariances sum to
// (mean c) * I_d, and the experiment tracks ellipsoid coverage, the
// convergence residual |(n-1)V - Sigma|_F, and the recovered Sigma.
struct LindebergEntry {
  std::size_t n = 0;
  double coverage = 0.0;
  double raikov_median = 0.0;
  SymMatrix mean_scaled_cov;  // mean over replications of (n-1)V
  std::vector<KsResult> ks_component;
};

struct LindebergReport {
  std::size_t d = 0;
  std::size_t replications = 0;
  double level = 0.0;
  double chi2_crit = 0.0;
  std::uint64_t master_seed = 0;
  double c_lo = 1.0;
  double c_hi = 3.0;
  std::vector<LindebergEntry> entries;
};

LindebergReport lindeberg_array_experiment(std::size_t d,
                                           const std::vector<std::size_t>& n_grid,
                                           std::size_t replications, double level,
                                           std::uint64_t master_seed,
                                           RootMode root_mode = RootMode::symmetric,
                                           unsigned threads = 1, double c_lo = 1.0,
                                           double c_hi = 3.0);

}  // namespace eivm::verify

#endif  // EIVM_VERIFY_HPP
