#ifndef EIVM_DIST_HPP
#define EIVM_DIST_HPP

// Scalar distribution functions needed for quantiles, confidence regions and
// goodness-of-fit p-values. Standard algorithms: series/continued-fraction
// incomplete gamma, Acklam-style normal quantile with one Halley refinement,
// alternating-series Kolmogorov tail.

namespace eivm::dist {

// Standard normal CDF.
double normal_cdf(double x);

// Standard normal quantile, accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

// Regularized lower incomplete gamma P(a, x).
double gamma_p(double a, double x);

// Chi-square CDF with df degrees of freedom.
double chi2_cdf(int df, double x);

// Chi-square quantile by bracketing/Newton inversion of gamma_p.
// Requires 1 <= df <= 20 and 0 < p < 1; absolute error well below 1e-8.
double chi2_quantile(int df, double p);

// Kolmogorov tail sum 2 * sum_{k>=1} (-1)^{k-1} exp(-2 k^2 t^2), clamped to
// [0,1]; the asymptotic p-value of a KS statistic with t = sqrt(n)*D.
double kolmogorov_tail(double t);

}  // namespace eivm::dist

#endif  // EIVM_DIST_HPP
