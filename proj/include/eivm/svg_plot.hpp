#ifndef EIVM_SVG_PLOT_HPP
#define EIVM_SVG_PLOT_HPP

#include <string>
#include <vector>

// Minimal self-contained SVG emitters for the verification reports: no
// external assets, fixed-size static figures.

namespace eivm::svg {

// Histogram of `values` on [-4.5, 4.5] normalized to a density, with the
// standard normal density overlaid.
std::string histogram_with_normal(const std::vector<double>& values,
                                  const std::string& title);

// QQ plot of the sorted squared norms against chi-square quantiles with `df`
// degrees of freedom, with the identity reference line.
std::string qq_plot_chi2(const std::vector<double>& norms_squared, int df,
                         const std::string& title);

}  // namespace eivm::svg

#endif  // EIVM_SVG_PLOT_HPP
