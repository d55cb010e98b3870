#include "eivm/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdarg>
#include <cstdio>

#include "eivm/dist.hpp"

namespace eivm::svg {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 420.0;
constexpr double kMarginLeft = 60.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 40.0;
constexpr double kMarginBottom = 50.0;

struct Frame {
  double x_min, x_max, y_min, y_max;
  double px(double x) const {
    return kMarginLeft + (x - x_min) / (x_max - x_min) * (kWidth - kMarginLeft - kMarginRight);
  }
  double py(double y) const {
    return kHeight - kMarginBottom -
           (y - y_min) / (y_max - y_min) * (kHeight - kMarginTop - kMarginBottom);
  }
};

void appendf(std::string& s, const char* fmt, ...) {
  char buf[512];
  va_list args;
  va_start(args, fmt);
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  s += buf;
}

std::string header(const std::string& title) {
  std::string s;
  appendf(s,
          "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" "
          "viewBox=\"0 0 %g %g\">\n",
          kWidth, kHeight, kWidth, kHeight);
  s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  appendf(s,
          "<text x=\"%g\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\" "
          "text-anchor=\"middle\">%s</text>\n",
          kWidth / 2, title.c_str());
  return s;
}

void axes(std::string& s, const Frame& f, const std::vector<double>& x_ticks,
          const std::vector<double>& y_ticks) {
  appendf(s,
          "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
          f.px(f.x_min), f.py(f.y_min), f.px(f.x_max), f.py(f.y_min));
  appendf(s,
          "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
          f.px(f.x_min), f.py(f.y_min), f.px(f.x_min), f.py(f.y_max));
  for (double t : x_ticks) {
    appendf(s,
            "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
            f.px(t), f.py(f.y_min), f.px(t), f.py(f.y_min) + 5.0);
    appendf(s,
            "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
            "text-anchor=\"middle\">%.4g</text>\n",
            f.px(t), f.py(f.y_min) + 18.0, t);
  }
  for (double t : y_ticks) {
    appendf(s,
            "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"black\"/>\n",
            f.px(f.x_min) - 5.0, f.py(t), f.px(f.x_min), f.py(t));
    appendf(s,
            "<text x=\"%g\" y=\"%g\" font-family=\"sans-serif\" font-size=\"11\" "
            "text-anchor=\"end\">%.4g</text>\n",
            f.px(f.x_min) - 8.0, f.py(t) + 4.0, t);
  }
}

}  // namespace

std::string histogram_with_normal(const std::vector<double>& values,
                                  const std::string& title) {
  constexpr int kBins = 45;
  constexpr double kLo = -4.5, kHi = 4.5;
  const double bin_width = (kHi - kLo) / kBins;

  std::vector<double> density(kBins, 0.0);
  const double n = static_cast<double>(values.empty() ? 1 : values.size());
  for (double v : values) {
    if (v < kLo || v >= kHi) continue;
    const int b = static_cast<int>((v - kLo) / bin_width);
    density[b] += 1.0 / (n * bin_width);
  }

  double y_max = 0.45;  // at least the normal peak
  for (double d : density) y_max = std::max(y_max, d);
  y_max *= 1.05;

  Frame f{kLo, kHi, 0.0, y_max};
  std::string s = header(title);
  for (int b = 0; b < kBins; ++b) {
    if (density[b] <= 0.0) continue;
    const double x0 = kLo + b * bin_width;
    appendf(s,
            "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"#9ecae1\" "
            "stroke=\"#6baed6\"/>\n",
            f.px(x0), f.py(density[b]), f.px(x0 + bin_width) - f.px(x0),
            f.py(0.0) - f.py(density[b]));
  }
  s += "<polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\"";
  for (int i = 0; i <= 200; ++i) {
    const double x = kLo + (kHi - kLo) * i / 200.0;
    const double pdf = std::exp(-0.5 * x * x) / 2.5066282746310002;
    appendf(s, "%.2f,%.2f ", f.px(x), f.py(pdf));
  }
  s += "\"/>\n";
  axes(s, f, {-4, -2, 0, 2, 4}, {0.0, 0.1, 0.2, 0.3, 0.4});
  s += "</svg>\n";
  return s;
}

std::string qq_plot_chi2(const std::vector<double>& norms_squared, int df,
                         const std::string& title) {
  std::vector<double> sorted = norms_squared;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();

  std::vector<std::pair<double, double>> pts;
  const std::size_t stride = std::max<std::size_t>(1, m / 400);
  double axis_max = 1.0;
  for (std::size_t i = 0; i < m; i += stride) {
    const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(m);
    const double q = dist::chi2_quantile(df, p);
    pts.emplace_back(q, sorted[i]);
    axis_max = std::max({axis_max, q, sorted[i]});
  }
  axis_max *= 1.05;

  Frame f{0.0, axis_max, 0.0, axis_max};
  std::string s = header(title);
  appendf(s,
          "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#d62728\" "
          "stroke-dasharray=\"4 3\"/>\n",
          f.px(0.0), f.py(0.0), f.px(axis_max), f.py(axis_max));
  for (const auto& [qx, qy] : pts)
    appendf(s, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"2\" fill=\"#1f77b4\"/>\n",
            f.px(qx), f.py(qy));
  std::vector<double> ticks;
  const double step = axis_max > 20.0 ? 10.0 : (axis_max > 8.0 ? 5.0 : 2.0);
  for (double t = 0.0; t <= axis_max; t += step) ticks.push_back(t);
  axes(s, f, ticks, ticks);
  s += "</svg>\n";
  return s;
}

}  // namespace eivm::svg
