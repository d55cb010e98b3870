#include "eivm/model.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace eivm::model {

Dataset make_dataset(std::vector<double> x, std::vector<double> y) {
  if (x.size() != y.size())
    throw std::invalid_argument("dataset: x and y must have equal length");
  if (x.size() < 3) throw std::invalid_argument("dataset: need at least 3 observations");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i]))
      throw std::invalid_argument("dataset: non-finite value at observation " +
                                  std::to_string(i + 1));
  return Dataset{std::move(x), std::move(y)};
}

IdentifiabilityConfig IdentifiabilityConfig::a1(double lambda) {
  if (!(lambda > 0.0))
    throw std::invalid_argument("variant A1 requires lambda > 0");
  IdentifiabilityConfig c;
  c.variant = Variant::A1;
  c.lambda = lambda;
  return c;
}

IdentifiabilityConfig IdentifiabilityConfig::a2(double lambda_theta, double mu) {
  if (!(lambda_theta >= 0.0))
    throw std::invalid_argument("variant A2 requires lambda_theta >= 0");
  IdentifiabilityConfig c;
  c.variant = Variant::A2;
  c.lambda_theta = lambda_theta;
  c.mu = mu;
  return c;
}

IdentifiabilityConfig IdentifiabilityConfig::a3(double theta, double mu) {
  if (!(theta >= 0.0)) throw std::invalid_argument("variant A3 requires theta >= 0");
  IdentifiabilityConfig c;
  c.variant = Variant::A3;
  c.theta = theta;
  c.mu = mu;
  return c;
}

const char* variant_name(Variant v) {
  switch (v) {
    case Variant::A1: return "A1";
    case Variant::A2: return "A2";
    case Variant::A3: return "A3";
  }
  return "?";
}

MomentStats compute_moments(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw std::invalid_argument("compute_moments: length mismatch");
  if (n < 2) throw std::invalid_argument("compute_moments: need n >= 2");

  MomentStats m;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
  }
  m.x_bar = sx / static_cast<double>(n);
  m.y_bar = sy / static_cast<double>(n);

  m.s_i_xx.resize(n);
  m.s_i_yy.resize(n);
  m.s_i_xy.resize(n);
  double axx = 0.0, ayy = 0.0, axy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - m.x_bar;
    const double dy = y[i] - m.y_bar;
    m.s_i_xx[i] = dx * dx;
    m.s_i_yy[i] = dy * dy;
    m.s_i_xy[i] = dx * dy;
    axx += m.s_i_xx[i];
    ayy += m.s_i_yy[i];
    axy += m.s_i_xy[i];
  }
  m.s_xx = axx / static_cast<double>(n);
  m.s_yy = ayy / static_cast<double>(n);
  m.s_xy = axy / static_cast<double>(n);
  return m;
}

MomentStats compute_moments(const Dataset& data) { return compute_moments(data.x, data.y); }

namespace {

double parse_number(const std::string& field, std::size_t line_no) {
  const char* begin = field.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || !std::isfinite(v))
    throw std::invalid_argument("csv: cannot parse number '" + field + "' at line " +
                                std::to_string(line_no));
  return v;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

}  // namespace

Dataset read_csv(std::istream& in) {
  std::string line;
  std::size_t line_no = 0;

  if (!std::getline(in, line)) throw std::invalid_argument("csv: empty input");
  ++line_no;
  if (strip_cr(line) != "x,y")
    throw std::invalid_argument("csv: expected header 'x,y' at line 1, got '" + line + "'");

  std::vector<double> x, y;
  while (std::getline(in, line)) {
    ++line_no;
    line = strip_cr(line);
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos)
      throw std::invalid_argument("csv: expected two comma-separated fields at line " +
                                  std::to_string(line_no));
    x.push_back(parse_number(line.substr(0, comma), line_no));
    y.push_back(parse_number(line.substr(comma + 1), line_no));
  }
  return make_dataset(std::move(x), std::move(y));
}

Dataset read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  return read_csv(in);
}

void write_csv(std::ostream& out, const Dataset& data) {
  out << "x,y\n";
  char buf[64];
  for (std::size_t i = 0; i < data.n(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", data.x[i], data.y[i]);
    out << buf;
  }
}

}  // namespace eivm::model
