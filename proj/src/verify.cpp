#include "eivm/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <stdexcept>
#include <thread>

#include "eivm/dist.hpp"
#include "eivm/errors.hpp"
#include "eivm/estimators.hpp"

namespace eivm::verify {

namespace {

// Index-parallel loop; each index writes only its own slot, so results are
// identical for any thread count.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  const unsigned workers = static_cast<unsigned>(
      std::min<std::size_t>(threads, count));
  std::vector<std::thread> pool;
  std::vector<std::exception_ptr> errors(workers);
  pool.reserve(workers);
  for (unsigned w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (std::size_t i = w; i < count; i += workers) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

KsResult ks_against(std::vector<double>& samples,
                    const std::function<double(double)>& cdf) {
  const std::size_t n = samples.size();
  if (n < 20) throw std::invalid_argument("ks_statistic: need at least 20 samples");
  std::sort(samples.begin(), samples.end());
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(samples[i]);
    const double hi = static_cast<double>(i + 1) / static_cast<double>(n) - f;
    const double lo = f - static_cast<double>(i) / static_cast<double>(n);
    d = std::max({d, hi, lo});
  }
  KsResult r;
  r.d = d;
  r.p = dist::kolmogorov_tail(std::sqrt(static_cast<double>(n)) * d);
  return r;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 == 1 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

}  // namespace

KsResult ks_statistic(std::vector<double> samples) {
  return ks_against(samples, [](double x) { return dist::normal_cdf(x); });
}

KsResult ks_statistic_uniform(std::vector<double> samples) {
  return ks_against(samples, [](double x) {
    return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x);
  });
}

MardiaResult mardia_statistics(const std::vector<double>& rows, std::size_t d) {
  if (d < 1 || rows.size() % d != 0)
    throw std::invalid_argument("mardia_statistics: bad row data");
  const std::size_t r = rows.size() / d;
  if (r <= d + 1) throw std::invalid_argument("mardia_statistics: need R > d + 1");

  std::vector<double> mean(d, 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < d; ++k) mean[k] += rows[i * d + k];
  for (std::size_t k = 0; k < d; ++k) mean[k] /= static_cast<double>(r);

  std::vector<double> c(rows.size());
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < d; ++k) c[i * d + k] = rows[i * d + k] - mean[k];

  // ML covariance (divisor R), the convention the d(d+2) limit refers to.
  SymMatrix s(d);
  for (std::size_t a = 0; a < d; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double acc = 0.0;
      for (std::size_t i = 0; i < r; ++i) acc += c[i * d + a] * c[i * d + b];
      s.set(a, b, acc / static_cast<double>(r));
    }
  const SymMatrix sinv = linalg::pd_inverse(s);

  // q_i = c_i * S^{-1}. Kurtosis is the mean of (q_i . c_i)^2; skewness
  // contracts the two third-moment tensors of q and c, which is O(R d^3)
  // instead of the naive O(R^2 d).
  std::vector<double> q(rows.size(), 0.0);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t a = 0; a < d; ++a) {
      double acc = 0.0;
      for (std::size_t b = 0; b < d; ++b) acc += c[i * d + b] * sinv(b, a);
      q[i * d + a] = acc;
    }

  MardiaResult out;
  double b2 = 0.0;
  std::vector<double> tq(d * d * d, 0.0), tc(d * d * d, 0.0);
  for (std::size_t i = 0; i < r; ++i) {
    double m = 0.0;
    for (std::size_t a = 0; a < d; ++a) m += q[i * d + a] * c[i * d + a];
    b2 += m * m;
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b < d; ++b)
        for (std::size_t e = 0; e < d; ++e) {
          tq[(a * d + b) * d + e] += q[i * d + a] * q[i * d + b] * q[i * d + e];
          tc[(a * d + b) * d + e] += c[i * d + a] * c[i * d + b] * c[i * d + e];
        }
  }
  double b1 = 0.0;
  for (std::size_t k = 0; k < tq.size(); ++k) b1 += tq[k] * tc[k];

  out.b1 = b1 / (static_cast<double>(r) * static_cast<double>(r));
  out.b2 = b2 / static_cast<double>(r);
  return out;
}

double obrien_statistic(const std::vector<double>& values) {
  if (values.empty()) throw std::invalid_argument("obrien_statistic: empty input");
  double sum = 0.0, mx = 0.0;
  for (double v : values) {
    const double sq = v * v;
    sum += sq;
    mx = std::max(mx, sq);
  }
  if (sum == 0.0) throw std::invalid_argument("obrien_statistic: all-zero input");
  return mx / sum;
}

std::vector<DesignDiagnostics> check_design_conditions(
    const DesignFamily& design, const std::vector<std::size_t>& n_grid) {
  std::vector<DesignDiagnostics> out;
  out.reserve(n_grid.size());
  for (std::size_t n : n_grid) {
    const std::vector<double> xi = simulate::design_xi(design, n);
    DesignDiagnostics dd;
    dd.n = n;
    double sum = 0.0, sumsq = 0.0, mx = 0.0;
    for (double v : xi) {
      sum += v;
      sumsq += v * v;
      mx = std::max(mx, v * v);
    }
    dd.xi_bar = sum / static_cast<double>(n);
    dd.xi2_bar = sumsq / static_cast<double>(n);
    dd.f3_ratio = sumsq > 0.0 ? mx / sumsq : 0.0;
    dd.degenerate = (dd.xi2_bar - dd.xi_bar * dd.xi_bar) <=
                    1e-12 * std::max(dd.xi2_bar, 1.0);
    out.push_back(dd);
  }
  return out;
}

namespace {

RepStatus status_of(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::degenerate_denominator: return RepStatus::degenerate_denominator;
    case ErrorKind::beta_near_zero: return RepStatus::beta_near_zero;
    case ErrorKind::not_positive_definite: return RepStatus::not_positive_definite;
  }
  return RepStatus::not_positive_definite;
}

Replication run_one(const Scenario& scenario, std::uint64_t rep_seed,
                    RootMode root_mode) {
  Replication rep;
  try {
    auto [data, truth] = simulate::generate(scenario, rep_seed);
    const auto& config = scenario.identifiability;
    const Variant j = config.variant;
    const std::size_t n = data.n();

    const model::MomentStats stats = model::compute_moments(data);
    const auto est = estimators::estimate(stats, config);
    const auto scal = studentize::scaling_factors(j, stats, config, est.beta_hat, n);
    const Vec3 truth_vec{truth.beta, truth.alpha, truth.gamma};

    const auto zb = studentize::build_z(stats, data, j, config, est.beta_hat);
    const SymMatrix vb = studentize::studentization_matrix(zb);
    rep.t_plug_in =
        studentize::studentized_statistic(est, truth_vec, scal, vb, n, root_mode);

    const auto za = studentize::build_z(stats, data, j, config, truth.beta);
    const SymMatrix va = studentize::studentization_matrix(za);
    rep.t_true_beta =
        studentize::studentized_statistic(est, truth_vec, scal, va, n, root_mode);
  } catch (const Error& e) {
    rep.status = status_of(e);
  }
  return rep;
}

double norm_sq(const Vec3& t) { return t[0] * t[0] + t[1] * t[1] + t[2] * t[2]; }

ModeSummary summarize_mode(const std::vector<const Vec3*>& ts, double chi2_crit) {
  ModeSummary s;
  const std::size_t r = ts.size();
  std::size_t covered = 0;
  std::vector<double> comp[3];
  std::vector<double> pit;
  std::vector<double> flat;
  for (int k = 0; k < 3; ++k) comp[k].reserve(r);
  pit.reserve(r);
  flat.reserve(3 * r);
  for (const Vec3* t : ts) {
    const double nsq = norm_sq(*t);
    if (nsq <= chi2_crit) ++covered;
    for (int k = 0; k < 3; ++k) {
      comp[k].push_back((*t)[k]);
      flat.push_back((*t)[k]);
    }
    pit.push_back(dist::chi2_cdf(3, nsq));
  }
  s.coverage = r > 0 ? static_cast<double>(covered) / static_cast<double>(r) : 0.0;
  if (r >= 20) {
    for (int k = 0; k < 3; ++k) s.ks_component[k] = ks_statistic(comp[k]);
    s.ks_norm2_pit = ks_statistic_uniform(pit);
  }
  if (r > 4) s.mardia = mardia_statistics(flat, 3);
  return s;
}

}  // namespace

McReport run_monte_carlo(const Scenario& scenario, Variant j, std::size_t replications,
                         double level, std::uint64_t master_seed, RootMode root_mode,
                         unsigned threads, double abort_failure_fraction,
                         const std::string& name) {
  if (j != scenario.identifiability.variant)
    throw std::invalid_argument("run_monte_carlo: variant does not match scenario");
  if (replications < 100)
    throw std::invalid_argument("run_monte_carlo: need at least 100 replications");
  if (!(level > 0.0 && level < 1.0))
    throw std::invalid_argument("run_monte_carlo: level must be in (0,1)");
  simulate::validate(scenario);

  McReport report;
  report.name = name;
  report.variant = j;
  report.replications_requested = replications;
  report.level = level;
  report.chi2_crit = dist::chi2_quantile(3, level);
  report.master_seed = master_seed;
  report.root_mode = root_mode;
  report.replications.resize(replications);

  parallel_for(replications, threads, [&](std::size_t r) {
    report.replications[r] =
        run_one(scenario, rng::derive_key(master_seed, r), root_mode);
  });

  std::vector<const Vec3*> ta, tb;
  std::vector<double> diffs;
  ta.reserve(replications);
  tb.reserve(replications);
  diffs.reserve(replications);
  for (const Replication& rep : report.replications) {
    switch (rep.status) {
      case RepStatus::ok:
        ta.push_back(&rep.t_true_beta);
        tb.push_back(&rep.t_plug_in);
        diffs.push_back(std::sqrt(norm_sq({rep.t_true_beta[0] - rep.t_plug_in[0],
                                           rep.t_true_beta[1] - rep.t_plug_in[1],
                                           rep.t_true_beta[2] - rep.t_plug_in[2]})));
        break;
      case RepStatus::degenerate_denominator:
        ++report.failures.degenerate_denominator;
        break;
      case RepStatus::beta_near_zero:
        ++report.failures.beta_near_zero;
        break;
      case RepStatus::not_positive_definite:
        ++report.failures.not_positive_definite;
        break;
    }
  }
  report.replications_used = ta.size();

  const double failure_fraction =
      static_cast<double>(report.failures.total()) / static_cast<double>(replications);
  if (failure_fraction > abort_failure_fraction)
    throw std::runtime_error(
        "run_monte_carlo: failure fraction " + std::to_string(failure_fraction) +
        " exceeds " + std::to_string(abort_failure_fraction) +
        "; the scenario looks mis-specified");

  report.mode_a = summarize_mode(ta, report.chi2_crit);
  report.mode_b = summarize_mode(tb, report.chi2_crit);
  report.mode_diff_median = median_of(std::move(diffs));
  report.coverage_diff = std::abs(report.mode_a.coverage - report.mode_b.coverage);
  return report;
}

std::string replications_csv(const McReport& report) {
  std::string out = "rep,mode,T1,T2,T3,norm2\n";
  char buf[160];
  for (std::size_t r = 0; r < report.replications.size(); ++r) {
    const Replication& rep = report.replications[r];
    if (rep.status != RepStatus::ok) continue;
    const Vec3* ts[2] = {&rep.t_true_beta, &rep.t_plug_in};
    const char* names[2] = {"a", "b"};
    for (int m = 0; m < 2; ++m) {
      std::snprintf(buf, sizeof buf, "%zu,%s,%.17g,%.17g,%.17g,%.17g\n", r, names[m],
                    (*ts[m])[0], (*ts[m])[1], (*ts[m])[2], norm_sq(*ts[m]));
      out += buf;
    }
  }
  return out;
}

LindebergReport lindeberg_array_experiment(std::size_t d,
                                           const std::vector<std::size_t>& n_grid,
                                           std::size_t replications, double level,
                                           std::uint64_t master_seed, RootMode root_mode,
                                           unsigned threads, double c_lo, double c_hi) {
  if (d < 1 || d > 5)
    throw std::invalid_argument("lindeberg_array_experiment: d must be in [1, 5]");
  if (!(c_lo > 0.0 && c_hi >= c_lo))
    throw std::invalid_argument("lindeberg_array_experiment: need 0 < c_lo <= c_hi");

  LindebergReport report;
  report.d = d;
  report.replications = replications;
  report.level = level;
  report.chi2_crit = dist::chi2_quantile(static_cast<int>(d), level);
  report.master_seed = master_seed;
  report.c_lo = c_lo;
  report.c_hi = c_hi;

  const double uniform_halfwidth = std::sqrt(3.0);  // unit-variance uniform

  for (std::size_t gi = 0; gi < n_grid.size(); ++gi) {
    const std::size_t n = n_grid[gi];
    if (n < d + 1)
      throw std::invalid_argument("lindeberg_array_experiment: n too small");

    // Sum of the row covariances for this n: (mean c) * I_d.
    double mean_c = 0.0;
    for (std::size_t i = 0; i < n; ++i) mean_c += (i % 2 == 0) ? c_lo : c_hi;
    mean_c /= static_cast<double>(n);

    struct RepOut {
      bool covered = false;
      double raikov = 0.0;
      std::vector<double> st;
      std::vector<double> scaled_cov;  // (n-1)V, row-major lower incl. diag
    };
    std::vector<RepOut> outs(replications);

    parallel_for(replications, threads, [&](std::size_t r) {
      rng::Counter rnd(
          rng::derive_key(rng::derive_key(master_seed, gi), r));
      std::vector<double> rows(n * d);
      for (std::size_t i = 0; i < n; ++i) {
        const double c = (i % 2 == 0) ? c_lo : c_hi;
        const double a = std::sqrt(c / static_cast<double>(n));
        for (std::size_t k = 0; k < d; ++k) {
          const double w = uniform_halfwidth * (2.0 * rnd.next_unit() - 1.0);
          rows[i * d + k] = a * w;
        }
      }
      RepOut& o = outs[r];
      const SymMatrix v = studentize::sample_covariance(rows, d);
      double resid = 0.0;
      o.scaled_cov.resize(d * d);
      for (std::size_t a = 0; a < d; ++a)
        for (std::size_t b = 0; b < d; ++b) {
          const double scaled = static_cast<double>(n - 1) * v(a, b);
          o.scaled_cov[a * d + b] = scaled;
          const double target = (a == b) ? mean_c : 0.0;
          resid += (scaled - target) * (scaled - target);
        }
      o.raikov = std::sqrt(resid);
      o.st = studentize::multivariate_student_statistic(rows, d, root_mode);
      double nsq = 0.0;
      for (double x : o.st) nsq += x * x;
      o.covered = nsq <= report.chi2_crit;
    });

    LindebergEntry entry;
    entry.n = n;
    std::size_t covered = 0;
    std::vector<double> raikovs;
    raikovs.reserve(replications);
    std::vector<std::vector<double>> comps(d);
    std::vector<double> mean_cov(d * d, 0.0);
    for (const RepOut& o : outs) {
      if (o.covered) ++covered;
      raikovs.push_back(o.raikov);
      for (std::size_t k = 0; k < d; ++k) comps[k].push_back(o.st[k]);
      for (std::size_t k = 0; k < d * d; ++k) mean_cov[k] += o.scaled_cov[k];
    }
    entry.coverage = static_cast<double>(covered) / static_cast<double>(replications);
    entry.raikov_median = median_of(std::move(raikovs));
    SymMatrix mc(d);
    for (std::size_t a = 0; a < d; ++a)
      for (std::size_t b = 0; b <= a; ++b)
        mc.set(a, b, mean_cov[a * d + b] / static_cast<double>(replications));
    entry.mean_scaled_cov = mc;
    if (replications >= 20)
      for (std::size_t k = 0; k < d; ++k)
        entry.ks_component.push_back(ks_statistic(comps[k]));
    report.entries.push_back(std::move(entry));
  }
  return report;
}

}  // namespace eivm::verify
