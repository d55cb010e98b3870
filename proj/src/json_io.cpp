#include "eivm/json_io.hpp"

#include <fstream>
#include <stdexcept>

namespace eivm::json_io {

namespace {

constexpr int kSchemaVersion = 1;

void require(const json& j, const char* key) {
  if (!j.contains(key))
    throw std::invalid_argument(std::string("json: missing field '") + key + "'");
}

double number(const json& j, const char* key) {
  require(j, key);
  if (!j.at(key).is_number())
    throw std::invalid_argument(std::string("json: field '") + key + "' must be a number");
  return j.at(key).get<double>();
}

std::string rep_status_name(verify::RepStatus s) {
  switch (s) {
    case verify::RepStatus::ok: return "ok";
    case verify::RepStatus::degenerate_denominator: return "degenerate_denominator";
    case verify::RepStatus::beta_near_zero: return "beta_near_zero";
    case verify::RepStatus::not_positive_definite: return "not_positive_definite";
  }
  return "?";
}

json ks_to_json(const verify::KsResult& k) { return json{{"d", k.d}, {"p", k.p}}; }

json mode_summary_to_json(const verify::ModeSummary& m) {
  return json{{"coverage", m.coverage},
              {"ks_component", json::array({ks_to_json(m.ks_component[0]),
                                            ks_to_json(m.ks_component[1]),
                                            ks_to_json(m.ks_component[2])})},
              {"ks_norm2_pit", ks_to_json(m.ks_norm2_pit)},
              {"mardia", json{{"b1", m.mardia.b1}, {"b2", m.mardia.b2}}}};
}

}  // namespace

json identifiability_to_json(const model::IdentifiabilityConfig& config) {
  json j;
  j["variant"] = static_cast<int>(config.variant);
  switch (config.variant) {
    case model::Variant::A1:
      j["lambda"] = config.lambda;
      break;
    case model::Variant::A2:
      j["lambda_theta"] = config.lambda_theta;
      j["mu"] = config.mu;
      break;
    case model::Variant::A3:
      j["theta"] = config.theta;
      j["mu"] = config.mu;
      break;
  }
  return j;
}

model::IdentifiabilityConfig identifiability_from_json(const json& j) {
  require(j, "variant");
  const int v = j.at("variant").get<int>();
  switch (v) {
    case 1: return model::IdentifiabilityConfig::a1(number(j, "lambda"));
    case 2:
      return model::IdentifiabilityConfig::a2(number(j, "lambda_theta"), number(j, "mu"));
    case 3: return model::IdentifiabilityConfig::a3(number(j, "theta"), number(j, "mu"));
    default:
      throw std::invalid_argument("json: variant must be 1, 2 or 3");
  }
}

json sym_matrix_to_json(const linalg::SymMatrix& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    json row = json::array();
    for (std::size_t k = 0; k < m.dim(); ++k) row.push_back(m(i, k));
    rows.push_back(row);
  }
  return rows;
}

linalg::SymMatrix sym_matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty())
    throw std::invalid_argument("json: matrix must be a non-empty array of rows");
  const std::size_t dim = j.size();
  std::vector<double> entries;
  entries.reserve(dim * dim);
  for (const auto& row : j) {
    if (!row.is_array() || row.size() != dim)
      throw std::invalid_argument("json: matrix rows must all have the same length");
    for (const auto& v : row) entries.push_back(v.get<double>());
  }
  return linalg::SymMatrix::from_rowmajor(dim, entries);
}

json scenario_to_json(const simulate::Scenario& scenario) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["model"] = scenario.model == simulate::Scenario::Model::structural ? "structural"
                                                                       : "functional";
  j["n"] = scenario.n;
  j["truth"] = json{{"beta", scenario.beta}, {"alpha", scenario.alpha}};

  json xi;
  if (scenario.model == simulate::Scenario::Model::structural) {
    switch (scenario.xi.kind) {
      case simulate::XiFamily::Kind::normal:
        xi = json{{"kind", "normal"}, {"mean", scenario.xi.p1}, {"var", scenario.xi.p2}};
        break;
      case simulate::XiFamily::Kind::uniform:
        xi = json{{"kind", "uniform"}, {"a", scenario.xi.p1}, {"b", scenario.xi.p2}};
        break;
      case simulate::XiFamily::Kind::pareto_symmetric_tail2:
        xi = json{{"kind", "pareto_symmetric_tail2"}, {"m", scenario.xi.p1}};
        break;
    }
  } else {
    switch (scenario.design.kind) {
      case simulate::DesignFamily::Kind::equispaced:
        xi = json{{"kind", "equispaced"}, {"a", scenario.design.a}, {"b", scenario.design.b}};
        break;
      case simulate::DesignFamily::Kind::alternating_growth:
        xi = json{{"kind", "alternating_growth"}, {"p", scenario.design.p}};
        break;
    }
  }
  j["xi"] = xi;

  const char* ek = nullptr;
  switch (scenario.errors.kind) {
    case simulate::ErrorKindFamily::gaussian_correlated: ek = "gaussian_correlated"; break;
    case simulate::ErrorKindFamily::uniform_independent: ek = "uniform_independent"; break;
    case simulate::ErrorKindFamily::gaussian_plus_discrete:
      ek = "gaussian_plus_discrete";
      break;
  }
  j["errors"] = json{{"kind", ek}, {"gamma", sym_matrix_to_json(scenario.errors.gamma_matrix)}};
  j["identifiability"] = identifiability_to_json(scenario.identifiability);
  return j;
}

simulate::Scenario scenario_from_json(const json& j) {
  simulate::Scenario s;
  require(j, "model");
  const std::string model = j.at("model").get<std::string>();
  if (model == "structural")
    s.model = simulate::Scenario::Model::structural;
  else if (model == "functional")
    s.model = simulate::Scenario::Model::functional;
  else
    throw std::invalid_argument("json: model must be 'structural' or 'functional'");

  require(j, "n");
  s.n = j.at("n").get<std::size_t>();
  require(j, "truth");
  s.beta = number(j.at("truth"), "beta");
  s.alpha = number(j.at("truth"), "alpha");

  require(j, "xi");
  const json& xi = j.at("xi");
  require(xi, "kind");
  const std::string kind = xi.at("kind").get<std::string>();
  if (s.model == simulate::Scenario::Model::structural) {
    if (kind == "normal")
      s.xi = simulate::XiFamily::normal(number(xi, "mean"), number(xi, "var"));
    else if (kind == "uniform")
      s.xi = simulate::XiFamily::uniform(number(xi, "a"), number(xi, "b"));
    else if (kind == "pareto_symmetric_tail2")
      s.xi = simulate::XiFamily::pareto_symmetric_tail2(number(xi, "m"));
    else
      throw std::invalid_argument("json: unknown structural xi kind '" + kind + "'");
  } else {
    if (kind == "equispaced")
      s.design = simulate::DesignFamily::equispaced(number(xi, "a"), number(xi, "b"));
    else if (kind == "alternating_growth")
      s.design = simulate::DesignFamily::alternating_growth(number(xi, "p"));
    else
      throw std::invalid_argument("json: unknown design kind '" + kind + "'");
  }

  require(j, "errors");
  const json& err = j.at("errors");
  require(err, "kind");
  require(err, "gamma");
  const std::string ekind = err.at("kind").get<std::string>();
  if (ekind == "gaussian_correlated")
    s.errors.kind = simulate::ErrorKindFamily::gaussian_correlated;
  else if (ekind == "uniform_independent")
    s.errors.kind = simulate::ErrorKindFamily::uniform_independent;
  else if (ekind == "gaussian_plus_discrete")
    s.errors.kind = simulate::ErrorKindFamily::gaussian_plus_discrete;
  else
    throw std::invalid_argument("json: unknown error kind '" + ekind + "'");
  s.errors.gamma_matrix = sym_matrix_from_json(err.at("gamma"));

  require(j, "identifiability");
  s.identifiability = identifiability_from_json(j.at("identifiability"));
  return s;
}

json ground_truth_to_json(const model::GroundTruth& truth,
                          const simulate::Scenario& scenario, std::uint64_t seed) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["beta"] = truth.beta;
  j["alpha"] = truth.alpha;
  j["gamma"] = truth.gamma;
  j["gamma_matrix"] = sym_matrix_to_json(truth.gamma_matrix);
  j["xi"] = truth.xi;
  j["seed"] = seed;
  j["scenario"] = scenario_to_json(scenario);
  return j;
}

json mc_report_to_json(const verify::McReport& report,
                       const simulate::Scenario& scenario, bool include_replications) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["name"] = report.name;
  j["variant"] = static_cast<int>(report.variant);
  j["level"] = report.level;
  j["chi2_crit"] = report.chi2_crit;
  j["master_seed"] = report.master_seed;
  j["root_mode"] = root_mode_name(report.root_mode);
  j["replications_requested"] = report.replications_requested;
  j["replications_used"] = report.replications_used;
  j["failures"] = json{{"degenerate_denominator", report.failures.degenerate_denominator},
                       {"beta_near_zero", report.failures.beta_near_zero},
                       {"not_positive_definite", report.failures.not_positive_definite}};
  j["mode_a"] = mode_summary_to_json(report.mode_a);
  j["mode_b"] = mode_summary_to_json(report.mode_b);
  j["mode_diff_median"] = report.mode_diff_median;
  j["coverage_diff"] = report.coverage_diff;
  j["scenario"] = scenario_to_json(scenario);
  if (include_replications) {
    json reps = json::array();
    for (std::size_t r = 0; r < report.replications.size(); ++r) {
      const auto& rep = report.replications[r];
      json one;
      one["rep"] = r;
      one["status"] = rep_status_name(rep.status);
      if (rep.status == verify::RepStatus::ok) {
        one["t_a"] = json::array({rep.t_true_beta[0], rep.t_true_beta[1], rep.t_true_beta[2]});
        one["t_b"] = json::array({rep.t_plug_in[0], rep.t_plug_in[1], rep.t_plug_in[2]});
      }
      reps.push_back(one);
    }
    j["replications"] = reps;
  }
  return j;
}

json lindeberg_report_to_json(const verify::LindebergReport& report) {
  json j;
  j["schema_version"] = kSchemaVersion;
  j["d"] = report.d;
  j["replications"] = report.replications;
  j["level"] = report.level;
  j["chi2_crit"] = report.chi2_crit;
  j["master_seed"] = report.master_seed;
  j["c_lo"] = report.c_lo;
  j["c_hi"] = report.c_hi;
  json entries = json::array();
  for (const auto& e : report.entries) {
    json one;
    one["n"] = e.n;
    one["coverage"] = e.coverage;
    one["raikov_median"] = e.raikov_median;
    one["mean_scaled_cov"] = sym_matrix_to_json(e.mean_scaled_cov);
    json ks = json::array();
    for (const auto& k : e.ks_component) ks.push_back(ks_to_json(k));
    one["ks_component"] = ks;
    entries.push_back(one);
  }
  j["entries"] = entries;
  return j;
}

json confidence_region_to_json(const studentize::ConfidenceRegion& region) {
  json j;
  j["level"] = region.level;
  j["chi2_crit"] = region.chi2_crit;
  j["center"] = json::array({region.center[0], region.center[1], region.center[2]});
  j["shape"] = sym_matrix_to_json(region.shape);
  j["radius"] = region.radius;
  const char* names[3] = {"beta", "alpha", "gamma"};
  json intervals;
  for (int i = 0; i < 3; ++i)
    intervals[names[i]] = json::array({region.marginal[i].lo, region.marginal[i].hi});
  j["marginal_intervals"] = intervals;
  return j;
}

std::string root_mode_name(linalg::RootMode mode) {
  return mode == linalg::RootMode::cholesky ? "cholesky" : "symmetric";
}

linalg::RootMode root_mode_from_name(const std::string& name) {
  if (name == "cholesky") return linalg::RootMode::cholesky;
  if (name == "symmetric") return linalg::RootMode::symmetric;
  throw std::invalid_argument("root mode must be 'cholesky' or 'symmetric', got '" +
                              name + "'");
}

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open file: " + path);
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw std::invalid_argument("json parse error in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << j.dump(2) << "\n";
}

}  // namespace eivm::json_io
