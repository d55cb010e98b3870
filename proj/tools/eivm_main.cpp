// Command-line front end: estimate from CSV, simulate datasets, run
// verification suites.
//
// Exit codes: 0 success; 1 input/validation error; 2 statistical degeneracy.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "eivm/errors.hpp"
#include "eivm/json_io.hpp"
#include "eivm/model.hpp"
#include "eivm/simulate.hpp"
#include "eivm/studentize.hpp"
#include "eivm/svg_plot.hpp"
#include "eivm/verify.hpp"

namespace {

using eivm::json_io::json;
namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitDegenerate = 2;

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::invalid_argument("cannot open file for writing: " + path);
  out << content;
}

std::string sanitize_name(const std::string& name) {
  std::string out;
  for (char c : name)
    out += (std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_') ? c : '_';
  return out.empty() ? "scenario" : out;
}

// ---------- estimate ----------

struct EstimateOptions {
  std::string csv_path;
  std::string config_path;
  std::string out_path;
  int variant = 0;
  double lambda = 0.0, lambda_theta = 0.0, theta = 0.0, mu = 0.0;
  double level = 0.95;
  std::string root = "symmetric";
};

int cmd_estimate(const EstimateOptions& opt, const CLI::App& sub) {
  // Config file first, explicit flags override.
  json cfg = json::object();
  if (!opt.config_path.empty()) cfg = eivm::json_io::load_json_file(opt.config_path);

  auto effective = [&](const char* flag, const char* key, auto fallback,
                       auto flag_value) {
    using T = decltype(fallback);
    if (sub.count(flag) > 0) return static_cast<T>(flag_value);
    if (cfg.contains(key)) return cfg.at(key).get<T>();
    return fallback;
  };

  const int variant = effective("--variant", "variant", 0, opt.variant);
  const double level = effective("--level", "level", 0.95, opt.level);
  const std::string root_name =
      effective("--root", "root", std::string("symmetric"), opt.root);

  if (variant < 1 || variant > 3) {
    std::cerr << "estimate: --variant must be 1, 2 or 3\n";
    return kExitInput;
  }
  const auto root_mode = eivm::json_io::root_mode_from_name(root_name);

  eivm::model::IdentifiabilityConfig id;
  switch (variant) {
    case 1:
      id = eivm::model::IdentifiabilityConfig::a1(
          effective("--lambda", "lambda", 0.0, opt.lambda));
      break;
    case 2:
      id = eivm::model::IdentifiabilityConfig::a2(
          effective("--lambda-theta", "lambda_theta", 0.0, opt.lambda_theta),
          effective("--mu", "mu", 0.0, opt.mu));
      break;
    default:
      id = eivm::model::IdentifiabilityConfig::a3(
          effective("--theta", "theta", 0.0, opt.theta),
          effective("--mu", "mu", 0.0, opt.mu));
      break;
  }

  const eivm::model::Dataset data = eivm::model::read_csv_file(opt.csv_path);

  json out;
  out["schema_version"] = 1;
  out["config"] = json{{"csv", opt.csv_path},
                       {"identifiability", eivm::json_io::identifiability_to_json(id)},
                       {"level", level},
                       {"root_mode", root_name},
                       {"n", data.n()}};

  int code = kExitOk;
  try {
    const auto result =
        eivm::studentize::fit(data, id, eivm::studentize::Mode::plug_in, root_mode);
    out["estimates"] = json{{"beta", result.estimates.beta_hat},
                            {"alpha", result.estimates.alpha_hat},
                            {"gamma", result.estimates.gamma_hat},
                            {"gamma_negative", result.estimates.gamma_negative}};
    out["scalings"] = json{{"U", result.scalings.u}, {"L", result.scalings.l}};
    out["studentization_matrix"] = eivm::json_io::sym_matrix_to_json(result.v);
    out["asymptotic_covariance"] = eivm::json_io::sym_matrix_to_json(
        eivm::studentize::asymptotic_cov_estimate(result.v, result.scalings));
    out["confidence_region"] = eivm::json_io::confidence_region_to_json(
        eivm::studentize::confidence_region(result, level));
  } catch (const eivm::Error& e) {
    // Degenerate data: still report whatever was estimable.
    out["degeneracy"] = json{{"kind", eivm::error_kind_name(e.kind())},
                             {"message", e.what()}};
    try {
      const auto est = eivm::estimators::estimate(data, id);
      out["estimates"] = json{{"beta", est.beta_hat},
                              {"alpha", est.alpha_hat},
                              {"gamma", est.gamma_hat},
                              {"gamma_negative", est.gamma_negative}};
    } catch (const eivm::Error&) {
    }
    code = kExitDegenerate;
  }

  const std::string text = out.dump(2) + "\n";
  if (opt.out_path.empty())
    std::cout << text;
  else
    write_text_file(opt.out_path, text);
  return code;
}

// ---------- simulate ----------

struct SimulateOptions {
  std::string scenario_path;
  std::uint64_t seed = 0;
  std::string out_csv;
};

int cmd_simulate(const SimulateOptions& opt) {
  const json sj = eivm::json_io::load_json_file(opt.scenario_path);
  const auto scenario = eivm::json_io::scenario_from_json(sj);
  eivm::simulate::validate(scenario);

  const auto [data, truth] = eivm::simulate::generate(scenario, opt.seed);

  std::ofstream csv(opt.out_csv, std::ios::binary);
  if (!csv) throw std::invalid_argument("cannot open file for writing: " + opt.out_csv);
  eivm::model::write_csv(csv, data);
  csv.close();

  fs::path truth_path(opt.out_csv);
  truth_path.replace_extension();
  truth_path += "_truth.json";
  eivm::json_io::write_json_file(
      truth_path.string(), eivm::json_io::ground_truth_to_json(truth, scenario, opt.seed));
  return kExitOk;
}

// ---------- verify ----------

struct VerifyOptions {
  std::string suite_path;
  std::string out_dir;
  std::size_t reps = 1000;
  std::uint64_t seed = 0;
  double level = 0.95;
  std::string root = "symmetric";
  unsigned threads = 2;
  bool dump_csv = false;
};

void write_scenario_outputs(const VerifyOptions& opt, const std::string& name,
                            const eivm::simulate::Scenario& scenario,
                            const eivm::verify::McReport& report) {
  const fs::path dir(opt.out_dir);
  const std::string base = sanitize_name(name);

  eivm::json_io::write_json_file((dir / (base + "_report.json")).string(),
                                 eivm::json_io::mc_report_to_json(report, scenario));
  if (opt.dump_csv)
    write_text_file((dir / (base + "_reps.csv")).string(),
                    eivm::verify::replications_csv(report));

  // Plots describe the plug-in (data-based) statistic.
  std::vector<double> comp[3];
  std::vector<double> norm2;
  for (const auto& rep : report.replications) {
    if (rep.status != eivm::verify::RepStatus::ok) continue;
    double nsq = 0.0;
    for (int k = 0; k < 3; ++k) {
      comp[k].push_back(rep.t_plug_in[k]);
      nsq += rep.t_plug_in[k] * rep.t_plug_in[k];
    }
    norm2.push_back(nsq);
  }
  const char* labels[3] = {"T1", "T2", "T3"};
  for (int k = 0; k < 3; ++k)
    write_text_file((dir / (base + "_" + labels[k] + "_hist.svg")).string(),
                    eivm::svg::histogram_with_normal(
                        comp[k], name + ": " + labels[k] + " vs standard normal"));
  write_text_file((dir / (base + "_qq_norm2.svg")).string(),
                  eivm::svg::qq_plot_chi2(norm2, 3, name + ": |T|^2 vs chi-square(3)"));
}

int cmd_verify(const VerifyOptions& opt) {
  const json suite = eivm::json_io::load_json_file(opt.suite_path);
  const auto root_mode = eivm::json_io::root_mode_from_name(opt.root);

  const bool has_scenarios =
      suite.contains("scenarios") && suite.at("scenarios").is_array() &&
      !suite.at("scenarios").empty();
  const bool has_lindeberg =
      suite.contains("lindeberg") && suite.at("lindeberg").is_array() &&
      !suite.at("lindeberg").empty();
  if (!has_scenarios && !has_lindeberg) {
    std::cerr << "verify: suite lists no scenarios\n";
    return kExitInput;
  }

  fs::create_directories(opt.out_dir);
  std::string summary;
  summary += "suite: " + opt.suite_path + "\n";
  summary += "reps: " + std::to_string(opt.reps) + "  master_seed: " +
             std::to_string(opt.seed) + "  level: " + std::to_string(opt.level) +
             "  root: " + opt.root + "\n\n";
  summary += "name                              variant  used   coverage(a)  coverage(b)  failures\n";

  std::size_t index = 0;
  if (has_scenarios) {
    for (const auto& entry : suite.at("scenarios")) {
      std::string name = entry.contains("name")
                             ? entry.at("name").get<std::string>()
                             : ("scenario" + std::to_string(index));
      try {
        const auto scenario = eivm::json_io::scenario_from_json(entry.at("scenario"));
        const double level =
            entry.contains("level") ? entry.at("level").get<double>() : opt.level;
        const auto report = eivm::verify::run_monte_carlo(
            scenario, scenario.identifiability.variant, opt.reps, level,
            eivm::rng::derive_key(opt.seed, index), root_mode, opt.threads, 0.05, name);
        write_scenario_outputs(opt, name, scenario, report);

        char line[256];
        std::snprintf(line, sizeof line, "%-32s  %-7d  %-5zu  %-11.4f  %-11.4f  %zu\n",
                      name.c_str(), static_cast<int>(report.variant),
                      report.replications_used, report.mode_a.coverage,
                      report.mode_b.coverage, report.failures.total());
        summary += line;
      } catch (const std::exception& e) {
        throw std::invalid_argument("scenario '" + name + "': " + e.what());
      }
      ++index;
    }
  }

  if (has_lindeberg) {
    std::size_t li = 0;
    for (const auto& entry : suite.at("lindeberg")) {
      const std::size_t d = entry.contains("d") ? entry.at("d").get<std::size_t>() : 2;
      std::vector<std::size_t> n_grid = {2000};
      if (entry.contains("n_grid")) n_grid = entry.at("n_grid").get<std::vector<std::size_t>>();
      const auto report = eivm::verify::lindeberg_array_experiment(
          d, n_grid, opt.reps, opt.level, eivm::rng::derive_key(opt.seed, 1000 + li),
          root_mode, opt.threads);
      eivm::json_io::write_json_file(
          (fs::path(opt.out_dir) / ("lindeberg" + std::to_string(li) + "_report.json"))
              .string(),
          eivm::json_io::lindeberg_report_to_json(report));
      for (const auto& e : report.entries) {
        char line[256];
        std::snprintf(line, sizeof line,
                      "lindeberg d=%zu n=%-6zu coverage %.4f raikov_median %.4f\n",
                      report.d, e.n, e.coverage, e.raikov_median);
        summary += line;
      }
      ++li;
    }
  }

  write_text_file((fs::path(opt.out_dir) / "summary.txt").string(), summary);
  std::cout << summary;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Estimation, Studentized confidence regions and Monte Carlo verification\n"
      "for linear structural and functional error-in-variables models."};
  app.require_subcommand(1);

  EstimateOptions est;
  CLI::App* est_cmd = app.add_subcommand(
      "estimate", "Estimate slope/intercept/error variance from a CSV of (x, y) pairs");
  est_cmd->add_option("--csv", est.csv_path, "input CSV with header x,y")->required();
  est_cmd->add_option("--config", est.config_path, "JSON config file (flags override)");
  est_cmd->add_option("--variant", est.variant, "identifiability variant: 1, 2 or 3");
  est_cmd->add_option("--lambda", est.lambda, "variance ratio (variant 1)");
  est_cmd->add_option("--lambda-theta", est.lambda_theta, "Var(delta) (variant 2)");
  est_cmd->add_option("--theta", est.theta, "Var(eps) (variant 3)");
  est_cmd->add_option("--mu", est.mu, "error covariance (variants 2/3)");
  est_cmd->add_option("--level", est.level, "confidence level (default 0.95)");
  est_cmd->add_option("--root", est.root, "matrix root: cholesky|symmetric");
  est_cmd->add_option("--out", est.out_path, "output JSON path (default stdout)");

  SimulateOptions sim;
  CLI::App* sim_cmd =
      app.add_subcommand("simulate", "Draw a synthetic dataset from a scenario");
  sim_cmd->add_option("--scenario", sim.scenario_path, "scenario JSON")->required();
  sim_cmd->add_option("--seed", sim.seed, "random seed")->required();
  sim_cmd->add_option("--out", sim.out_csv, "output CSV path")->required();

  VerifyOptions ver;
  CLI::App* ver_cmd = app.add_subcommand(
      "verify", "Run Monte Carlo verification suites and emit reports and plots");
  ver_cmd->add_option("--suite", ver.suite_path, "suite JSON")->required();
  ver_cmd->add_option("--out", ver.out_dir, "output directory")->required();
  ver_cmd->add_option("--reps", ver.reps, "replications per scenario");
  ver_cmd->add_option("--seed", ver.seed, "master seed");
  ver_cmd->add_option("--level", ver.level, "confidence level (default 0.95)");
  ver_cmd->add_option("--root", ver.root, "matrix root: cholesky|symmetric");
  ver_cmd->add_option("--threads", ver.threads, "worker threads");
  ver_cmd->add_flag("--dump-csv", ver.dump_csv, "dump per-replication T vectors as CSV");

  CLI11_PARSE(app, argc, argv);

  try {
    if (est_cmd->parsed()) return cmd_estimate(est, *est_cmd);
    if (sim_cmd->parsed()) return cmd_simulate(sim);
    if (ver_cmd->parsed()) return cmd_verify(ver);
  } catch (const eivm::Error& e) {
    std::cerr << "degenerate: " << e.what() << "\n";
    return kExitDegenerate;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitInput;
}
