#ifndef EIVM_JSON_IO_HPP
#define EIVM_JSON_IO_HPP

#include <cstdint>
#include <string>

#include <json.hpp>

#include "eivm/model.hpp"
#include "eivm/simulate.hpp"
#include "eivm/studentize.hpp"
#include "eivm/verify.hpp"

// JSON schemas (all carry "schema_version": 1):
//   scenario       - mirrors simulate::Scenario; consumed by the CLI and the
//                    verification suite files.
//   ground truth   - sidecar written next to simulated datasets.
//   Monte Carlo    - verify::McReport plus an echo of the scenario it ran.
// Keys are emitted in sorted order and numbers in shortest round-trip form,
// so identical runs serialize byte-identically.

namespace eivm::json_io {

using nlohmann::json;

json identifiability_to_json(const model::IdentifiabilityConfig& config);
model::IdentifiabilityConfig identifiability_from_json(const json& j);

json scenario_to_json(const simulate::Scenario& scenario);
simulate::Scenario scenario_from_json(const json& j);

json sym_matrix_to_json(const linalg::SymMatrix& m);
linalg::SymMatrix sym_matrix_from_json(const json& j);

json ground_truth_to_json(const model::GroundTruth& truth,
                          const simulate::Scenario& scenario, std::uint64_t seed);

// include_replications controls whether the per-replication T vectors are
// embedded (they are also available as CSV via verify::replications_csv).
json mc_report_to_json(const verify::McReport& report,
                       const simulate::Scenario& scenario,
                       bool include_replications = true);

json lindeberg_report_to_json(const verify::LindebergReport& report);

json confidence_region_to_json(const studentize::ConfidenceRegion& region);

std::string root_mode_name(linalg::RootMode mode);
linalg::RootMode root_mode_from_name(const std::string& name);

json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const json& j);

}  // namespace eivm::json_io

#endif  // EIVM_JSON_IO_HPP
