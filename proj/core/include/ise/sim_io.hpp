#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include "ise/sim.hpp"

namespace ise {

/// Parses a simulation config. Unknown or ill-typed fields raise Validation
/// errors that name the field path (e.g. "config.lambda_bracket[1]").
SimConfig parse_sim_config(std::string_view json_text);

/// Fully resolved config, including defaults and the master seed.
std::string sim_config_to_json(const SimConfig& config);

/// One row per estimator. With `paper_scale`, eMSE is multiplied by the
/// setting's table power of ten, MCse by 10^3 and coverage by 100.
void write_summary_csv(std::ostream& out, const SummaryTable& table, bool paper_scale);
void write_replicates_csv(std::ostream& out, const SummaryTable& table);
void write_selection_csv(std::ostream& out, const SummaryTable& table);

/// Writes summary.csv, replicates.csv, config.json (and selection.csv for the
/// multi-source settings) into `dir`, creating it if needed. Returns the paths.
std::vector<std::filesystem::path> write_simulation(const SummaryTable& table, const std::filesystem::path& dir,
                                                    bool paper_scale);

}  // namespace ise
