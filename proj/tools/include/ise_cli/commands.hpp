#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace ise::cli {

struct DataArgs {
  std::string response = "y";
  bool intercept = true;
  std::string family = "gaussian";
};

struct FitArgs {
  std::filesystem::path data;
  DataArgs data_args;
  double level = 0.95;
};

struct ShrinkArgs {
  std::filesystem::path target;
  std::optional<std::filesystem::path> source;
  std::optional<std::filesystem::path> source_summary;
  DataArgs data_args;
  std::string lambda = "auto";
  double level = 0.95;
  double bracket_lo = 1e-8;
  double bracket_hi = 1e3;
};

struct SweepArgs {
  std::filesystem::path target;
  std::optional<std::filesystem::path> source;
  std::optional<std::filesystem::path> source_summary;
  DataArgs data_args;
  std::string grid = "0:1:11";  // lo:hi:k, evenly spaced and inclusive
};

struct SimulateArgs {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<unsigned> threads;
  std::optional<std::uint64_t> seed;
  bool paper_scale = false;
};

struct SelectSourceArgs {
  std::filesystem::path target;
  std::vector<std::filesystem::path> sources;
  DataArgs data_args;
  std::string mode = "singles-and-full";
};

nlohmann::json cmd_fit(const FitArgs& args);
nlohmann::json cmd_shrink(const ShrinkArgs& args);
/// CSV: lambda, one column per coefficient, estimated_mse, error.
void cmd_sweep(const SweepArgs& args, std::ostream& out);
nlohmann::json cmd_simulate(const SimulateArgs& args);
nlohmann::json cmd_select_source(const SelectSourceArgs& args);

/// Parses "lo:hi:k" into k evenly spaced values.
std::vector<double> parse_grid(const std::string& spec);

/// Entry point shared by the binary and the tests. Returns the exit code;
/// errors go to `err` as a JSON object.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ise::cli
