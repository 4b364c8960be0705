#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "ise/dataset.hpp"
#include "ise/dial_select.hpp"
#include "ise/family.hpp"
#include "ise/glm.hpp"
#include "ise/shrink.hpp"

namespace ise {

/// Column-concatenation of datasets sharing p.
Dataset concat_sources(const std::vector<Dataset>& sources);

enum class ConfigMode { SinglesAndFull, AllSubsets };

ConfigMode parse_config_mode(std::string_view name);

struct SourceConfig {
  std::string id;                    // e.g. "{}", "{1,3}" (1-based)
  std::vector<std::size_t> members;  // 0-based source indices, ascending
  std::optional<SourceSummary> assembled;
};

/// SinglesAndFull: the empty set, each single source, then the full set (M + 2
/// configs, fewer when M = 1). AllSubsets: all 2^M subsets in bitmask order.
std::vector<SourceConfig> enumerate_configs(std::size_t M, ConfigMode mode);

/// Fits the MLE of each config's concatenated source and attaches its summary.
/// Configs whose fit fails keep `assembled` empty and record the message.
struct PreparedConfigs {
  std::vector<SourceConfig> configs;
  std::vector<std::string> errors;  // empty string when fine
};
PreparedConfigs prepare_configs(GlmFamily family, const std::vector<Dataset>& sources, ConfigMode mode);

struct ConfigScore {
  std::string id;
  std::vector<std::size_t> members;
  double min_mse = 0.0;
  double lambda_tilde = 0.0;
  bool ok = false;
  std::string error;
};

struct SourceSelection {
  std::size_t best = 0;  // index into report
  std::vector<ConfigScore> report;
  std::string warning;
};

extern const char* const kPostSelectionWarning;

SourceSelection score_configs(GlmFamily family, const MleFit& target_fit, const PreparedConfigs& prepared,
                              LambdaBracket bracket = {});

SourceSelection select_source_config(GlmFamily family, const Dataset& target, const std::vector<Dataset>& sources,
                                     ConfigMode mode = ConfigMode::SinglesAndFull, LambdaBracket bracket = {});

}  // namespace ise
