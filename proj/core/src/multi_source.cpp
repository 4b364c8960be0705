#include "ise/multi_source.hpp"

#include <cmath>
#include <limits>

#include "ise/error.hpp"

namespace ise {

const char* const kPostSelectionWarning =
    "intervals computed after choosing a source configuration do not account for that choice";

Dataset concat_sources(const std::vector<Dataset>& sources) {
  if (sources.empty()) throw Error(ErrorKind::Validation, "no sources to concatenate");
  const Eigen::Index p = sources.front().design.rows();
  Eigen::Index n = 0;
  for (const Dataset& s : sources) {
    if (s.design.rows() != p) {
      throw Error(ErrorKind::DimensionMismatch, "sources disagree on the number of features");
    }
    n += s.design.cols();
  }
  Eigen::MatrixXd design(p, n);
  Eigen::VectorXd response(n);
  Eigen::Index at = 0;
  for (const Dataset& s : sources) {
    design.middleCols(at, s.design.cols()) = s.design;
    response.segment(at, s.response.size()) = s.response;
    at += s.design.cols();
  }
  return Dataset(std::move(design), std::move(response), sources.front().feature_names);
}

ConfigMode parse_config_mode(std::string_view name) {
  if (name == "singles-and-full" || name == "singles_and_full" || name == "SinglesAndFull") {
    return ConfigMode::SinglesAndFull;
  }
  if (name == "all-subsets" || name == "all_subsets" || name == "AllSubsets") return ConfigMode::AllSubsets;
  throw Error(ErrorKind::Validation, "unknown source configuration mode '" + std::string(name) + "'");
}

namespace {

SourceConfig make_config(std::vector<std::size_t> members) {
  std::string id = "{";
  for (std::size_t i = 0; i < members.size(); ++i) {
    if (i) id += ",";
    id += std::to_string(members[i] + 1);
  }
  id += "}";
  return SourceConfig{id, std::move(members), std::nullopt};
}

}  // namespace

std::vector<SourceConfig> enumerate_configs(std::size_t M, ConfigMode mode) {
  if (M == 0) throw Error(ErrorKind::Validation, "need at least one source");
  std::vector<SourceConfig> out;
  if (mode == ConfigMode::AllSubsets) {
    if (M > 10) {
      throw Error(ErrorKind::TooManySources, "all-subsets mode supports at most 10 sources, got " +
                                                 std::to_string(M));
    }
    for (std::size_t mask = 0; mask < (std::size_t{1} << M); ++mask) {
      std::vector<std::size_t> members;
      for (std::size_t j = 0; j < M; ++j) {
        if (mask & (std::size_t{1} << j)) members.push_back(j);
      }
      out.push_back(make_config(std::move(members)));
    }
    return out;
  }
  out.push_back(make_config({}));
  for (std::size_t j = 0; j < M; ++j) out.push_back(make_config({j}));
  if (M > 1) {
    std::vector<std::size_t> all(M);
    for (std::size_t j = 0; j < M; ++j) all[j] = j;
    out.push_back(make_config(std::move(all)));
  }
  return out;
}

PreparedConfigs prepare_configs(GlmFamily family, const std::vector<Dataset>& sources, ConfigMode mode) {
  PreparedConfigs prepared;
  prepared.configs = enumerate_configs(sources.size(), mode);
  prepared.errors.resize(prepared.configs.size());
  for (std::size_t c = 0; c < prepared.configs.size(); ++c) {
    SourceConfig& config = prepared.configs[c];
    if (config.members.empty()) continue;
    try {
      std::vector<Dataset> parts;
      for (std::size_t j : config.members) parts.push_back(sources[j]);
      const Dataset joined = parts.size() == 1 ? parts.front() : concat_sources(parts);
      config.assembled = SourceSummary::from_data(family, joined);
    } catch (const Error& e) {
      prepared.errors[c] = e.what();
    }
  }
  return prepared;
}

SourceSelection score_configs(GlmFamily family, const MleFit& target_fit, const PreparedConfigs& prepared,
                              LambdaBracket bracket) {
  SourceSelection sel;
  sel.warning = kPostSelectionWarning;
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < prepared.configs.size(); ++c) {
    const SourceConfig& config = prepared.configs[c];
    ConfigScore score;
    score.id = config.id;
    score.members = config.members;
    score.error = prepared.errors[c];
    try {
      if (config.members.empty()) {
        score.min_mse = family.dispersion(target_fit.gamma_hat) *
                        target_fit.info.llt().solve(Eigen::MatrixXd::Identity(target_fit.p, target_fit.p)).trace();
        if (family.is_gaussian()) score.min_mse /= static_cast<double>(target_fit.n);
        score.ok = true;
      } else if (config.assembled) {
        const SourceSummary& src = *config.assembled;
        src.check(family, target_fit.p);
        MseCurve curve;
        if (family.is_gaussian()) {
          curve = select_lambda(GaussianMseCurve(target_fit, src), bracket);
        } else {
          curve = select_lambda(GlmAmseCurve(family, target_fit, src), bracket);
        }
        score.min_mse = curve.mse_at_tilde;
        score.lambda_tilde = curve.lambda_tilde;
        score.ok = true;
      }
    } catch (const Error& e) {
      score.ok = false;
      score.error = e.what();
    }
    if (score.ok && score.min_mse < best) {
      best = score.min_mse;
      sel.best = c;
    }
    sel.report.push_back(std::move(score));
  }
  if (!std::isfinite(best)) throw Error(ErrorKind::Validation, "no source configuration could be scored");
  return sel;
}

SourceSelection select_source_config(GlmFamily family, const Dataset& target, const std::vector<Dataset>& sources,
                                     ConfigMode mode, LambdaBracket bracket) {
  const MleFit target_fit = fit_mle(family, target);
  return score_configs(family, target_fit, prepare_configs(family, sources, mode), bracket);
}

}  // namespace ise
