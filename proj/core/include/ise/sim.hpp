#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/dial_select.hpp"
#include "ise/family.hpp"
#include "ise/multi_source.hpp"
#include "ise/rng.hpp"
#include "ise/shrink.hpp"

namespace ise {

enum class Setting { I, II, III, IV, MultiI, MultiII, MultiIII };
enum class FeatureInfo { Small, Large };
enum class Misspec { Cauchy, DroppedZ, Squared };

std::string_view to_string(Setting s);
std::string_view to_string(FeatureInfo f);
std::string_view to_string(Misspec m);
Setting parse_setting(std::string_view s);
FeatureInfo parse_feature_info(std::string_view s);
Misspec parse_misspec(std::string_view s);

bool is_multi(Setting s);

struct SimConfig {
  Setting setting = Setting::I;
  std::size_t n1 = 50;  // per source for the multi-source settings
  std::size_t n2 = 50;
  int delta_case = 0;  // II: 0 zero, 1 nonzero. III: 0, 1, 2
  FeatureInfo feature_info = FeatureInfo::Large;
  bool correlated = false;
  Misspec misspec = Misspec::Cauchy;
  std::size_t replicates = 1000;
  std::uint64_t master_seed = 20240611;
  LambdaBracket lambda_bracket;
  std::vector<std::string> estimators;  // empty selects the setting's defaults
  unsigned threads = 0;                 // 0: hardware concurrency
  double level = 0.95;
  bool keep_records = true;

  /// Default sample sizes for a setting (Setting III depends on `correlated`).
  static SimConfig defaults(Setting setting, bool correlated = false);

  /// Throws Validation naming the offending field.
  void validate() const;

  /// Estimator labels actually run.
  std::vector<std::string> resolved_estimators() const;
};

/// Features with an intercept row: (k + 1) x n, iid N(0, sd^2) or, with rho != 0,
/// equicorrelated unit-variance Gaussian columns.
Eigen::MatrixXd draw_features(CounterRng& rng, std::size_t n, std::size_t k, double sd, double rho = 0.0);

struct SourceDraw {
  std::vector<Dataset> sources;
  std::vector<Eigen::VectorXd> beta1_true;  // one per source
};

SourceDraw generate_source(const SimConfig& config, CounterRng& rng);

/// Everything fixed across the replicates of one cell.
struct SimCell {
  GlmFamily family = GlmFamily::gaussian();
  SourceDraw draw;
  std::vector<SourceSummary> summaries;  // one per source
  PreparedConfigs multi;                 // multi-source settings only
  Eigen::VectorXd beta2;                 // truth for the target
};

/// Draws the source from stream 0 of the master seed, fits it and fixes beta2.
SimCell build_cell(const SimConfig& config);

Dataset generate_target(const SimConfig& config, const SimCell& cell, CounterRng& rng);

struct EstimatorSummary {
  std::string estimator;
  std::size_t used = 0;
  std::size_t failed = 0;
  double emse = 0.0;
  double mcse = 0.0;
  double coverage = std::numeric_limits<double>::quiet_NaN();  // median over coordinates
  std::vector<double> coordinate_coverage;
  double lambda_mean = std::numeric_limits<double>::quiet_NaN();
  double lambda_sd = std::numeric_limits<double>::quiet_NaN();
  std::size_t width_violations = 0;  // intervals wider than Wald
  std::size_t width_checks = 0;
};

struct ReplicateRecord {
  std::size_t replicate = 0;
  std::string estimator;
  bool ok = false;
  double sq_error = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  int covered = -1;  // coordinates covered, -1 when no interval
  std::string error;
};

struct SummaryTable {
  SimConfig config;
  Eigen::VectorXd beta1_hat;
  Eigen::VectorXd beta2;
  std::vector<EstimatorSummary> rows;
  std::vector<ReplicateRecord> records;
  std::vector<std::pair<std::string, double>> selection;  // multi-source win rates
  std::vector<std::string> warnings;

  const EstimatorSummary& row(std::string_view estimator) const;
  double selection_rate(std::string_view key) const;
};

/// Power of ten used to scale eMSE in summary tables for this setting.
int table_exponent(Setting s);

SummaryTable run_setting(const SimConfig& config);

struct SweepRow {
  double lambda = 0.0;
  Eigen::VectorXd beta_tilde;
  double mse = std::numeric_limits<double>::quiet_NaN();
  bool ok = false;
  std::string error;
};

/// beta_tilde(lambda) and the estimated (a)MSE at each grid value.
std::vector<SweepRow> lambda_sweep(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                   const std::vector<double>& grid);

}  // namespace ise
