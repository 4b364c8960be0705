#include "ise/sim.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <thread>

#include "ise/baselines.hpp"
#include "ise/error.hpp"
#include "ise/inference.hpp"

namespace ise {

namespace {

const Eigen::VectorXd& set1_beta1() {
  static const Eigen::VectorXd v =
      (Eigen::VectorXd(11) << 1, -1.8, 2.6, 1.4, -3.6, 3.5, 2.4, -3.3, 1.8, -3.4, 2.8).finished();
  return v;
}
const Eigen::VectorXd& set1_delta() {
  static const Eigen::VectorXd v =
      (Eigen::VectorXd(11) << 0.2, 0.1, 0.2, -0.1, 0.1, -0.1, 0.2, 0.2, 0.2, -0.1, 0.1).finished();
  return v;
}
const Eigen::VectorXd& set2_beta1() {
  static const Eigen::VectorXd v = (Eigen::VectorXd(5) << 1, -1.8, -1.2, 1.6, 0.2).finished();
  return v;
}
const Eigen::VectorXd& set2_delta() {
  static const Eigen::VectorXd v = (Eigen::VectorXd(5) << 0, 0.25, 0, -0.25, 0.25).finished();
  return v;
}
const Eigen::VectorXd& set3_beta1() {
  static const Eigen::VectorXd v = (Eigen::VectorXd(3) << 1, -0.5, 0.5).finished();
  return v;
}
// last entry multiplies the omitted Z in the dropped-Z case
const Eigen::VectorXd& set4_beta1() {
  static const Eigen::VectorXd v =
      (Eigen::VectorXd(12) << 1, -1.8, 2.6, 1.4, -3.6, 3.5, 2.4, -3.3, 1.8, -3.4, 2.8, 1).finished();
  return v;
}
const Eigen::VectorXd& set4_delta() {
  static const Eigen::VectorXd v =
      (Eigen::VectorXd(11) << 0, 0.1, 0, -0.1, 0.1, -0.1, 0, 0, 0, -0.1, 0.1).finished();
  return v;
}
Eigen::VectorXd multi_c() { return (Eigen::VectorXd(4) << 1, -1.8, 2.6, 1.4).finished(); }
Eigen::VectorXd unit4(int k, double size) {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(4);
  e[k] = size;
  return e;
}

struct MultiBetas {
  std::vector<Eigen::VectorXd> sources;
  Eigen::VectorXd target;
};

MultiBetas multi_betas(Setting s) {
  const Eigen::VectorXd c = multi_c();
  switch (s) {
    case Setting::MultiI:
      return {{c + unit4(0, 0.25), c + unit4(1, 0.25), c + unit4(2, 1.0)}, c + unit4(2, 1.25)};
    case Setting::MultiII:
      return {{c + unit4(0, 0.25), c + unit4(1, 0.25), c + unit4(2, 0.25)}, c + unit4(3, 0.25)};
    default:
      return {{c + unit4(0, 1.0), c + unit4(1, 1.0), c + unit4(2, 1.0)}, c + unit4(3, 1.0)};
  }
}

GlmFamily family_of(Setting s) {
  return (s == Setting::II || s == Setting::III) ? GlmFamily::bernoulli() : GlmFamily::gaussian();
}

Eigen::VectorXd set3_delta(int which) {
  return (Eigen::VectorXd(3) << 0, static_cast<double>(which), 0).finished();
}

struct FeatureSpec {
  std::size_t k;
  double sd;
  double rho;
};

FeatureSpec source_features(const SimConfig& c) {
  switch (c.setting) {
    case Setting::I:
    case Setting::IV:
      return {10, 1.0, 0.0};
    case Setting::II:
      return {4, c.feature_info == FeatureInfo::Small ? 0.75 : 3.0, 0.0};
    case Setting::III:
      return c.correlated ? FeatureSpec{2, 1.0, 0.4} : FeatureSpec{2, 2.0, 0.0};
    default:
      return {3, 1.0, 0.0};
  }
}

FeatureSpec target_features(const SimConfig& c) {
  // the source scale is what varies; targets stay standard normal
  if (c.setting == Setting::II) return {4, 1.0, 0.0};
  if (c.setting == Setting::III && !c.correlated) return {2, 1.0, 0.0};
  return source_features(c);
}

Eigen::VectorXd draw_response(GlmFamily family, const Eigen::MatrixXd& x, const Eigen::VectorXd& beta,
                              CounterRng& rng) {
  const Eigen::VectorXd eta = x.transpose() * beta;
  Eigen::VectorXd y(eta.size());
  for (Eigen::Index i = 0; i < eta.size(); ++i) {
    y[i] = family.is_gaussian() ? eta[i] + rng.normal() : rng.bernoulli(family.mean(eta[i]));
  }
  return y;
}

Dataset misspecified_source(const SimConfig& c, CounterRng& rng) {
  const Eigen::MatrixXd x = draw_features(rng, c.n1, 10, 1.0);
  const Eigen::VectorXd beta = set4_beta1().head(11);
  Eigen::VectorXd y(static_cast<Eigen::Index>(c.n1));
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    switch (c.misspec) {
      case Misspec::Cauchy:
        y[i] = x.col(i).dot(beta) + rng.cauchy();
        break;
      case Misspec::DroppedZ: {
        const double z = rng.normal();
        y[i] = x.col(i).dot(beta) + set4_beta1()[11] * z + rng.normal();
        break;
      }
      case Misspec::Squared:
        y[i] = x.col(i).cwiseAbs2().dot(beta) + rng.normal();
        break;
    }
  }
  return Dataset(x, y);
}

std::vector<std::size_t> coverage_coordinates(const SimConfig& c, std::size_t p) {
  std::vector<std::size_t> coords;
  // Setting III reports coverage over the two slopes only
  for (std::size_t j = c.setting == Setting::III ? 1 : 0; j < p; ++j) coords.push_back(j);
  return coords;
}

double median(std::vector<double> v) {
  if (v.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::sort(v.begin(), v.end());
  const std::size_t m = v.size() / 2;
  return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

struct Outcome {
  bool ok = false;
  std::string error;
  double sq_error = std::numeric_limits<double>::quiet_NaN();
  double lambda = std::numeric_limits<double>::quiet_NaN();
  std::vector<char> covered;  // per coverage coordinate; empty without an interval
  int width_check = -1;       // 1 narrower than Wald, 0 wider, -1 not checked
};

struct ReplicateResult {
  std::vector<Outcome> outcomes;    // aligned with the estimator list
  std::vector<double> config_mse;   // multi-source only
  std::vector<char> config_ok;
};

std::vector<char> coverage_flags(const IntervalSet& ci, const Eigen::VectorXd& truth,
                                 const std::vector<std::size_t>& coords) {
  std::vector<char> flags;
  for (std::size_t j : coords) {
    const auto i = static_cast<Eigen::Index>(j);
    flags.push_back(ci.lower[i] <= truth[i] && truth[i] <= ci.upper[i]);
  }
  return flags;
}

int width_flag(const IntervalSet& ise, const IntervalSet& wald) {
  const Eigen::VectorXd a = ise.half_width();
  const Eigen::VectorXd b = wald.half_width();
  for (Eigen::Index j = 0; j < a.size(); ++j) {
    if (a[j] > b[j] * (1.0 + 1e-12)) return 0;
  }
  return 1;
}

class ReplicateRunner {
 public:
  ReplicateRunner(const SimConfig& config, const SimCell& cell)
      : config_(config), cell_(cell), labels_(config.resolved_estimators()) {
    coords_ = coverage_coordinates(config, static_cast<std::size_t>(cell.beta2.size()));
  }

  const std::vector<std::string>& labels() const { return labels_; }

  ReplicateResult run(std::size_t r) const {
    CounterRng rng = CounterRng::stream(replicate_seed(config_.master_seed, r), 1);
    ReplicateResult res;
    res.outcomes.resize(labels_.size());
    Dataset target;
    MleFit fit;
    try {
      target = generate_target(config_, cell_, rng);
      fit = fit_mle(cell_.family, target);
    } catch (const std::exception& e) {
      for (Outcome& o : res.outcomes) o.error = std::string("target fit: ") + e.what();
      return res;
    }
    const IntervalSet wald = wald_intervals(cell_.family, fit, config_.level);
    if (is_multi(config_.setting)) {
      run_multi(target, fit, wald, res);
    } else {
      for (std::size_t e = 0; e < labels_.size(); ++e) {
        try {
          res.outcomes[e] = run_one(labels_[e], target, fit, wald, cell_.summaries.front(), {});
        } catch (const std::exception& ex) {
          res.outcomes[e].ok = false;
          res.outcomes[e].error = ex.what();
        }
      }
    }
    return res;
  }

 private:
  Outcome finish(const Eigen::VectorXd& estimate) const {
    Outcome o;
    o.ok = true;
    o.sq_error = (estimate - cell_.beta2).squaredNorm();
    return o;
  }

  Outcome run_one(const std::string& label, const Dataset& target, const MleFit& fit, const IntervalSet& wald,
                  const SourceSummary& src, std::optional<double> fixed_lambda) const {
    const GlmFamily family = cell_.family;
    if (label == "mle") {
      Outcome o = finish(fit.beta_hat);
      o.covered = coverage_flags(wald, cell_.beta2, coords_);
      return o;
    }
    if (label == "ise" || label.rfind("ise{", 0) == 0) {
      double lambda;
      if (fixed_lambda) {
        lambda = *fixed_lambda;
      } else if (family.is_gaussian()) {
        lambda = select_lambda(GaussianMseCurve(fit, src), config_.lambda_bracket).lambda_tilde;
      } else {
        lambda = select_lambda(GlmAmseCurve(family, fit, src), config_.lambda_bracket).lambda_tilde;
      }
      const DialEstimate est = solve_dial_estimate(family, target, fit, src, lambda);
      const IntervalSet ci = confidence_intervals(est, config_.level);
      Outcome o = finish(est.beta_tilde);
      o.lambda = lambda;
      o.covered = coverage_flags(ci, cell_.beta2, coords_);
      o.width_check = width_flag(ci, wald);
      return o;
    }
    if (label == "pooled") {
      const MleFit pooled = pooled_mle(family, target, src);
      Outcome o = finish(pooled.beta_hat);
      o.covered = coverage_flags(wald_intervals(family, pooled, config_.level), cell_.beta2, coords_);
      return o;
    }
    if (label == "cos") {
      const double lambda = chen_owen_shi_lambda_hat(fit, src, config_.lambda_bracket);
      Outcome o = finish(chen_owen_shi(fit, src, lambda));
      o.lambda = lambda;
      return o;
    }
    if (label == "zheng") return finish(zheng_weight_estimator(family, fit, src));
    throw Error(ErrorKind::Validation, "unknown estimator '" + label + "'");
  }

  void run_multi(const Dataset& target, const MleFit& fit, const IntervalSet& wald, ReplicateResult& res) const {
    SourceSelection sel;
    try {
      sel = score_configs(cell_.family, fit, cell_.multi, config_.lambda_bracket);
    } catch (const std::exception& e) {
      for (Outcome& o : res.outcomes) o.error = e.what();
      return;
    }
    for (const ConfigScore& s : sel.report) {
      res.config_mse.push_back(s.min_mse);
      res.config_ok.push_back(s.ok);
    }
    for (std::size_t e = 0; e < labels_.size(); ++e) {
      try {
        if (labels_[e] == "mle") {
          res.outcomes[e] = run_one("mle", target, fit, wald, SourceSummary{}, {});
          continue;
        }
        const std::string id = labels_[e].substr(3);
        std::size_t c = 0;
        while (c < cell_.multi.configs.size() && cell_.multi.configs[c].id != id) ++c;
        if (c == cell_.multi.configs.size() || !cell_.multi.configs[c].assembled || !sel.report[c].ok) {
          throw Error(ErrorKind::Validation, "source configuration " + id + " unavailable");
        }
        res.outcomes[e] = run_one(labels_[e], target, fit, wald, *cell_.multi.configs[c].assembled,
                                  sel.report[c].lambda_tilde);
      } catch (const std::exception& ex) {
        res.outcomes[e].ok = false;
        res.outcomes[e].error = ex.what();
      }
    }
  }

  const SimConfig& config_;
  const SimCell& cell_;
  std::vector<std::string> labels_;
  std::vector<std::size_t> coords_;
};

}  // namespace

std::string_view to_string(Setting s) {
  switch (s) {
    case Setting::I: return "I";
    case Setting::II: return "II";
    case Setting::III: return "III";
    case Setting::IV: return "IV";
    case Setting::MultiI: return "MultiI";
    case Setting::MultiII: return "MultiII";
    case Setting::MultiIII: return "MultiIII";
  }
  return "?";
}

std::string_view to_string(FeatureInfo f) { return f == FeatureInfo::Small ? "small" : "large"; }

std::string_view to_string(Misspec m) {
  switch (m) {
    case Misspec::Cauchy: return "cauchy";
    case Misspec::DroppedZ: return "dropped_z";
    case Misspec::Squared: return "squared";
  }
  return "?";
}

Setting parse_setting(std::string_view s) {
  for (Setting v : {Setting::I, Setting::II, Setting::III, Setting::IV, Setting::MultiI, Setting::MultiII,
                    Setting::MultiIII}) {
    if (s == to_string(v)) return v;
  }
  throw Error(ErrorKind::Validation, "unknown setting '" + std::string(s) +
                                         "' (expected I, II, III, IV, MultiI, MultiII or MultiIII)");
}

FeatureInfo parse_feature_info(std::string_view s) {
  if (s == "small") return FeatureInfo::Small;
  if (s == "large") return FeatureInfo::Large;
  throw Error(ErrorKind::Validation, "feature_info must be 'small' or 'large'");
}

Misspec parse_misspec(std::string_view s) {
  for (Misspec v : {Misspec::Cauchy, Misspec::DroppedZ, Misspec::Squared}) {
    if (s == to_string(v)) return v;
  }
  throw Error(ErrorKind::Validation, "misspec must be 'cauchy', 'dropped_z' or 'squared'");
}

bool is_multi(Setting s) { return s == Setting::MultiI || s == Setting::MultiII || s == Setting::MultiIII; }

SimConfig SimConfig::defaults(Setting setting, bool correlated) {
  SimConfig c;
  c.setting = setting;
  c.correlated = correlated;
  switch (setting) {
    case Setting::I:
      c.n1 = c.n2 = 50;
      break;
    case Setting::II:
    case Setting::IV:
      c.n1 = c.n2 = 500;
      break;
    case Setting::III:
      c.n1 = 500;
      c.n2 = correlated ? 100 : 500;
      break;
    default:
      c.n1 = 100;
      c.n2 = 50;
      break;
  }
  return c;
}

std::vector<std::string> SimConfig::resolved_estimators() const {
  std::vector<std::string> all;
  switch (setting) {
    case Setting::I:
    case Setting::IV:
      all = {"ise", "cos", "pooled", "mle"};
      break;
    case Setting::II:
    case Setting::III:
      all = {"ise", "zheng", "pooled", "mle"};
      break;
    default:
      for (const SourceConfig& c : enumerate_configs(3, ConfigMode::SinglesAndFull)) {
        all.push_back(c.members.empty() ? "mle" : "ise" + c.id);
      }
      break;
  }
  if (estimators.empty()) return all;
  std::vector<std::string> picked;
  for (const std::string& e : estimators) {
    if (std::find(all.begin(), all.end(), e) == all.end()) {
      throw Error(ErrorKind::Validation, "estimators: '" + e + "' is not available in setting " +
                                             std::string(to_string(setting)));
    }
    picked.push_back(e);
  }
  return picked;
}

void SimConfig::validate() const {
  if (replicates < 1) throw Error(ErrorKind::Validation, "replicates: must be at least 1");
  if (!(level > 0.0 && level < 1.0)) throw Error(ErrorKind::Validation, "level: must lie in (0, 1)");
  if (!(lambda_bracket.hi > std::max(lambda_bracket.lo, 1e-8)) || lambda_bracket.lo < 0.0) {
    throw Error(ErrorKind::Validation, "lambda_bracket: need 0 <= lo < hi");
  }
  const std::size_t p = static_cast<std::size_t>(source_features(*this).k + 1);
  if (n1 <= p) throw Error(ErrorKind::Validation, "n1: must exceed the number of coefficients");
  if (n2 <= p) throw Error(ErrorKind::Validation, "n2: must exceed the number of coefficients");
  if (setting == Setting::II && (delta_case < 0 || delta_case > 1)) {
    throw Error(ErrorKind::Validation, "delta_case: Setting II accepts 0 or 1");
  }
  if (setting == Setting::III && (delta_case < 0 || delta_case > 2)) {
    throw Error(ErrorKind::Validation, "delta_case: Setting III accepts 0, 1 or 2");
  }
  resolved_estimators();
}

Eigen::MatrixXd draw_features(CounterRng& rng, std::size_t n, std::size_t k, double sd, double rho) {
  Eigen::MatrixXd x(static_cast<Eigen::Index>(k + 1), static_cast<Eigen::Index>(n));
  const double shared = std::sqrt(rho);
  const double own = std::sqrt(1.0 - rho);
  for (Eigen::Index i = 0; i < x.cols(); ++i) {
    x(0, i) = 1.0;
    const double common = rho != 0.0 ? rng.normal() : 0.0;
    for (Eigen::Index j = 1; j < x.rows(); ++j) {
      x(j, i) = rho != 0.0 ? sd * (shared * common + own * rng.normal()) : sd * rng.normal();
    }
  }
  return x;
}

SourceDraw generate_source(const SimConfig& config, CounterRng& rng) {
  SourceDraw draw;
  const GlmFamily family = family_of(config.setting);
  const FeatureSpec f = source_features(config);
  switch (config.setting) {
    case Setting::I:
    case Setting::II:
    case Setting::III: {
      const Eigen::VectorXd beta = config.setting == Setting::I    ? set1_beta1()
                                   : config.setting == Setting::II ? set2_beta1()
                                                                   : set3_beta1();
      Eigen::MatrixXd x = draw_features(rng, config.n1, f.k, f.sd, f.rho);
      Eigen::VectorXd y = draw_response(family, x, beta, rng);
      draw.sources.emplace_back(std::move(x), std::move(y));
      draw.beta1_true.push_back(beta);
      break;
    }
    case Setting::IV:
      draw.sources.push_back(misspecified_source(config, rng));
      draw.beta1_true.push_back(set4_beta1());
      break;
    default: {
      const MultiBetas betas = multi_betas(config.setting);
      for (const Eigen::VectorXd& beta : betas.sources) {
        Eigen::MatrixXd x = draw_features(rng, config.n1, f.k, f.sd, f.rho);
        Eigen::VectorXd y = draw_response(family, x, beta, rng);
        draw.sources.emplace_back(std::move(x), std::move(y));
        draw.beta1_true.push_back(beta);
      }
      break;
    }
  }
  return draw;
}

SimCell build_cell(const SimConfig& config) {
  config.validate();
  SimCell cell;
  cell.family = family_of(config.setting);
  CounterRng rng = CounterRng::stream(config.master_seed, 0);
  cell.draw = generate_source(config, rng);
  for (const Dataset& s : cell.draw.sources) {
    cell.summaries.push_back(SourceSummary::from_data(cell.family, s));
  }
  switch (config.setting) {
    case Setting::I:
      cell.beta2 = cell.summaries.front().beta1_hat + set1_delta();
      break;
    case Setting::II:
      cell.beta2 = cell.summaries.front().beta1_hat;
      if (config.delta_case == 1) cell.beta2 += set2_delta();
      break;
    case Setting::III:
      cell.beta2 = cell.summaries.front().beta1_hat + set3_delta(config.delta_case);
      break;
    case Setting::IV:
      cell.beta2 = set4_beta1().head(11) + set4_delta();
      break;
    default:
      cell.multi = prepare_configs(cell.family, cell.draw.sources, ConfigMode::SinglesAndFull);
      cell.beta2 = multi_betas(config.setting).target;
      break;
  }
  return cell;
}

Dataset generate_target(const SimConfig& config, const SimCell& cell, CounterRng& rng) {
  const FeatureSpec f = target_features(config);
  Eigen::MatrixXd x = draw_features(rng, config.n2, f.k, f.sd, f.rho);
  Eigen::VectorXd y = draw_response(cell.family, x, cell.beta2, rng);
  return Dataset(std::move(x), std::move(y));
}

const EstimatorSummary& SummaryTable::row(std::string_view estimator) const {
  for (const EstimatorSummary& r : rows) {
    if (r.estimator == estimator) return r;
  }
  throw Error(ErrorKind::Validation, "no summary row for estimator '" + std::string(estimator) + "'");
}

double SummaryTable::selection_rate(std::string_view key) const {
  for (const auto& [k, v] : selection) {
    if (k == key) return v;
  }
  throw Error(ErrorKind::Validation, "no selection statistic '" + std::string(key) + "'");
}

int table_exponent(Setting s) { return s == Setting::II ? 1 : 2; }

SummaryTable run_setting(const SimConfig& config) {
  const SimCell cell = build_cell(config);
  const ReplicateRunner runner(config, cell);
  const std::size_t R = config.replicates;
  std::vector<ReplicateResult> results(R);

  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, R));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    for (std::size_t r = next++; r < R; r = next++) {
      try {
        results[r] = runner.run(r);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  SummaryTable table;
  table.config = config;
  table.beta1_hat = cell.summaries.front().beta1_hat;
  table.beta2 = cell.beta2;
  const auto& labels = runner.labels();
  for (std::size_t e = 0; e < labels.size(); ++e) {
    EstimatorSummary s;
    s.estimator = labels[e];
    std::vector<double> errs;
    std::vector<double> lambdas;
    std::vector<std::size_t> covered;
    std::size_t with_ci = 0;
    std::string first_error;
    for (std::size_t r = 0; r < R; ++r) {
      const Outcome& o = results[r].outcomes[e];
      if (config.keep_records) {
        ReplicateRecord rec;
        rec.replicate = r;
        rec.estimator = labels[e];
        rec.ok = o.ok;
        rec.sq_error = o.sq_error;
        rec.lambda = o.lambda;
        rec.error = o.error;
        if (!o.covered.empty()) rec.covered = static_cast<int>(std::count(o.covered.begin(), o.covered.end(), 1));
        table.records.push_back(std::move(rec));
      }
      if (!o.ok) {
        ++s.failed;
        if (first_error.empty()) first_error = o.error;
        continue;
      }
      errs.push_back(o.sq_error);
      if (std::isfinite(o.lambda)) lambdas.push_back(o.lambda);
      if (!o.covered.empty()) {
        if (covered.empty()) covered.assign(o.covered.size(), 0);
        for (std::size_t j = 0; j < o.covered.size(); ++j) covered[j] += static_cast<std::size_t>(o.covered[j]);
        ++with_ci;
      }
      if (o.width_check >= 0) {
        ++s.width_checks;
        if (o.width_check == 0) ++s.width_violations;
      }
    }
    if (s.failed > 0) {
      const double rate = static_cast<double>(s.failed) / static_cast<double>(R);
      const std::string msg = labels[e] + ": " + std::to_string(s.failed) + " of " + std::to_string(R) +
                              " replicates failed (first: " + first_error + ")";
      if (rate >= 0.01 || errs.empty()) throw Error(ErrorKind::NonConvergence, msg);
      table.warnings.push_back(msg + "; excluded");
    }
    s.used = errs.size();
    const double n = static_cast<double>(errs.size());
    double mean = 0.0;
    for (double v : errs) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : errs) ss += (v - mean) * (v - mean);
    s.emse = mean;
    s.mcse = errs.size() > 1 ? std::sqrt(ss / (n - 1.0)) / std::sqrt(n) : 0.0;
    if (with_ci > 0) {
      for (std::size_t c : covered) {
        s.coordinate_coverage.push_back(static_cast<double>(c) / static_cast<double>(with_ci));
      }
      s.coverage = median(s.coordinate_coverage);
    }
    if (!lambdas.empty()) {
      double lm = 0.0;
      for (double v : lambdas) lm += v;
      lm /= static_cast<double>(lambdas.size());
      double lss = 0.0;
      for (double v : lambdas) lss += (v - lm) * (v - lm);
      s.lambda_mean = lm;
      s.lambda_sd = lambdas.size() > 1 ? std::sqrt(lss / static_cast<double>(lambdas.size() - 1)) : 0.0;
    }
    table.rows.push_back(std::move(s));
  }

  if (is_multi(config.setting)) {
    const auto& configs = cell.multi.configs;
    const std::size_t C = configs.size();
    std::vector<std::size_t> picked(C, 0);
    std::size_t scored = 0;
    for (std::size_t a = 0; a < C; ++a) {
      for (std::size_t b = 0; b < C; ++b) {
        if (a == b) continue;
        std::size_t wins = 0;
        std::size_t both = 0;
        for (const ReplicateResult& res : results) {
          if (res.config_mse.size() != C || !res.config_ok[a] || !res.config_ok[b]) continue;
          ++both;
          if (res.config_mse[a] < res.config_mse[b]) ++wins;
        }
        table.selection.emplace_back(configs[a].id + "<" + configs[b].id,
                                     both ? static_cast<double>(wins) / static_cast<double>(both) : 0.0);
      }
    }
    for (const ReplicateResult& res : results) {
      if (res.config_mse.size() != C) continue;
      ++scored;
      std::size_t best = C;
      for (std::size_t c = 0; c < C; ++c) {
        if (res.config_ok[c] && (best == C || res.config_mse[c] < res.config_mse[best])) best = c;
      }
      if (best < C) ++picked[best];
    }
    for (std::size_t c = 0; c < C; ++c) {
      table.selection.emplace_back("selected:" + configs[c].id,
                                   scored ? static_cast<double>(picked[c]) / static_cast<double>(scored) : 0.0);
    }
    table.warnings.push_back(kPostSelectionWarning);
  }
  return table;
}

std::vector<SweepRow> lambda_sweep(GlmFamily family, const Dataset& target, const SourceSummary& source,
                                   const std::vector<double>& grid) {
  source.check(family, target.p());
  const MleFit fit = fit_mle(family, target);
  std::function<double(double)> curve;
  if (family.is_gaussian()) {
    curve = GaussianMseCurve(fit, source);
  } else {
    curve = GlmAmseCurve(family, fit, source);
  }
  std::vector<SweepRow> rows;
  for (double lambda : grid) {
    SweepRow row;
    row.lambda = lambda;
    try {
      row.beta_tilde = solve_dial_estimate(family, target, fit, source, lambda).beta_tilde;
      row.mse = curve(lambda);
      row.ok = true;
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace ise
