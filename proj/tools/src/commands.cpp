#include "ise_cli/commands.hpp"

#include <cerrno>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ise/baselines.hpp"
#include "ise/dial_select.hpp"
#include "ise/error.hpp"
#include "ise/inference.hpp"
#include "ise/io.hpp"
#include "ise/multi_source.hpp"
#include "ise/shrink.hpp"
#include "ise/sim.hpp"
#include "ise/sim_io.hpp"

namespace ise::cli {

using nlohmann::json;

namespace {

json to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    out.push_back(std::move(row));
  }
  return out;
}

double parse_number(const std::string& text, const std::string& what) {
  const char* begin = text.c_str();
  char* end = nullptr;
  errno = 0;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0' || errno == ERANGE) {
    throw Error(ErrorKind::Validation, what + ": not a number: '" + text + "'");
  }
  return v;
}

Dataset load(const std::filesystem::path& path, const DataArgs& a, GlmFamily family) {
  Dataset data = load_dataset(path, a.response, a.intercept);
  data.validate(family);
  return data;
}

void check_summary_family(const std::optional<std::filesystem::path>& summary, GlmFamily family) {
  if (summary && !family.is_gaussian()) {
    throw Error(ErrorKind::PayloadMismatch, "a source summary only supports the gaussian family; pass --source with the "
                                            "source data instead");
  }
}

SourceSummary load_source(const std::optional<std::filesystem::path>& source,
                          const std::optional<std::filesystem::path>& summary, const DataArgs& a,
                          GlmFamily family, std::size_t p) {
  if (source.has_value() == summary.has_value()) {
    throw Error(ErrorKind::Validation, "exactly one of --source and --source-summary is required");
  }
  SourceSummary out = source ? SourceSummary::from_data(family, load(*source, a, family))
                             : load_source_summary(*summary);
  out.check(family, p);
  return out;
}

json interval_fields(const IntervalSet& ci) {
  return json{{"se", to_json(ci.se)}, {"ci_lower", to_json(ci.lower)}, {"ci_upper", to_json(ci.upper)}};
}

std::function<double(double)> mse_curve(GlmFamily family, const MleFit& fit, const SourceSummary& source) {
  if (family.is_gaussian()) return GaussianMseCurve(fit, source);
  return GlmAmseCurve(family, fit, source);
}

unsigned resolve_threads(const std::optional<unsigned>& flag, unsigned configured) {
  if (flag) return *flag;
  if (const char* env = std::getenv("ISE_THREADS"); env != nullptr && *env != '\0') {
    const double v = parse_number(env, "ISE_THREADS");
    if (v < 1 || v != static_cast<unsigned>(v)) {
      throw Error(ErrorKind::Validation, std::string("ISE_THREADS: expected a positive integer, got '") + env + "'");
    }
    return static_cast<unsigned>(v);
  }
  return configured;
}

void emit(const json& doc, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << doc.dump(2) << '\n';
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) throw Error(ErrorKind::Validation, "cannot open output file: " + out_path);
  f << doc.dump(2) << '\n';
}

json error_json(std::string_view kind, const std::string& message) {
  return json{{"error", {{"kind", kind}, {"message", message}}}};
}

}  // namespace

std::vector<double> parse_grid(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(item);
  if (parts.size() != 3) throw Error(ErrorKind::Validation, "--grid: expected lo:hi:k, got '" + spec + "'");
  const double lo = parse_number(parts[0], "--grid lo");
  const double hi = parse_number(parts[1], "--grid hi");
  const double kd = parse_number(parts[2], "--grid k");
  if (kd < 1 || kd != static_cast<double>(static_cast<long>(kd))) {
    throw Error(ErrorKind::Validation, "--grid: k must be a positive integer");
  }
  if (lo < 0 || hi < lo) throw Error(ErrorKind::Validation, "--grid: need 0 <= lo <= hi");
  const auto k = static_cast<std::size_t>(kd);
  std::vector<double> grid(k);
  for (std::size_t i = 0; i < k; ++i) {
    grid[i] = k == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(k - 1);
  }
  return grid;
}

json cmd_fit(const FitArgs& args) {
  const GlmFamily family = parse_family(args.data_args.family);
  const Dataset data = load(args.data, args.data_args, family);
  const MleFit fit = fit_mle(family, data);
  const IntervalSet ci = wald_intervals(family, fit, args.level);

  json doc{{"command", "fit"},
           {"family", family.name()},
           {"coefficients", data.feature_names},
           {"n", fit.n},
           {"p", fit.p},
           {"beta_hat", to_json(fit.beta_hat)},
           {"gamma_hat", fit.gamma_hat},
           {"level", args.level},
           {"iterations", fit.iterations},
           {"converged", fit.converged}};
  doc.update(interval_fields(ci));
  // Gaussian source-summary fields, so the output can be fed back as --source-summary.
  doc["n1"] = fit.n;
  doc["beta1_hat"] = to_json(fit.beta_hat);
  doc["gram"] = to_json(fit.gram);
  doc["sigma2_hat"] = fit.gamma_hat;
  return doc;
}

json cmd_shrink(const ShrinkArgs& args) {
  const GlmFamily family = parse_family(args.data_args.family);
  check_summary_family(args.source_summary, family);
  const Dataset target = load(args.target, args.data_args, family);
  const SourceSummary source =
      load_source(args.source, args.source_summary, args.data_args, family, target.p());
  const MleFit fit = fit_mle(family, target);
  const auto curve = mse_curve(family, fit, source);

  double lambda = 0.0;
  if (args.lambda == "auto") {
    lambda = select_lambda(curve, LambdaBracket{args.bracket_lo, args.bracket_hi}).lambda_tilde;
  } else {
    lambda = parse_number(args.lambda, "--lambda");
  }

  const DialEstimate est = solve_dial_estimate(family, target, fit, source, lambda);
  const IntervalSet ci = confidence_intervals(est, args.level);
  const IntervalSet wald = wald_intervals(family, fit, args.level);
  const double n2 = static_cast<double>(fit.n);
  const double mse_scale = family.is_gaussian() ? 1.0 : 1.0 / n2;

  json bound = nullptr;
  std::string bound_note;
  try {
    const Eigen::VectorXd delta = fit.beta_hat - source.beta1_hat;
    bound = family.is_gaussian()
                ? lambda_bound_gaussian(fit, source, delta, fit.gamma_hat, n2)
                : lambda_bound_glm(family, target, source, fit.beta_hat, n2, family.dispersion(fit.gamma_hat));
  } catch (const Error& e) {
    bound_note = e.what();
  }

  json doc{{"command", "shrink"},
           {"family", family.name()},
           {"coefficients", target.feature_names},
           {"n1", source.n1},
           {"n2", fit.n},
           {"p", fit.p},
           {"lambda", lambda},
           {"lambda_selection", args.lambda == "auto" ? "auto" : "fixed"},
           {"beta_tilde", to_json(est.beta_tilde)},
           {"level", args.level},
           {"estimated_mse", curve(lambda) * mse_scale},
           {"lambda_lower_bound", bound},
           {"iterations", est.iterations},
           {"converged", est.converged}};
  doc.update(interval_fields(ci));
  if (!family.is_gaussian()) doc["estimated_amse"] = curve(lambda);
  if (!bound_note.empty()) doc["lambda_lower_bound_note"] = bound_note;

  json mle{{"lambda", 0.0}, {"beta_hat", to_json(fit.beta_hat)}, {"estimated_mse", curve(0.0) * mse_scale}};
  mle.update(interval_fields(wald));
  doc["mle"] = std::move(mle);
  return doc;
}

void cmd_sweep(const SweepArgs& args, std::ostream& out) {
  const GlmFamily family = parse_family(args.data_args.family);
  check_summary_family(args.source_summary, family);
  const Dataset target = load(args.target, args.data_args, family);
  const SourceSummary source =
      load_source(args.source, args.source_summary, args.data_args, family, target.p());
  const std::vector<double> grid = parse_grid(args.grid);
  const std::vector<SweepRow> rows = lambda_sweep(family, target, source, grid);

  out << "lambda";
  for (const auto& name : target.feature_names) out << ',' << csv_field(name);
  out << (family.is_gaussian() ? ",estimated_mse" : ",estimated_amse") << ",error\n";
  const std::size_t p = target.p();
  for (const auto& row : rows) {
    out << format_double(row.lambda);
    for (std::size_t j = 0; j < p; ++j) {
      out << ',' << (row.ok ? format_double(row.beta_tilde(static_cast<Eigen::Index>(j))) : "");
    }
    out << ',' << (row.ok ? format_double(row.mse) : "") << ',' << csv_field(row.error) << '\n';
  }
}

json cmd_simulate(const SimulateArgs& args) {
  SimConfig config = parse_sim_config(read_text(args.config));
  if (args.seed) config.master_seed = *args.seed;
  config.threads = resolve_threads(args.threads, config.threads);
  config.validate();

  const SummaryTable table = run_setting(config);
  const auto files = write_simulation(table, args.out, args.paper_scale);

  json rows = json::array();
  for (const auto& r : table.rows) {
    rows.push_back(json{{"estimator", r.estimator},
                        {"used", r.used},
                        {"failed", r.failed},
                        {"emse", r.emse},
                        {"mcse", r.mcse},
                        {"coverage", r.coverage},
                        {"lambda_mean", r.lambda_mean},
                        {"lambda_sd", r.lambda_sd},
                        {"width_violations", r.width_violations}});
  }
  json paths = json::array();
  for (const auto& f : files) paths.push_back(f.string());
  return json{{"command", "simulate"},
              {"setting", to_string(config.setting)},
              {"master_seed", config.master_seed},
              {"replicates", config.replicates},
              {"rows", rows},
              {"files", paths},
              {"warnings", table.warnings}};
}

json cmd_select_source(const SelectSourceArgs& args) {
  if (args.sources.empty()) throw Error(ErrorKind::Validation, "at least one --source is required");
  const GlmFamily family = parse_family(args.data_args.family);
  const ConfigMode mode = parse_config_mode(args.mode);
  const Dataset target = load(args.target, args.data_args, family);
  std::vector<Dataset> sources;
  for (const auto& path : args.sources) sources.push_back(load(path, args.data_args, family));

  const SourceSelection sel = select_source_config(family, target, sources, mode);
  json rows = json::array();
  for (const auto& c : sel.report) {
    json members = json::array();
    for (auto m : c.members) members.push_back(m + 1);
    json row{{"id", c.id}, {"members", members}, {"ok", c.ok}};
    row["min_mse"] = c.ok ? json(c.min_mse) : json(nullptr);
    row["lambda_tilde"] = c.ok ? json(c.lambda_tilde) : json(nullptr);
    if (!c.error.empty()) row["error"] = c.error;
    rows.push_back(std::move(row));
  }
  return json{{"command", "select-source"},
              {"family", family.name()},
              {"mode", args.mode},
              {"rows", rows},
              {"winner", sel.report.at(sel.best).id},
              {"warning", sel.warning}};
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Information-driven shrinkage for generalized linear models"};
  app.name("ise");
  app.require_subcommand(1);

  std::string out_path;
  auto add_data_flags = [](CLI::App* cmd, DataArgs& a) {
    cmd->add_option("--response", a.response, "Response column name")->capture_default_str();
    cmd->add_flag("--intercept,!--no-intercept", a.intercept, "Prepend an all-ones row")->capture_default_str();
    cmd->add_option("--family", a.family, "gaussian or bernoulli")->capture_default_str();
  };

  FitArgs fit;
  auto* fit_cmd = app.add_subcommand("fit", "Maximum likelihood fit of one data set");
  fit_cmd->add_option("data", fit.data, "Data CSV")->required();
  add_data_flags(fit_cmd, fit.data_args);
  fit_cmd->add_option("--level", fit.level, "Confidence level")->capture_default_str();
  fit_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  ShrinkArgs shrink;
  auto* shrink_cmd = app.add_subcommand("shrink", "Shrink a target fit towards a source");
  shrink_cmd->add_option("target", shrink.target, "Target data CSV")->required();
  shrink_cmd->add_option("--source", shrink.source, "Source data CSV");
  shrink_cmd->add_option("--source-summary", shrink.source_summary, "Gaussian source summary JSON");
  add_data_flags(shrink_cmd, shrink.data_args);
  shrink_cmd->add_option("--lambda", shrink.lambda, "auto or a nonnegative number")->capture_default_str();
  shrink_cmd->add_option("--level", shrink.level, "Confidence level")->capture_default_str();
  shrink_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Estimates and estimated MSE over a lambda grid");
  sweep_cmd->add_option("target", sweep.target, "Target data CSV")->required();
  sweep_cmd->add_option("--source", sweep.source, "Source data CSV");
  sweep_cmd->add_option("--source-summary", sweep.source_summary, "Gaussian source summary JSON");
  add_data_flags(sweep_cmd, sweep.data_args);
  sweep_cmd->add_option("--grid", sweep.grid, "lo:hi:k")->capture_default_str();
  sweep_cmd->add_option("--out", out_path, "Write CSV here instead of stdout");

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Run a simulation setting");
  sim_cmd->add_option("--config", sim.config, "Simulation config JSON")->required();
  sim_cmd->add_option("--out", sim.out, "Output directory")->required();
  sim_cmd->add_option("--threads", sim.threads, "Worker threads (falls back to ISE_THREADS)");
  sim_cmd->add_option("--seed", sim.seed, "Override the config's master seed");
  sim_cmd->add_flag("--paper-scale", sim.paper_scale, "Scale summary columns by the reference table powers of ten");

  SelectSourceArgs sel;
  auto* sel_cmd = app.add_subcommand("select-source", "Choose among source data set configurations");
  sel_cmd->add_option("target", sel.target, "Target data CSV")->required();
  sel_cmd->add_option("--source", sel.sources, "Source data CSV (repeatable)")->required();
  add_data_flags(sel_cmd, sel.data_args);
  sel_cmd->add_option("--mode", sel.mode, "singles-and-full or all-subsets")->capture_default_str();
  sel_cmd->add_option("--out", out_path, "Write JSON here instead of stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << error_json("UsageError", e.what()).dump() << '\n';
    return 2;
  }

  try {
    if (fit_cmd->parsed()) {
      emit(cmd_fit(fit), out_path, out);
    } else if (shrink_cmd->parsed()) {
      emit(cmd_shrink(shrink), out_path, out);
    } else if (sweep_cmd->parsed()) {
      if (out_path.empty()) {
        cmd_sweep(sweep, out);
      } else {
        std::ofstream f(out_path, std::ios::binary);
        if (!f) throw Error(ErrorKind::Validation, "cannot open output file: " + out_path);
        cmd_sweep(sweep, f);
      }
    } else if (sim_cmd->parsed()) {
      out << cmd_simulate(sim).dump(2) << '\n';
    } else if (sel_cmd->parsed()) {
      emit(cmd_select_source(sel), out_path, out);
    }
  } catch (const Error& e) {
    err << error_json(to_string(e.kind()), e.what()).dump() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << error_json("InternalError", e.what()).dump() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace ise::cli
