#include "ise/sim_io.hpp"

#include <cmath>
#include <fstream>
#include <ostream>
#include <set>

#include <json.hpp>

#include "ise/error.hpp"
#include "ise/io.hpp"

namespace ise {

namespace {

using nlohmann::json;

[[noreturn]] void bad(const std::string& path, const std::string& what) {
  throw Error(ErrorKind::Validation, path + ": " + what);
}

std::size_t get_count(const json& v, const std::string& path) {
  if (!v.is_number_integer() && !v.is_number_unsigned()) bad(path, "expected a nonnegative integer");
  if (v.is_number_integer() && v.get<long long>() < 0) bad(path, "expected a nonnegative integer");
  return v.get<std::size_t>();
}

double get_number(const json& v, const std::string& path) {
  if (!v.is_number()) bad(path, "expected a number");
  return v.get<double>();
}

std::string get_string(const json& v, const std::string& path) {
  if (!v.is_string()) bad(path, "expected a string");
  return v.get<std::string>();
}

template <class F>
auto wrap(const std::string& path, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Validation && std::string(e.what()).rfind("config.", 0) == 0) throw;
    bad(path, e.what());
  }
}

}  // namespace

SimConfig parse_sim_config(std::string_view json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) bad("config", "expected a JSON object");
  if (!j.contains("setting")) bad("config.setting", "required field is missing");

  const Setting setting = wrap("config.setting", [&] { return parse_setting(get_string(j["setting"], "config.setting")); });
  const bool correlated = j.contains("correlated") && j["correlated"].is_boolean() && j["correlated"].get<bool>();
  SimConfig c = SimConfig::defaults(setting, correlated);

  static const std::set<std::string> known = {"setting",  "n1",         "n2",          "delta_case", "feature_info",
                                              "correlated", "misspec",  "replicates",  "master_seed",
                                              "lambda_bracket", "estimators", "threads", "level", "keep_records"};
  for (const auto& [key, value] : j.items()) {
    const std::string path = "config." + key;
    if (!known.count(key)) bad(path, "unknown field");
    if (key == "n1") c.n1 = get_count(value, path);
    else if (key == "n2") c.n2 = get_count(value, path);
    else if (key == "delta_case") c.delta_case = static_cast<int>(get_count(value, path));
    else if (key == "feature_info") c.feature_info = wrap(path, [&] { return parse_feature_info(get_string(value, path)); });
    else if (key == "correlated") {
      if (!value.is_boolean()) bad(path, "expected true or false");
      c.correlated = value.get<bool>();
    } else if (key == "misspec") c.misspec = wrap(path, [&] { return parse_misspec(get_string(value, path)); });
    else if (key == "replicates") c.replicates = get_count(value, path);
    else if (key == "master_seed") {
      if (!value.is_number_unsigned() && !(value.is_number_integer() && value.get<long long>() >= 0)) {
        bad(path, "expected a nonnegative 64-bit integer");
      }
      c.master_seed = value.get<std::uint64_t>();
    } else if (key == "lambda_bracket") {
      if (!value.is_array() || value.size() != 2) bad(path, "expected [lo, hi]");
      c.lambda_bracket.lo = get_number(value[0], path + "[0]");
      c.lambda_bracket.hi = get_number(value[1], path + "[1]");
    } else if (key == "estimators") {
      if (!value.is_array()) bad(path, "expected an array of strings");
      c.estimators.clear();
      for (std::size_t i = 0; i < value.size(); ++i) {
        c.estimators.push_back(get_string(value[i], path + "[" + std::to_string(i) + "]"));
      }
    } else if (key == "threads") c.threads = static_cast<unsigned>(get_count(value, path));
    else if (key == "level") c.level = get_number(value, path);
    else if (key == "keep_records") {
      if (!value.is_boolean()) bad(path, "expected true or false");
      c.keep_records = value.get<bool>();
    }
  }
  try {
    c.validate();
  } catch (const Error& e) {
    throw Error(ErrorKind::Validation, std::string("config.") + e.what());
  }
  return c;
}

std::string sim_config_to_json(const SimConfig& c) {
  json j;
  j["setting"] = std::string(to_string(c.setting));
  j["n1"] = c.n1;
  j["n2"] = c.n2;
  j["delta_case"] = c.delta_case;
  j["feature_info"] = std::string(to_string(c.feature_info));
  j["correlated"] = c.correlated;
  j["misspec"] = std::string(to_string(c.misspec));
  j["replicates"] = c.replicates;
  j["master_seed"] = c.master_seed;
  j["lambda_bracket"] = {c.lambda_bracket.lo, c.lambda_bracket.hi};
  j["estimators"] = c.resolved_estimators();
  j["level"] = c.level;
  j["keep_records"] = c.keep_records;
  return j.dump(2) + "\n";
}

void write_summary_csv(std::ostream& out, const SummaryTable& table, bool paper_scale) {
  const double emse_scale = paper_scale ? std::pow(10.0, table_exponent(table.config.setting)) : 1.0;
  const double mcse_scale = paper_scale ? 1e3 : 1.0;
  const double cover_scale = paper_scale ? 100.0 : 1.0;
  out << "estimator,used,failed,emse,mcse,coverage,lambda_mean,lambda_sd,width_violations\n";
  for (const EstimatorSummary& r : table.rows) {
    out << csv_field(r.estimator) << ',' << r.used << ',' << r.failed << ',' << format_double(r.emse * emse_scale)
        << ',' << format_double(r.mcse * mcse_scale) << ',' << format_double(r.coverage * cover_scale) << ','
        << format_double(r.lambda_mean) << ',' << format_double(r.lambda_sd) << ',' << r.width_violations << '\n';
  }
}

void write_replicates_csv(std::ostream& out, const SummaryTable& table) {
  out << "replicate,estimator,ok,sq_error,lambda,covered,error\n";
  for (const ReplicateRecord& r : table.records) {
    out << r.replicate << ',' << csv_field(r.estimator) << ',' << (r.ok ? 1 : 0) << ',' << format_double(r.sq_error)
        << ',' << format_double(r.lambda) << ',' << r.covered << ',' << csv_field(r.error) << '\n';
  }
}

void write_selection_csv(std::ostream& out, const SummaryTable& table) {
  out << "statistic,rate\n";
  for (const auto& [k, v] : table.selection) out << csv_field(k) << ',' << format_double(v) << '\n';
}

std::vector<std::filesystem::path> write_simulation(const SummaryTable& table, const std::filesystem::path& dir,
                                                    bool paper_scale) {
  std::filesystem::create_directories(dir);
  std::vector<std::filesystem::path> written;
  auto open = [&](const char* name) {
    written.push_back(dir / name);
    std::ofstream f(written.back(), std::ios::binary);
    if (!f) throw Error(ErrorKind::Validation, "cannot write '" + written.back().string() + "'");
    return f;
  };
  {
    auto f = open("summary.csv");
    write_summary_csv(f, table, paper_scale);
  }
  {
    auto f = open("replicates.csv");
    write_replicates_csv(f, table);
  }
  {
    auto f = open("config.json");
    f << sim_config_to_json(table.config);
  }
  if (!table.selection.empty()) {
    auto f = open("selection.csv");
    write_selection_csv(f, table);
  }
  return written;
}

}  // namespace ise
