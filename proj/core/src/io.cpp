#include "ise/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

#include "ise/error.hpp"

namespace ise {

namespace {

double parse_number(const std::string& field, std::size_t row, const std::string& column) {
  std::string_view s(field);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Parse, "row " + std::to_string(row + 2) + ", column '" + column +
                                      "': '" + field + "' is not a finite number");
  }
  return v;
}

}  // namespace

CsvTable parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_started = false;
  std::size_t line = 1;
  char c;
  auto end_record = [&] {
    record.push_back(std::move(field));
    field.clear();
    if (!(record.size() == 1 && record.front().empty() && !field_started)) records.push_back(std::move(record));
    record.clear();
    field_started = false;
  };
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field += '"';
        } else {
          in_quotes = false;
        }
      } else {
        if (c == '\n') ++line;
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty()) {
          throw Error(ErrorKind::Parse, "line " + std::to_string(line) + ": quote inside an unquoted field");
        }
        in_quotes = true;
        field_started = true;
        break;
      case ',':
        record.push_back(std::move(field));
        field.clear();
        field_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      default:
        field += c;
        field_started = true;
    }
  }
  if (in_quotes) throw Error(ErrorKind::Parse, "unterminated quoted field at end of input");
  if (field_started || !field.empty() || !record.empty()) end_record();

  if (records.empty()) throw Error(ErrorKind::Parse, "CSV input has no header row");
  CsvTable table;
  table.header = std::move(records.front());
  for (std::size_t r = 1; r < records.size(); ++r) {
    if (records[r].size() != table.header.size()) {
      throw Error(ErrorKind::Parse, "record " + std::to_string(r + 1) + " has " + std::to_string(records[r].size()) +
                                        " fields, header has " + std::to_string(table.header.size()));
    }
    table.rows.push_back(std::move(records[r]));
  }
  return table;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Parse, "cannot open '" + path.string() + "'");
  return parse_csv(in);
}

Dataset dataset_from_csv(const CsvTable& table, std::string_view response, bool intercept) {
  std::size_t yi = table.header.size();
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (table.header[j] == response) {
      if (yi != table.header.size()) {
        throw Error(ErrorKind::Parse, "response column '" + std::string(response) + "' appears twice");
      }
      yi = j;
    }
  }
  if (yi == table.header.size()) {
    throw Error(ErrorKind::Parse, "response column '" + std::string(response) + "' not found in header");
  }
  const auto n = static_cast<Eigen::Index>(table.rows.size());
  const Eigen::Index k = static_cast<Eigen::Index>(table.header.size()) - 1;
  const Eigen::Index p = k + (intercept ? 1 : 0);
  Eigen::MatrixXd x(p, n);
  Eigen::VectorXd y(n);
  std::vector<std::string> names;
  if (intercept) names.emplace_back("(Intercept)");
  for (std::size_t j = 0; j < table.header.size(); ++j) {
    if (j != yi) names.push_back(table.header[j]);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto& row = table.rows[static_cast<std::size_t>(i)];
    Eigen::Index r = 0;
    if (intercept) x(r++, i) = 1.0;
    for (std::size_t j = 0; j < row.size(); ++j) {
      const double v = parse_number(row[j], static_cast<std::size_t>(i), table.header[j]);
      if (j == yi) {
        y[i] = v;
      } else {
        x(r++, i) = v;
      }
    }
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset load_dataset(const std::filesystem::path& path, std::string_view response, bool intercept) {
  return dataset_from_csv(read_csv(path), response, intercept);
}

SourceSummary parse_source_summary(std::string_view json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("source summary is not valid JSON: ") + e.what());
  }
  auto require = [&](const char* key) -> const nlohmann::json& {
    if (!j.is_object() || !j.contains(key)) {
      throw Error(ErrorKind::Parse, std::string("source summary: missing field '") + key + "'");
    }
    return j.at(key);
  };
  try {
    const auto n1 = require("n1").get<long long>();
    if (n1 <= 0) throw Error(ErrorKind::Validation, "source summary: n1 must be positive");
    const auto beta = require("beta1_hat").get<std::vector<double>>();
    const auto gram = require("gram").get<std::vector<std::vector<double>>>();
    const double sigma2 = require("sigma2_hat").get<double>();
    const auto p = static_cast<Eigen::Index>(beta.size());
    if (p == 0) throw Error(ErrorKind::Validation, "source summary: beta1_hat is empty");
    if (static_cast<Eigen::Index>(gram.size()) != p) {
      throw Error(ErrorKind::DimensionMismatch, "source summary: gram must be p x p");
    }
    Eigen::MatrixXd g(p, p);
    for (Eigen::Index r = 0; r < p; ++r) {
      if (static_cast<Eigen::Index>(gram[static_cast<std::size_t>(r)].size()) != p) {
        throw Error(ErrorKind::DimensionMismatch, "source summary: gram must be p x p");
      }
      for (Eigen::Index c = 0; c < p; ++c) g(r, c) = gram[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)];
    }
    return SourceSummary::from_gram(static_cast<std::size_t>(n1), Eigen::Map<const Eigen::VectorXd>(beta.data(), p),
                                    std::move(g), sigma2);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorKind::Parse, std::string("source summary: ") + e.what());
  }
}

SourceSummary load_source_summary(const std::filesystem::path& path) {
  return parse_source_summary(read_text(path));
}

std::string format_double(double v) {
  if (std::isnan(v)) return "NaN";
  if (std::isinf(v)) return v > 0 ? "Inf" : "-Inf";
  return fmt::format("{}", v);
}

std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace ise
