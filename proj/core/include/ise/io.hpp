#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "ise/dataset.hpp"
#include "ise/glm.hpp"
#include "ise/shrink.hpp"

namespace ise {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

/// RFC 4180: quoted fields, doubled quotes, CRLF or LF line ends. A header row
/// is required and every record must have the header's width.
CsvTable parse_csv(std::istream& in);
CsvTable read_csv(const std::filesystem::path& path);

/// `response` names the outcome column; every other column is a feature. With
/// `intercept` an all-ones row named "(Intercept)" is placed first.
Dataset dataset_from_csv(const CsvTable& table, std::string_view response, bool intercept);
Dataset load_dataset(const std::filesystem::path& path, std::string_view response, bool intercept);

/// {"n1": int, "beta1_hat": [...], "gram": [[...]], "sigma2_hat": float}
SourceSummary parse_source_summary(std::string_view json_text);
SourceSummary load_source_summary(const std::filesystem::path& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Quotes a CSV field when needed.
std::string csv_field(std::string_view s);

std::string read_text(const std::filesystem::path& path);

}  // namespace ise
