#include "ise/dataset.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "ise/error.hpp"

namespace ise {

Dataset::Dataset(Eigen::MatrixXd design_in, Eigen::VectorXd response_in,
                 std::vector<std::string> names)
    : design(std::move(design_in)),
      response(std::move(response_in)),
      feature_names(std::move(names)) {
  if (design.cols() != response.size()) {
    throw Error(ErrorKind::DimensionMismatch,
                "design has " + std::to_string(design.cols()) + " units but response has " +
                    std::to_string(response.size()));
  }
  if (!feature_names.empty() && feature_names.size() != p()) {
    throw Error(ErrorKind::DimensionMismatch, "feature name count does not match design rows");
  }
}

void Dataset::validate(GlmFamily family) const {
  if (design.cols() != response.size()) {
    throw Error(ErrorKind::DimensionMismatch, "design/response unit count mismatch");
  }
  if (p() == 0) throw Error(ErrorKind::Validation, "dataset has no features");
  if (n() < p()) {
    throw Error(ErrorKind::RankDeficient, "dataset has fewer units (" + std::to_string(n()) +
                                              ") than features (" + std::to_string(p()) + ")");
  }
  if (!design.allFinite()) throw Error(ErrorKind::Validation, "design contains non-finite values");
  if (!response.allFinite()) throw Error(ErrorKind::Validation, "response contains non-finite values");
  if (!family.is_gaussian()) {
    for (Eigen::Index i = 0; i < response.size(); ++i) {
      const double y = response[i];
      if (y != 0.0 && y != 1.0) {
        throw Error(ErrorKind::Validation, "Bernoulli response must be 0 or 1 (unit " +
                                               std::to_string(i) + " has " + std::to_string(y) + ")");
      }
    }
  }
}

Dataset permute_units(const Dataset& data, const std::vector<std::size_t>& order) {
  if (order.size() != data.n()) {
    throw Error(ErrorKind::DimensionMismatch, "permutation length does not match unit count");
  }
  Eigen::MatrixXd design(data.design.rows(), data.design.cols());
  Eigen::VectorXd response(data.response.size());
  for (std::size_t i = 0; i < order.size(); ++i) {
    const auto src = static_cast<Eigen::Index>(order[i]);
    design.col(static_cast<Eigen::Index>(i)) = data.design.col(src);
    response[static_cast<Eigen::Index>(i)] = data.response[src];
  }
  return Dataset(std::move(design), std::move(response), data.feature_names);
}

}  // namespace ise
