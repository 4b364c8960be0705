#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ise/family.hpp"

namespace ise {

/// A design matrix stored p x n (column i holds the features of unit i) plus
/// the response vector. An intercept, when wanted, is an explicit all-ones row;
/// nothing is ever added implicitly.
struct Dataset {
  Eigen::MatrixXd design;
  Eigen::VectorXd response;
  std::vector<std::string> feature_names;

  Dataset() = default;
  Dataset(Eigen::MatrixXd design_in, Eigen::VectorXd response_in,
          std::vector<std::string> names = {});

  std::size_t n() const { return static_cast<std::size_t>(design.cols()); }
  std::size_t p() const { return static_cast<std::size_t>(design.rows()); }

  /// Shape checks, n >= p, finite values, and {0,1} responses for Bernoulli.
  /// Rank is checked where a factorisation happens.
  void validate(GlmFamily family) const;
};

/// Returns a copy with units (columns) permuted by `order`.
Dataset permute_units(const Dataset& data, const std::vector<std::size_t>& order);

}  // namespace ise
