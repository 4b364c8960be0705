#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace ise {

enum class ErrorKind {
  RankDeficient,
  NonConvergence,
  Separation,
  PayloadMismatch,
  ZeroDelta,
  DimensionMismatch,
  TooManySources,
  Validation,
  Parse,
};

std::string_view to_string(ErrorKind kind);

/// Every failure raised by the library carries a machine-readable kind so the
/// CLI can map it onto structured error output.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(message), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace ise
