#pragma once

#include <stdexcept>
#include <string>

namespace logcartier {

enum class ErrorKind {
  Dimension,
  ChartInvalid,
  NotInLattice,
  SearchGuard,
  Unsupported,
  Precondition,
  Overflow,
  Internal,
  Parse,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Chart validation failure; carries the offending field name.
class ChartError : public Error {
 public:
  ChartError(std::string field, const std::string& what)
      : Error(ErrorKind::ChartInvalid, field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

}  // namespace logcartier
