#pragma once

#include <stdexcept>
#include <string>

namespace robent {

enum class ErrorKind {
  kValidation,
  kSyntax,
  kInfeasible,
  kNumericalDegeneracy,
  kEmptyFeasible,
  kBisectionStall,
  kNotConverged,
  kTooLarge,
};

const char* ErrorKindName(ErrorKind kind);

// Single exception type for the library. `field` carries a dotted path for
// validation failures ("constraint.epsilon"), empty otherwise.
class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message, std::string field = {})
      : std::runtime_error(message), kind_(kind), field_(std::move(field)) {}

  ErrorKind kind() const noexcept { return kind_; }
  const std::string& field() const noexcept { return field_; }

 private:
  ErrorKind kind_;
  std::string field_;
};

}  // namespace robent
