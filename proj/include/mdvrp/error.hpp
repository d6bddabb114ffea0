#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mdvrp {

enum class ErrorCode {
  // distances / instance
  NonSquareMatrix,
  AsymmetricMatrix,
  NegativeDistance,
  InvariantViolation,
  // parsing
  MalformedSyntax,
  SchemaViolation,
  // solving
  InfeasibleSolution,
  EmptyPermutation,
  SameNode,
  EmptyFeasibleSet,
  NonpositiveObjective,
  TooLarge,
  // bench
  EmptyInput,
  IoFailure,
  // tracking
  MalformedEvent,
  MalformedLine,
  UnknownKind,
  NotFound,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
  Error(ErrorCode code, const std::string &detail)
      : std::runtime_error(std::string(to_string(code)) + ": " + detail),
        code_(code), detail_(detail) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string &detail() const noexcept { return detail_; }

private:
  ErrorCode code_;
  std::string detail_;
};

} // namespace mdvrp
