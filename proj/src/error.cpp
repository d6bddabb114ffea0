#include "mdvrp/error.hpp"

namespace mdvrp {

std::string_view to_string(ErrorCode code) {
  switch (code) {
  case ErrorCode::NonSquareMatrix: return "NON_SQUARE_MATRIX";
  case ErrorCode::AsymmetricMatrix: return "ASYMMETRIC_MATRIX";
  case ErrorCode::NegativeDistance: return "NEGATIVE_DISTANCE";
  case ErrorCode::InvariantViolation: return "INVARIANT_VIOLATION";
  case ErrorCode::MalformedSyntax: return "MALFORMED_SYNTAX";
  case ErrorCode::SchemaViolation: return "SCHEMA_VIOLATION";
  case ErrorCode::InfeasibleSolution: return "INFEASIBLE_SOLUTION";
  case ErrorCode::EmptyPermutation: return "EMPTY_PERMUTATION";
  case ErrorCode::SameNode: return "SAME_NODE";
  case ErrorCode::EmptyFeasibleSet: return "EMPTY_FEASIBLE_SET";
  case ErrorCode::NonpositiveObjective: return "NONPOSITIVE_OBJECTIVE";
  case ErrorCode::TooLarge: return "TOO_LARGE";
  case ErrorCode::EmptyInput: return "EMPTY_INPUT";
  case ErrorCode::IoFailure: return "IO_FAILURE";
  case ErrorCode::MalformedEvent: return "MALFORMED_EVENT";
  case ErrorCode::MalformedLine: return "MALFORMED_LINE";
  case ErrorCode::UnknownKind: return "UNKNOWN_KIND";
  case ErrorCode::NotFound: return "NOT_FOUND";
  }
  return "UNKNOWN_ERROR";
}

} // namespace mdvrp
