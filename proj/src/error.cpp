#include "egucb/error.hpp"

namespace egucb {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidInput: return "invalid-input";
    case ErrorCode::kSingularMatrix: return "singular-matrix";
    case ErrorCode::kDuplicateArm: return "duplicate-arm";
    case ErrorCode::kUnknownArm: return "unknown-arm";
    case ErrorCode::kInvalidReward: return "invalid-reward";
    case ErrorCode::kEmptyCandidates: return "empty-candidates";
    case ErrorCode::kInvalidRound: return "invalid-round";
    case ErrorCode::kInvalidParameter: return "invalid-parameter";
    case ErrorCode::kInvalidIndex: return "invalid-index";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kInvalidProbability: return "invalid-probability";
    case ErrorCode::kEmptyDataset: return "empty-dataset";
    case ErrorCode::kInvalidData: return "invalid-data";
    case ErrorCode::kUnknownKey: return "unknown-key";
    case ErrorCode::kInvalidValue: return "invalid-value";
    case ErrorCode::kInvalidPolicy: return "invalid-policy";
    case ErrorCode::kFileError: return "file-error";
    case ErrorCode::kParseError: return "parse-error";
  }
  return "unknown-error";
}

}  // namespace egucb
