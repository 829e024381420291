#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace hintloop {

// Hard failures raised across the library. Generated-hint validation is the
// one exception path that is *data* rather than an exception: see
// HintValidationError in hint.hpp, which feeds the homogeneous-rate metric.
enum class ErrorCode {
  MalformedDocument,
  MissingField,
  UnsupportedShape,
  NotAJoinTree,
  EmptyInput,
  DimensionMismatch,
  ZeroVector,
  MissingBaseline,
  UnknownQuery,
  AdapterUnavailable,
  SpaceTooLarge,
  NonPositiveRatio,
  ZeroPolicyProbability,
  UnknownHint,
  SupportMismatch,
  NonFiniteUpdate,
  ZeroBaseline,
  SelfReference,
  EmptyDataset,
  SchemaViolation,
  MismatchedQuerySets,
  ZeroBaselineTotal,
  InfeasiblePartition,
  RemoteUnavailable,
  RemoteTimeout,
  InvalidConfig,
  Io,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::MalformedDocument: return "MalformedDocument";
    case ErrorCode::MissingField: return "MissingField";
    case ErrorCode::UnsupportedShape: return "UnsupportedShape";
    case ErrorCode::NotAJoinTree: return "NotAJoinTree";
    case ErrorCode::EmptyInput: return "EmptyInput";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::ZeroVector: return "ZeroVector";
    case ErrorCode::MissingBaseline: return "MissingBaseline";
    case ErrorCode::UnknownQuery: return "UnknownQuery";
    case ErrorCode::AdapterUnavailable: return "AdapterUnavailable";
    case ErrorCode::SpaceTooLarge: return "SpaceTooLarge";
    case ErrorCode::NonPositiveRatio: return "NonPositiveRatio";
    case ErrorCode::ZeroPolicyProbability: return "ZeroPolicyProbability";
    case ErrorCode::UnknownHint: return "UnknownHint";
    case ErrorCode::SupportMismatch: return "SupportMismatch";
    case ErrorCode::NonFiniteUpdate: return "NonFiniteUpdate";
    case ErrorCode::ZeroBaseline: return "ZeroBaseline";
    case ErrorCode::SelfReference: return "SelfReference";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::MismatchedQuerySets: return "MismatchedQuerySets";
    case ErrorCode::ZeroBaselineTotal: return "ZeroBaselineTotal";
    case ErrorCode::InfeasiblePartition: return "InfeasiblePartition";
    case ErrorCode::RemoteUnavailable: return "RemoteUnavailable";
    case ErrorCode::RemoteTimeout: return "RemoteTimeout";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::Io: return "Io";
  }
  return "Error";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace hintloop
