#pragma once

#include <stdexcept>
#include <string>

namespace rigforge {

// Stable machine-readable error codes. The CLI maps ValidationError to exit 2
// and RuntimeFailure to exit 3.
enum class ErrorCode {
  AlignmentDegenerate,
  IncompleteCorrespondence,
  DimensionMismatch,
  InvalidTopology,
  BindingError,
  MapError,
  GraphError,
  InfeasiblePath,
  CompositionError,
  SkeletonMismatch,
  FormatError,
  SchemaError,
  IoError,
  TrainingFailure,
  ConfigError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Bad inputs: schema violations, missing files, dimension mismatches.
class ValidationError : public Error {
 public:
  using Error::Error;
};

// Inputs were well-formed but the operation cannot produce a result
// (infeasible Viterbi path, diverged training).
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace rigforge
