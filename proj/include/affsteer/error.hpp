#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace affsteer {

enum class ErrorCode {
  kInvalidArgument,
  kNotSymmetric,
  kNotPSD,
  kRankDeficient,
  kDegenerateConcept,
  kMissingConcept,
  kMissingLabel,
  kMissingTaskLabels,
  kDimensionMismatch,
  kLengthMismatch,
  kBadRank,
  kBadK,
  kZeroVector,
  kMalformedFile,
  kBadMagic,
  kVersionMismatch,
  kIo,
};

std::string_view error_name(ErrorCode code);

// Process exit code used by the CLI: 3 for data errors, 4 for numerical
// failures, 2 for bad arguments.
int exit_code_for(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& what);

}  // namespace affsteer
