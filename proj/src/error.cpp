#include "affsteer/error.hpp"

namespace affsteer {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kNotSymmetric: return "NotSymmetric";
    case ErrorCode::kNotPSD: return "NotPSD";
    case ErrorCode::kRankDeficient: return "RankDeficient";
    case ErrorCode::kDegenerateConcept: return "DegenerateConcept";
    case ErrorCode::kMissingConcept: return "MissingConcept";
    case ErrorCode::kMissingLabel: return "MissingLabel";
    case ErrorCode::kMissingTaskLabels: return "MissingTaskLabels";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kBadRank: return "BadRank";
    case ErrorCode::kBadK: return "BadK";
    case ErrorCode::kZeroVector: return "ZeroVector";
    case ErrorCode::kMalformedFile: return "MalformedFile";
    case ErrorCode::kBadMagic: return "BadMagic";
    case ErrorCode::kVersionMismatch: return "VersionMismatch";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return 2;
    case ErrorCode::kNotSymmetric:
    case ErrorCode::kNotPSD:
    case ErrorCode::kRankDeficient:
    case ErrorCode::kDegenerateConcept:
      return 4;
    default:
      return 3;
  }
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(error_name(code)) + ": " + what), code_(code) {}

void fail(ErrorCode code, const std::string& what) { throw Error(code, what); }

}  // namespace affsteer
