// core/src/error.cpp

// Copyright 2026  sasv-calibration authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "sasv/error.hpp"

namespace sasv {

std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kZeroNormalizer: return "ZeroNormalizer";
    case ErrorCode::kDegenerateRejectMass: return "DegenerateRejectMass";
    case ErrorCode::kUnsupportedSpoofNontarget: return "UnsupportedSpoofNontarget";
    case ErrorCode::kEmptyClass: return "EmptyClass";
    case ErrorCode::kNonFiniteObjective: return "NonFiniteObjective";
    case ErrorCode::kMaxIterations: return "MaxIterations";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kDuplicateTrialId: return "DuplicateTrialId";
    case ErrorCode::kEmptyJoin: return "EmptyJoin";
    case ErrorCode::kConstantScores: return "ConstantScores";
    case ErrorCode::kTrialMismatch: return "TrialMismatch";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kZeroNormAfterNormalization: return "ZeroNormAfterNormalization";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return ErrorCategory::kUsage;
    case ErrorCode::kNonFiniteObjective:
    case ErrorCode::kMaxIterations:
    case ErrorCode::kZeroNormalizer:
    case ErrorCode::kDegenerateRejectMass:
      return ErrorCategory::kNumerical;
    default:
      return ErrorCategory::kData;
  }
}

}  // namespace sasv
