// core/include/sasv/error.hpp

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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace sasv {

enum class ErrorCode {
  kInvalidArgument,
  kZeroNormalizer,
  kDegenerateRejectMass,
  kUnsupportedSpoofNontarget,
  kEmptyClass,
  kNonFiniteObjective,
  kMaxIterations,
  kParseError,
  kDuplicateTrialId,
  kEmptyJoin,
  kConstantScores,
  kTrialMismatch,
  kDimensionMismatch,
  kZeroNormAfterNormalization,
  kIoError,
};

/// Stable, machine-parseable name of an error class, e.g. "EmptyClass".
std::string_view error_name(ErrorCode code);

/// Coarse category used by the command-line tool to choose an exit status.
enum class ErrorCategory { kUsage, kData, kNumerical };
ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(detail), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace sasv
