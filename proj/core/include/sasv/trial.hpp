// core/include/sasv/trial.hpp

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

#include <string>

#include "sasv/decision.hpp"

namespace sasv {

/// One SASV trial with its raw (uncalibrated) CM and ASV scores.
struct TrialRecord {
  std::string trial_id;
  TrialClass trial_class = TrialClass::kBT;
  double cm_raw = 0.0;
  double asv_raw = 0.0;
};

}  // namespace sasv
