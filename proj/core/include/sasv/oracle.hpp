// core/include/sasv/oracle.hpp

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

// Deliberately naive reference implementations used to cross-check the fast
// paths in metrics and decision. Every threshold is evaluated by a full scan
// over all trials, so these are O(N^2); keep N at or below ~1e4.

#include "sasv/decision.hpp"
#include "sasv/metrics.hpp"

namespace sasv::oracle {

/// Exhaustive minimum of the a-DCF over the canonical thresholds, first
/// minimizer in ascending threshold order.
ThresholdedCost min_a_dcf(const ScoredTrials& trials, const ADcfConfig& cfg,
                          bool normalize = false);

/// Normalized minimum DCF by exhaustive enumeration.
double min_dcf(const ScoredTrials& trials, const ADcfConfig& cfg);

/// EER from a brute-force ROC and linear interpolation at the first crossing.
double eer(const ScoredTrials& trials, ClassSet positive, ClassSet negative);

/// Class-conditional likelihoods P(X|BT), P(X|BN), P(X|ST), P(X|SN).
struct Likelihoods {
  double bt = 1.0;
  double bn = 1.0;
  double st = 1.0;
  double sn = 1.0;
};

/// Accept iff c_miss P(BT) P(X|BT) exceeds the cost-weighted sum of the
/// three reject-class terms (no effective priors, no logarithms).
bool bayes_decision(const Likelihoods& lik, const CostModel& costs, const PriorModel& priors);

}  // namespace sasv::oracle
