// core/include/sasv/calibration.hpp

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

// Joint affine calibration of CM and ASV scores.
//
// Raw scores are mapped to LLRs by
//   llr_asv = a1 * asv_raw + a0
//   llr_cm  = c1 * cm_raw  + c0
// and the four parameters are fitted together by prior-weighted logistic
// regression on the composed SASV LLR, over the classes BT (label +1) and
// BN, ST (label -1). Each class D contributes with weight P'(D) / N_D where
// P' are the effective priors, and the logit offset is
//   tau = log(P'(BT) / (P'(BN) + P'(ST))).
// Spoof-nontarget trials are not modelled: the prior p_sn must be zero.

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include "sasv/decision.hpp"
#include "sasv/trial.hpp"

namespace sasv {

struct CalibrationParams {
  double a0 = 0.0;  // ASV offset
  double a1 = 1.0;  // ASV scale
  double c0 = 0.0;  // CM offset
  double c1 = 1.0;  // CM scale

  static CalibrationParams identity() { return {}; }

  std::array<double, 4> as_array() const { return {a0, a1, c0, c1}; }
  static CalibrationParams from_array(const std::array<double, 4>& v) {
    return {v[0], v[1], v[2], v[3]};
  }

  /// Throws Error(kInvalidArgument) unless all four values are finite.
  void validate() const;

  friend bool operator==(const CalibrationParams&, const CalibrationParams&) = default;
};

struct ScorePair {
  double cm = 0.0;
  double asv = 0.0;
};

/// Raw score pairs grouped by class. Every class must be nonempty.
class CalibrationDataset {
 public:
  CalibrationDataset(std::vector<ScorePair> bt, std::vector<ScorePair> bn,
                     std::vector<ScorePair> st);

  /// Groups records by class. Spoof-nontarget records are skipped and counted
  /// in *skipped_sn when that pointer is non-null.
  static CalibrationDataset from_records(std::span<const TrialRecord> records,
                                         std::size_t* skipped_sn = nullptr);

  std::span<const ScorePair> bt() const { return bt_; }
  std::span<const ScorePair> bn() const { return bn_; }
  std::span<const ScorePair> st() const { return st_; }

  /// Trials of one of the three calibration classes; SN is rejected.
  std::span<const ScorePair> of(TrialClass c) const;

 private:
  std::vector<ScorePair> bt_;
  std::vector<ScorePair> bn_;
  std::vector<ScorePair> st_;
};

/// SASV LLR after applying the affine maps to the raw pair. `cond` must have
/// p_sn = 0, otherwise Error(kUnsupportedSpoofNontarget) is thrown. At the
/// identity parameters the result equals sasv_llr() bit for bit.
double corrected_sasv_llr(const LlrPair& raw, const CalibrationParams& params,
                          const ConditionalRejectPriors& cond);

/// Prior-weighted logistic loss and its analytic gradient.
///
/// Construction resolves the effective priors, the conditional reject priors
/// and the offset tau once; value() and value_and_gradient() then sweep the
/// data in a fixed order so results are reproducible bit for bit.
class CalibrationObjective {
 public:
  CalibrationObjective(const CalibrationDataset& data, const CostModel& costs,
                       const PriorModel& priors);

  double value(const CalibrationParams& params) const;

  /// Gradient order is (d/da0, d/da1, d/dc0, d/dc1).
  double value_and_gradient(const CalibrationParams& params,
                            std::array<double, 4>& grad) const;

  const EffectivePriors& effective() const { return effective_; }
  const ConditionalRejectPriors& conditional() const { return cond_; }
  double tau() const { return tau_; }

 private:
  const CalibrationDataset* data_;
  EffectivePriors effective_;
  ConditionalRejectPriors cond_;
  double tau_;
};

double weighted_logistic_objective(const CalibrationDataset& data,
                                   const CalibrationParams& params,
                                   const CostModel& costs, const PriorModel& priors);

std::array<double, 4> gradient(const CalibrationDataset& data, const CalibrationParams& params,
                               const CostModel& costs, const PriorModel& priors);

struct FitSettings {
  double gradient_tolerance = 1e-8;  // infinity norm
  int max_iterations = 1000;
  int lbfgs_rank = 20;
};

struct CalibrationResult {
  CalibrationParams params;
  double initial_objective = 0.0;
  double final_objective = 0.0;
  int iterations = 0;
  bool converged = false;
  double gradient_norm = 0.0;  // infinity norm at params
  /// Objective after each accepted optimizer step, starting with the value at
  /// the identity initialization.
  std::vector<double> trace;
};

/// Minimizes the weighted logistic objective from the identity parameters
/// using L-BFGS with a Wolfe line search.
///
/// Throws Error(kNonFiniteObjective) if the objective is not finite at the
/// start or end point. Running out of iterations is not an error here: the
/// result carries converged = false.
CalibrationResult fit_calibration(const CalibrationDataset& data, const CostModel& costs,
                                  const PriorModel& priors, const FitSettings& settings = {});

}  // namespace sasv
