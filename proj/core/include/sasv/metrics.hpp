// core/include/sasv/metrics.hpp

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

// Detection metrics over labeled score sets: error rates at a threshold,
// (min) a-DCF, normalized min/actual DCF, EER and Cllr.
//
// Thresholding convention: a trial is accepted iff score > threshold, so a
// score equal to the threshold is rejected. Sweeps use the canonical
// threshold set {-inf, midpoints between consecutive distinct sorted scores,
// +inf}, which realizes every distinct error-count configuration.

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "sasv/decision.hpp"

namespace sasv {

/// A subset of the four trial classes.
class ClassSet {
 public:
  constexpr ClassSet() = default;
  constexpr ClassSet(std::initializer_list<TrialClass> classes) {
    for (TrialClass c : classes) bits_ |= 1u << index_of(c);
  }
  constexpr bool contains(TrialClass c) const { return (bits_ >> index_of(c)) & 1u; }
  constexpr bool empty() const { return bits_ == 0; }
  constexpr bool intersects(ClassSet other) const { return (bits_ & other.bits_) != 0; }

  static constexpr ClassSet sasv_positive() { return {TrialClass::kBT}; }
  static constexpr ClassSet sasv_negative() {
    return {TrialClass::kBN, TrialClass::kST, TrialClass::kSN};
  }
  static constexpr ClassSet bona_fide() { return {TrialClass::kBT, TrialClass::kBN}; }
  static constexpr ClassSet spoof() { return {TrialClass::kST, TrialClass::kSN}; }

 private:
  unsigned bits_ = 0;
};

/// Parallel score and class lists.
class ScoredTrials {
 public:
  ScoredTrials() = default;
  /// Throws Error(kInvalidArgument) on length mismatch or a non-finite score.
  ScoredTrials(std::vector<double> scores, std::vector<TrialClass> classes);

  std::span<const double> scores() const { return scores_; }
  std::span<const TrialClass> classes() const { return classes_; }
  std::size_t size() const { return scores_.size(); }
  std::size_t count(TrialClass c) const { return counts_[index_of(c)]; }
  std::size_t count(ClassSet set) const;

  /// Collapses to the countermeasure view: BN becomes BT (bona fide) and SN
  /// becomes ST (spoof).
  ScoredTrials collapse_to_cm() const;

 private:
  std::vector<double> scores_;
  std::vector<TrialClass> classes_;
  std::array<std::size_t, 4> counts_{};
};

/// Costs and priors of an a-DCF operating point.
struct ADcfConfig {
  CostModel costs;
  PriorModel priors;

  /// Operating point seen by a bona-fide-vs-spoof countermeasure: bona fide
  /// mass p_bt + p_bn on the BT slot and spoof mass p_st + p_sn on the ST slot.
  /// Use together with ScoredTrials::collapse_to_cm().
  ADcfConfig collapse_to_cm() const;
};

/// False-accept costs of 10 and a miss cost of 1, with caller-supplied priors.
ADcfConfig asvspoof5_operating_point(const PriorModel& priors);

struct ErrorRates {
  double p_miss = 0.0;      // BT scored <= threshold
  double p_fa_imp = 0.0;    // BN scored > threshold
  double p_fa_spoof = 0.0;  // ST or SN scored > threshold
};

/// Throws Error(kEmptyClass) when there is no BT trial or no non-BT trial. A
/// false-accept group with no trials reports a rate of 0.
ErrorRates error_rates_at(const ScoredTrials& trials, double threshold);

/// Unnormalized a-DCF:
///   c_miss p_bt P_miss + c_fa_imp p_bn P_fa,imp + c_fa_spoof (p_st + p_sn) P_fa,spoof
double a_dcf(const ErrorRates& rates, const ADcfConfig& cfg);

/// Cost of the better default decision (accept all or reject all).
double default_a_dcf(const ADcfConfig& cfg);

struct ThresholdedCost {
  double value = 0.0;
  double threshold = 0.0;
};

/// Minimum a-DCF over the canonical threshold set and its first (lowest)
/// minimizing threshold. With normalize = true the value is divided by
/// default_a_dcf(cfg) (0 when that default is 0).
///
/// Throws Error(kEmptyClass) when BT is empty or when a class group carrying
/// positive weight in cfg has no trials.
ThresholdedCost min_a_dcf(const ScoredTrials& trials, const ADcfConfig& cfg,
                          bool normalize = false);

/// Normalized DCF at a fixed threshold.
double dcf_at(const ScoredTrials& trials, const ADcfConfig& cfg, double threshold);

/// Normalized minimum DCF.
double min_dcf(const ScoredTrials& trials, const ADcfConfig& cfg);

/// Normalized DCF at the Bayes threshold, with scores taken as SASV LLRs
/// composed with the conditional effective priors.
double act_dcf(const ScoredTrials& trials, const ADcfConfig& cfg);

/// Equal error rate between `positive` and `negative` classes; trials of
/// other classes are ignored. Throws Error(kEmptyClass) if either side has no
/// trials.
double eer(const ScoredTrials& trials, ClassSet positive, ClassSet negative);

/// Cost of log-likelihood ratio in bits; scores are natural-log LLRs.
double cllr(const ScoredTrials& trials, ClassSet positive, ClassSet negative);

/// (P_miss, P_fa) step points of the ROC over the canonical threshold set, in
/// ascending threshold order. Suitable for DET plotting elsewhere.
struct RocPoint {
  double threshold;
  double p_miss;
  double p_fa;
};
std::vector<RocPoint> roc_points(const ScoredTrials& trials, ClassSet positive,
                                 ClassSet negative);

struct MetricsReport {
  double eer = 0.0;
  double min_dcf = 0.0;
  double act_dcf = 0.0;
  double cllr = 0.0;  // bits
  double min_a_dcf = 0.0;
  double min_a_dcf_threshold = 0.0;
};

/// SASV evaluation: BT against BN, ST and SN.
MetricsReport evaluate_sasv(const ScoredTrials& trials, const ADcfConfig& cfg,
                            bool normalize_a_dcf = false);

/// Countermeasure evaluation: bona fide (BT, BN) against spoof (ST, SN).
MetricsReport evaluate_cm(const ScoredTrials& trials, const ADcfConfig& cfg,
                          bool normalize_a_dcf = false);

}  // namespace sasv
