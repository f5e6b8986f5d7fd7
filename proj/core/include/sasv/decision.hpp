// core/include/sasv/decision.hpp

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

// Class, cost and prior algebra for spoofing-robust speaker verification,
// and composition of countermeasure (CM) and speaker-verification (ASV)
// log-likelihood ratios into a single accept-vs-reject LLR.
//
// The four joint classes are
//   BT  bona fide speech from the target speaker  (the accept hypothesis)
//   BN  bona fide speech from a non-target speaker
//   ST  spoofed speech imitating the target speaker
//   SN  spoofed speech imitating a non-target speaker
// and BN, ST, SN together form the reject hypothesis.
//
// All logarithms are natural.

#include <array>
#include <optional>
#include <string_view>

namespace sasv {

enum class TrialClass { kBT = 0, kBN = 1, kST = 2, kSN = 3 };

inline constexpr std::array<TrialClass, 4> kAllClasses = {
    TrialClass::kBT, TrialClass::kBN, TrialClass::kST, TrialClass::kSN};

constexpr std::size_t index_of(TrialClass c) { return static_cast<std::size_t>(c); }

/// Short display name: "BT", "BN", "ST" or "SN".
std::string_view short_name(TrialClass c);

/// Key-file token: target_bona, nontarget_bona, spoof_target, spoof_nontarget.
std::string_view key_token(TrialClass c);
std::optional<TrialClass> class_from_key_token(std::string_view token);

/// Decision costs. c_miss is the cost of rejecting a BT trial; the three
/// false-accept costs apply to BN, ST and SN trials respectively.
class CostModel {
 public:
  CostModel(double c_miss, double c_fa_imp, double c_fa_spoof, double c_fa_spoof_imp);

  static CostModel unit() { return {1.0, 1.0, 1.0, 1.0}; }

  double c_miss() const { return c_[0]; }
  double c_fa_imp() const { return c_[1]; }
  double c_fa_spoof() const { return c_[2]; }
  double c_fa_spoof_imp() const { return c_[3]; }

  /// Cost attached to a wrong decision on a trial of class c.
  double cost_of(TrialClass c) const { return c_[index_of(c)]; }

 private:
  std::array<double, 4> c_;
};

/// Joint class priors P(B,T), P(B,N), P(S,T), P(S,N).
class PriorModel {
 public:
  PriorModel(double p_bt, double p_bn, double p_st, double p_sn);

  double p_bt() const { return p_[0]; }
  double p_bn() const { return p_[1]; }
  double p_st() const { return p_[2]; }
  double p_sn() const { return p_[3]; }
  double prior_of(TrialClass c) const { return p_[index_of(c)]; }

 private:
  std::array<double, 4> p_;
};

/// Cost-weighted, renormalized priors. Deciding with unit costs and these
/// priors is equivalent to deciding with the original costs and priors.
/// Unlike PriorModel, ep_bt may be zero (c_miss = 0).
class EffectivePriors {
 public:
  EffectivePriors(double ep_bt, double ep_bn, double ep_st, double ep_sn);

  double ep_bt() const { return p_[0]; }
  double ep_bn() const { return p_[1]; }
  double ep_st() const { return p_[2]; }
  double ep_sn() const { return p_[3]; }
  double prior_of(TrialClass c) const { return p_[index_of(c)]; }

  /// ep_bn + ep_st + ep_sn.
  double reject_mass() const { return p_[1] + p_[2] + p_[3]; }

 private:
  std::array<double, 4> p_;
};

/// Priors of BN, ST, SN conditioned on the reject hypothesis.
class ConditionalRejectPriors {
 public:
  ConditionalRejectPriors(double p_bn, double p_st, double p_sn);

  double p_bn() const { return p_[0]; }
  double p_st() const { return p_[1]; }
  double p_sn() const { return p_[2]; }

 private:
  std::array<double, 3> p_;
};

/// Countermeasure and speaker-verification LLRs for one trial.
///   llr_cm  = log P(X|B,T) / P(X|S,T)
///   llr_asv = log P(X|B,T) / P(X|B,N)
class LlrPair {
 public:
  LlrPair(double llr_cm, double llr_asv);

  double llr_cm() const { return cm_; }
  double llr_asv() const { return asv_; }

 private:
  double cm_;
  double asv_;
};

/// Throws Error(kZeroNormalizer) when every supported class has zero cost.
EffectivePriors effective_priors(const CostModel& costs, const PriorModel& priors);

/// Throws Error(kDegenerateRejectMass) when BN, ST and SN all have zero mass.
ConditionalRejectPriors conditional_reject_priors(const PriorModel& priors);
ConditionalRejectPriors conditional_reject_priors(const EffectivePriors& priors);

/// General three-term composition
///   -log( p_bn e^-llr_asv + p_st e^-llr_cm + p_sn e^-llr_sn )
/// where llr_sn = log P(X|B,T) / P(X|S,N). Terms with zero prior are dropped.
double compose_llr(double llr_asv, double llr_cm, double llr_sn,
                   const ConditionalRejectPriors& cond);

/// SASV LLR from a CM/ASV pair. The spoof-nontarget likelihood ratio is
/// approximated as llr_cm + llr_asv, i.e. the spoof and speaker evidence are
/// treated as independent. With p_sn = 0 this term vanishes and the result is
/// exact.
double sasv_llr(const LlrPair& llrs, const ConditionalRejectPriors& cond);

/// Bayes threshold on a SASV LLR composed with the conditional *effective*
/// reject priors: log(reject_mass / ep_bt). Returns +inf when ep_bt = 0
/// (always reject) and -inf when the reject mass is zero (always accept).
double bayes_threshold(const EffectivePriors& ep);
double bayes_threshold(const CostModel& costs, const PriorModel& priors);

/// Accept iff llr > bayes_threshold(costs, priors).
bool bayes_accept(double sasv_llr, const CostModel& costs, const PriorModel& priors);

namespace detail {

/// -log(sum_i exp(terms[i])) with max subtraction. Terms equal to -inf are
/// skipped; at least one term must be finite.
double neg_log_sum_exp(const double* terms, std::size_t n);

/// log(1 + e^x) without overflow or cancellation.
double softplus(double x);

/// 1 / (1 + e^-x) without overflow.
double sigmoid(double x);

}  // namespace detail

}  // namespace sasv
