// core/src/decision.cpp

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

#include "sasv/decision.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "sasv/error.hpp"

namespace sasv {

namespace {

constexpr double kSumTolerance = 1e-12;

void require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

bool is_probability(double p) { return std::isfinite(p) && p >= 0.0 && p <= 1.0; }

template <std::size_t N>
void require_distribution(const std::array<double, N>& p, const char* type) {
  double sum = 0.0;
  for (double v : p) {
    require(is_probability(v), std::string(type) + ": probabilities must lie in [0, 1]");
    sum += v;
  }
  require(std::abs(sum - 1.0) <= kSumTolerance,
          std::string(type) + ": probabilities must sum to 1");
}

}  // namespace

std::string_view short_name(TrialClass c) {
  switch (c) {
    case TrialClass::kBT: return "BT";
    case TrialClass::kBN: return "BN";
    case TrialClass::kST: return "ST";
    case TrialClass::kSN: return "SN";
  }
  return "?";
}

std::string_view key_token(TrialClass c) {
  switch (c) {
    case TrialClass::kBT: return "target_bona";
    case TrialClass::kBN: return "nontarget_bona";
    case TrialClass::kST: return "spoof_target";
    case TrialClass::kSN: return "spoof_nontarget";
  }
  return "?";
}

std::optional<TrialClass> class_from_key_token(std::string_view token) {
  for (TrialClass c : kAllClasses) {
    if (key_token(c) == token) return c;
  }
  return std::nullopt;
}

CostModel::CostModel(double c_miss, double c_fa_imp, double c_fa_spoof,
                     double c_fa_spoof_imp)
    : c_{c_miss, c_fa_imp, c_fa_spoof, c_fa_spoof_imp} {
  bool any_positive = false;
  for (double c : c_) {
    require(std::isfinite(c) && c >= 0.0, "CostModel: costs must be finite and >= 0");
    any_positive = any_positive || c > 0.0;
  }
  require(any_positive, "CostModel: at least one cost must be positive");
}

PriorModel::PriorModel(double p_bt, double p_bn, double p_st, double p_sn)
    : p_{p_bt, p_bn, p_st, p_sn} {
  require_distribution(p_, "PriorModel");
  require(p_bt > 0.0, "PriorModel: p_bt must be positive");
}

EffectivePriors::EffectivePriors(double ep_bt, double ep_bn, double ep_st, double ep_sn)
    : p_{ep_bt, ep_bn, ep_st, ep_sn} {
  require_distribution(p_, "EffectivePriors");
}

ConditionalRejectPriors::ConditionalRejectPriors(double p_bn, double p_st, double p_sn)
    : p_{p_bn, p_st, p_sn} {
  require_distribution(p_, "ConditionalRejectPriors");
}

LlrPair::LlrPair(double llr_cm, double llr_asv) : cm_(llr_cm), asv_(llr_asv) {
  require(std::isfinite(llr_cm) && std::isfinite(llr_asv), "LlrPair: LLRs must be finite");
}

EffectivePriors effective_priors(const CostModel& costs, const PriorModel& priors) {
  std::array<double, 4> weighted{};
  double z = 0.0;
  for (TrialClass c : kAllClasses) {
    weighted[index_of(c)] = priors.prior_of(c) * costs.cost_of(c);
    z += weighted[index_of(c)];
  }
  if (!(z > 0.0)) {
    throw Error(ErrorCode::kZeroNormalizer,
                "effective priors: every class with nonzero prior has zero cost");
  }
  return {weighted[0] / z, weighted[1] / z, weighted[2] / z, weighted[3] / z};
}

namespace {

ConditionalRejectPriors condition_on_reject(double bn, double st, double sn) {
  const double mass = bn + st + sn;
  if (!(mass > 0.0)) {
    throw Error(ErrorCode::kDegenerateRejectMass,
                "conditional reject priors: BN, ST and SN all have zero mass");
  }
  return {bn / mass, st / mass, sn / mass};
}

}  // namespace

ConditionalRejectPriors conditional_reject_priors(const PriorModel& priors) {
  return condition_on_reject(priors.p_bn(), priors.p_st(), priors.p_sn());
}

ConditionalRejectPriors conditional_reject_priors(const EffectivePriors& priors) {
  return condition_on_reject(priors.ep_bn(), priors.ep_st(), priors.ep_sn());
}

namespace detail {

double neg_log_sum_exp(const double* terms, std::size_t n) {
  double m = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) m = std::max(m, terms[i]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (terms[i] == -std::numeric_limits<double>::infinity()) continue;
    sum += std::exp(terms[i] - m);
  }
  return -(m + std::log(sum));
}

double softplus(double x) { return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x))); }

double sigmoid(double x) {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

}  // namespace detail

double compose_llr(double llr_asv, double llr_cm, double llr_sn,
                   const ConditionalRejectPriors& cond) {
  // log(0) = -inf drops the term inside neg_log_sum_exp.
  const double terms[3] = {std::log(cond.p_bn()) - llr_asv,
                           std::log(cond.p_st()) - llr_cm,
                           std::log(cond.p_sn()) - llr_sn};
  return detail::neg_log_sum_exp(terms, 3);
}

double sasv_llr(const LlrPair& llrs, const ConditionalRejectPriors& cond) {
  return compose_llr(llrs.llr_asv(), llrs.llr_cm(), llrs.llr_cm() + llrs.llr_asv(), cond);
}

double bayes_threshold(const EffectivePriors& ep) {
  const double reject = ep.reject_mass();
  if (ep.ep_bt() == 0.0) return std::numeric_limits<double>::infinity();
  if (reject == 0.0) return -std::numeric_limits<double>::infinity();
  return std::log(reject / ep.ep_bt());
}

double bayes_threshold(const CostModel& costs, const PriorModel& priors) {
  return bayes_threshold(effective_priors(costs, priors));
}

bool bayes_accept(double sasv_llr, const CostModel& costs, const PriorModel& priors) {
  return sasv_llr > bayes_threshold(costs, priors);
}

}  // namespace sasv
