// core/src/oracle.cpp

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

#include "sasv/oracle.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <vector>

#include "sasv/error.hpp"

namespace sasv::oracle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> candidate_thresholds(const std::vector<double>& scores) {
  std::vector<double> distinct = scores;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> thresholds{-kInf};
  for (std::size_t i = 0; i + 1 < distinct.size(); ++i) {
    const double lo = distinct[i];
    const double hi = distinct[i + 1];
    double mid = std::midpoint(lo, hi);
    if (!(mid < hi)) mid = lo;
    thresholds.push_back(mid);
  }
  thresholds.push_back(kInf);
  return thresholds;
}

struct Counts {
  double bt = 0, bn = 0, spoof = 0;
};

// Raw a-DCF at one threshold by a full scan.
double scan_a_dcf(const ScoredTrials& trials, const ADcfConfig& cfg, double threshold,
                  const Counts& n) {
  std::size_t miss = 0, fa_imp = 0, fa_spoof = 0;
  for (std::size_t j = 0; j < trials.size(); ++j) {
    const double s = trials.scores()[j];
    const TrialClass c = trials.classes()[j];
    if (c == TrialClass::kBT && !(s > threshold)) ++miss;
    if (c == TrialClass::kBN && s > threshold) ++fa_imp;
    if ((c == TrialClass::kST || c == TrialClass::kSN) && s > threshold) ++fa_spoof;
  }
  const double p_miss = n.bt > 0 ? static_cast<double>(miss) / n.bt : 0.0;
  const double p_fa_imp = n.bn > 0 ? static_cast<double>(fa_imp) / n.bn : 0.0;
  const double p_fa_spoof = n.spoof > 0 ? static_cast<double>(fa_spoof) / n.spoof : 0.0;
  const auto& c = cfg.costs;
  const auto& p = cfg.priors;
  return c.c_miss() * p.p_bt() * p_miss + c.c_fa_imp() * p.p_bn() * p_fa_imp +
         c.c_fa_spoof() * (p.p_st() + p.p_sn()) * p_fa_spoof;
}

}  // namespace

ThresholdedCost min_a_dcf(const ScoredTrials& trials, const ADcfConfig& cfg, bool normalize) {
  Counts n;
  n.bt = static_cast<double>(trials.count(TrialClass::kBT));
  n.bn = static_cast<double>(trials.count(TrialClass::kBN));
  n.spoof = static_cast<double>(trials.count(TrialClass::kST) + trials.count(TrialClass::kSN));
  if (n.bt == 0 || n.bn + n.spoof == 0) {
    throw Error(ErrorCode::kEmptyClass, "oracle: need BT and non-BT trials");
  }

  const std::vector<double> scores(trials.scores().begin(), trials.scores().end());
  ThresholdedCost best{kInf, 0.0};
  for (double t : candidate_thresholds(scores)) {
    const double v = scan_a_dcf(trials, cfg, t, n);
    if (v < best.value) best = {v, t};
  }
  if (normalize) {
    const auto& c = cfg.costs;
    const auto& p = cfg.priors;
    const double reject_all = c.c_miss() * p.p_bt();
    const double accept_all = c.c_fa_imp() * p.p_bn() + c.c_fa_spoof() * (p.p_st() + p.p_sn());
    const double d = std::min(reject_all, accept_all);
    best.value = d > 0.0 ? best.value / d : 0.0;
  }
  return best;
}

double min_dcf(const ScoredTrials& trials, const ADcfConfig& cfg) {
  return oracle::min_a_dcf(trials, cfg, /*normalize=*/true).value;
}

double eer(const ScoredTrials& trials, ClassSet positive, ClassSet negative) {
  std::vector<double> scores;
  double n_pos = 0, n_neg = 0;
  for (std::size_t j = 0; j < trials.size(); ++j) {
    const TrialClass c = trials.classes()[j];
    if (positive.contains(c)) ++n_pos;
    if (negative.contains(c)) ++n_neg;
    if (positive.contains(c) || negative.contains(c)) scores.push_back(trials.scores()[j]);
  }
  if (n_pos == 0 || n_neg == 0) throw Error(ErrorCode::kEmptyClass, "oracle: empty side");

  double prev_miss = 0.0, prev_fa = 1.0;
  for (double t : candidate_thresholds(scores)) {
    std::size_t miss = 0, fa = 0;
    for (std::size_t j = 0; j < trials.size(); ++j) {
      const TrialClass c = trials.classes()[j];
      const double s = trials.scores()[j];
      if (positive.contains(c) && s <= t) ++miss;
      if (negative.contains(c) && s > t) ++fa;
    }
    const double p_miss = static_cast<double>(miss) / n_pos;
    const double p_fa = static_cast<double>(fa) / n_neg;
    if (p_fa - p_miss <= 0.0) {
      const double d0 = prev_fa - prev_miss;
      const double d1 = p_fa - p_miss;
      const double w = d0 / (d0 - d1);
      return prev_miss + w * (p_miss - prev_miss);
    }
    prev_miss = p_miss;
    prev_fa = p_fa;
  }
  return 0.5;
}

bool bayes_decision(const Likelihoods& lik, const CostModel& costs, const PriorModel& priors) {
  const double accept_side = lik.bt * priors.p_bt() * costs.c_miss();
  const double reject_side = lik.bn * priors.p_bn() * costs.c_fa_imp() +
                             lik.st * priors.p_st() * costs.c_fa_spoof() +
                             lik.sn * priors.p_sn() * costs.c_fa_spoof_imp();
  return accept_side > reject_side;
}

}  // namespace sasv::oracle
