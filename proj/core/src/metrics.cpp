// core/src/metrics.cpp

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

#include "sasv/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <string>
#include <utility>

#include "sasv/error.hpp"

namespace sasv {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct ScoredClass {
  double score;
  TrialClass cls;
};

std::vector<ScoredClass> sorted_trials(const ScoredTrials& trials) {
  std::vector<ScoredClass> out;
  out.reserve(trials.size());
  for (std::size_t i = 0; i < trials.size(); ++i) {
    out.push_back({trials.scores()[i], trials.classes()[i]});
  }
  std::sort(out.begin(), out.end(), [](const ScoredClass& a, const ScoredClass& b) {
    if (a.score != b.score) return a.score < b.score;
    return index_of(a.cls) < index_of(b.cls);
  });
  return out;
}

// A threshold strictly between a < b. std::midpoint can round onto b when a
// and b are adjacent doubles; fall back to a, which still separates them
// under the reject-on-tie rule.
double separating_threshold(double a, double b) {
  const double mid = std::midpoint(a, b);
  return mid < b ? mid : a;
}

double safe_rate(std::size_t count, std::size_t total) {
  return total == 0 ? 0.0 : static_cast<double>(count) / static_cast<double>(total);
}

double normalized(double value, double default_cost) {
  return default_cost > 0.0 ? value / default_cost : 0.0;
}

struct SasvCounts {
  std::size_t n_bt = 0, n_bn = 0, n_spoof = 0;
};

SasvCounts sasv_counts(const ScoredTrials& trials) {
  return {trials.count(TrialClass::kBT), trials.count(TrialClass::kBN),
          trials.count(TrialClass::kST) + trials.count(TrialClass::kSN)};
}

void require_sasv_classes(const ScoredTrials& trials) {
  const auto n = sasv_counts(trials);
  if (n.n_bt == 0) throw Error(ErrorCode::kEmptyClass, "no target bona fide (BT) trials");
  if (n.n_bn + n.n_spoof == 0) {
    throw Error(ErrorCode::kEmptyClass, "no non-target or spoof trials");
  }
}

void require_weighted_classes(const ScoredTrials& trials, const ADcfConfig& cfg) {
  require_sasv_classes(trials);
  const auto n = sasv_counts(trials);
  const auto& c = cfg.costs;
  const auto& p = cfg.priors;
  if (n.n_bn == 0 && c.c_fa_imp() * p.p_bn() > 0.0) {
    throw Error(ErrorCode::kEmptyClass, "no non-target bona fide (BN) trials");
  }
  if (n.n_spoof == 0 && c.c_fa_spoof() * (p.p_st() + p.p_sn()) > 0.0) {
    throw Error(ErrorCode::kEmptyClass, "no spoof (ST/SN) trials");
  }
}

void require_binary_classes(const ScoredTrials& trials, ClassSet positive, ClassSet negative) {
  if (positive.intersects(negative)) {
    throw Error(ErrorCode::kInvalidArgument, "positive and negative class sets overlap");
  }
  if (trials.count(positive) == 0) throw Error(ErrorCode::kEmptyClass, "no positive trials");
  if (trials.count(negative) == 0) throw Error(ErrorCode::kEmptyClass, "no negative trials");
}

}  // namespace

ScoredTrials::ScoredTrials(std::vector<double> scores, std::vector<TrialClass> classes)
    : scores_(std::move(scores)), classes_(std::move(classes)) {
  if (scores_.size() != classes_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "scores and classes differ in length");
  }
  for (double s : scores_) {
    if (!std::isfinite(s)) throw Error(ErrorCode::kInvalidArgument, "non-finite score");
  }
  for (TrialClass c : classes_) ++counts_[index_of(c)];
}

std::size_t ScoredTrials::count(ClassSet set) const {
  std::size_t n = 0;
  for (TrialClass c : kAllClasses) {
    if (set.contains(c)) n += counts_[index_of(c)];
  }
  return n;
}

ScoredTrials ScoredTrials::collapse_to_cm() const {
  std::vector<TrialClass> collapsed(classes_.size());
  std::transform(classes_.begin(), classes_.end(), collapsed.begin(), [](TrialClass c) {
    return (c == TrialClass::kBT || c == TrialClass::kBN) ? TrialClass::kBT : TrialClass::kST;
  });
  return {scores_, std::move(collapsed)};
}

ADcfConfig ADcfConfig::collapse_to_cm() const {
  return {costs, PriorModel(priors.p_bt() + priors.p_bn(), 0.0,
                            priors.p_st() + priors.p_sn(), 0.0)};
}

ADcfConfig asvspoof5_operating_point(const PriorModel& priors) {
  return {CostModel(1.0, 10.0, 10.0, 10.0), priors};
}

ErrorRates error_rates_at(const ScoredTrials& trials, double threshold) {
  require_sasv_classes(trials);
  std::size_t miss = 0, fa_imp = 0, fa_spoof = 0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const double s = trials.scores()[i];
    switch (trials.classes()[i]) {
      case TrialClass::kBT: miss += s <= threshold; break;
      case TrialClass::kBN: fa_imp += s > threshold; break;
      case TrialClass::kST:
      case TrialClass::kSN: fa_spoof += s > threshold; break;
    }
  }
  const auto n = sasv_counts(trials);
  return {safe_rate(miss, n.n_bt), safe_rate(fa_imp, n.n_bn), safe_rate(fa_spoof, n.n_spoof)};
}

double a_dcf(const ErrorRates& rates, const ADcfConfig& cfg) {
  const auto& c = cfg.costs;
  const auto& p = cfg.priors;
  return c.c_miss() * p.p_bt() * rates.p_miss + c.c_fa_imp() * p.p_bn() * rates.p_fa_imp +
         c.c_fa_spoof() * (p.p_st() + p.p_sn()) * rates.p_fa_spoof;
}

double default_a_dcf(const ADcfConfig& cfg) {
  const double reject_all = a_dcf({1.0, 0.0, 0.0}, cfg);
  const double accept_all = a_dcf({0.0, 1.0, 1.0}, cfg);
  return std::min(reject_all, accept_all);
}

ThresholdedCost min_a_dcf(const ScoredTrials& trials, const ADcfConfig& cfg, bool normalize) {
  require_weighted_classes(trials, cfg);
  const auto n = sasv_counts(trials);
  const auto sorted = sorted_trials(trials);

  // Start at -inf: everything accepted.
  std::size_t miss = 0, fa_imp = n.n_bn, fa_spoof = n.n_spoof;
  auto cost_now = [&] {
    return a_dcf({safe_rate(miss, n.n_bt), safe_rate(fa_imp, n.n_bn),
                  safe_rate(fa_spoof, n.n_spoof)},
                 cfg);
  };

  ThresholdedCost best{cost_now(), -kInf};
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == value; ++i) {
      switch (sorted[i].cls) {
        case TrialClass::kBT: ++miss; break;
        case TrialClass::kBN: --fa_imp; break;
        default: --fa_spoof; break;
      }
    }
    const double threshold = i < sorted.size() ? separating_threshold(value, sorted[i].score) : kInf;
    const double cost = cost_now();
    if (cost < best.value) best = {cost, threshold};
  }
  if (normalize) best.value = normalized(best.value, default_a_dcf(cfg));
  return best;
}

double dcf_at(const ScoredTrials& trials, const ADcfConfig& cfg, double threshold) {
  require_weighted_classes(trials, cfg);
  return normalized(a_dcf(error_rates_at(trials, threshold), cfg), default_a_dcf(cfg));
}

double min_dcf(const ScoredTrials& trials, const ADcfConfig& cfg) {
  return min_a_dcf(trials, cfg, /*normalize=*/true).value;
}

double act_dcf(const ScoredTrials& trials, const ADcfConfig& cfg) {
  return dcf_at(trials, cfg, bayes_threshold(cfg.costs, cfg.priors));
}

std::vector<RocPoint> roc_points(const ScoredTrials& trials, ClassSet positive,
                                 ClassSet negative) {
  require_binary_classes(trials, positive, negative);
  const std::size_t n_pos = trials.count(positive);
  const std::size_t n_neg = trials.count(negative);

  std::vector<ScoredClass> sorted;
  for (const auto& t : sorted_trials(trials)) {
    if (positive.contains(t.cls) || negative.contains(t.cls)) sorted.push_back(t);
  }

  std::vector<RocPoint> points;
  points.reserve(sorted.size() + 1);
  std::size_t miss = 0, fa = n_neg;
  points.push_back({-kInf, 0.0, 1.0});
  std::size_t i = 0;
  while (i < sorted.size()) {
    const double value = sorted[i].score;
    for (; i < sorted.size() && sorted[i].score == value; ++i) {
      if (positive.contains(sorted[i].cls)) {
        ++miss;
      } else {
        --fa;
      }
    }
    const double threshold = i < sorted.size() ? separating_threshold(value, sorted[i].score) : kInf;
    points.push_back({threshold, safe_rate(miss, n_pos), safe_rate(fa, n_neg)});
  }
  return points;
}

double eer(const ScoredTrials& trials, ClassSet positive, ClassSet negative) {
  const auto points = roc_points(trials, positive, negative);
  // p_miss rises from 0 to 1 and p_fa falls from 1 to 0, so a crossing exists
  // after the first point.
  for (std::size_t i = 1; i < points.size(); ++i) {
    const double d1 = points[i].p_fa - points[i].p_miss;
    if (d1 > 0.0) continue;
    const double d0 = points[i - 1].p_fa - points[i - 1].p_miss;
    const double t = d0 / (d0 - d1);
    return points[i - 1].p_miss + t * (points[i].p_miss - points[i - 1].p_miss);
  }
  return 0.5;  // unreachable: the last point has p_miss = 1, p_fa = 0
}

double cllr(const ScoredTrials& trials, ClassSet positive, ClassSet negative) {
  require_binary_classes(trials, positive, negative);
  double pos_sum = 0.0, neg_sum = 0.0;
  for (std::size_t i = 0; i < trials.size(); ++i) {
    const double llr = trials.scores()[i];
    const TrialClass c = trials.classes()[i];
    if (positive.contains(c)) {
      pos_sum += detail::softplus(-llr);
    } else if (negative.contains(c)) {
      neg_sum += detail::softplus(llr);
    }
  }
  const double pos_mean = pos_sum / static_cast<double>(trials.count(positive));
  const double neg_mean = neg_sum / static_cast<double>(trials.count(negative));
  return 0.5 * (pos_mean + neg_mean) / std::numbers::ln2;
}

namespace {

MetricsReport evaluate(const ScoredTrials& trials, const ADcfConfig& cfg, ClassSet positive,
                       ClassSet negative, bool normalize_a_dcf) {
  MetricsReport r;
  r.eer = eer(trials, positive, negative);
  r.cllr = cllr(trials, positive, negative);
  r.min_dcf = min_dcf(trials, cfg);
  r.act_dcf = act_dcf(trials, cfg);
  const auto best = min_a_dcf(trials, cfg, normalize_a_dcf);
  r.min_a_dcf = best.value;
  r.min_a_dcf_threshold = best.threshold;
  return r;
}

}  // namespace

MetricsReport evaluate_sasv(const ScoredTrials& trials, const ADcfConfig& cfg,
                            bool normalize_a_dcf) {
  return evaluate(trials, cfg, ClassSet::sasv_positive(), ClassSet::sasv_negative(),
                  normalize_a_dcf);
}

MetricsReport evaluate_cm(const ScoredTrials& trials, const ADcfConfig& cfg,
                          bool normalize_a_dcf) {
  return evaluate(trials.collapse_to_cm(), cfg.collapse_to_cm(), ClassSet::bona_fide(),
                  ClassSet::spoof(), normalize_a_dcf);
}

}  // namespace sasv
