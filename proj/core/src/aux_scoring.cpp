// core/src/aux_scoring.cpp

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

#include "sasv/aux_scoring.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <string>

#include "sasv/error.hpp"

namespace sasv {

namespace {

constexpr double kLlrClamp = 700.0;

double sorted_sum(std::vector<double>& terms) {
  std::sort(terms.begin(), terms.end());
  double sum = 0.0;
  for (double t : terms) sum += t;
  return sum;
}

constexpr std::pair<SchemeName, std::string_view> kSchemeTokens[] = {
    {SchemeName::kSpkBinspf, "spk-binspf"}, {SchemeName::kSpkMulspf, "spk-mulspf"},
    {SchemeName::kSpkOnespf, "spk-onespf"}, {SchemeName::kMulspf, "mulspf"},
    {SchemeName::kBinspf, "binspf"}};

}  // namespace

std::string_view scheme_token(SchemeName name) {
  for (const auto& [n, token] : kSchemeTokens) {
    if (n == name) return token;
  }
  return "?";
}

std::optional<SchemeName> scheme_from_token(std::string_view token) {
  for (const auto& [n, t] : kSchemeTokens) {
    if (t == token) return n;
  }
  return std::nullopt;
}

LabelScheme make_label_scheme(SchemeName name, std::size_t n_speakers,
                              std::size_t n_spoof_types) {
  const bool needs_speakers = name == SchemeName::kSpkBinspf ||
                              name == SchemeName::kSpkMulspf || name == SchemeName::kSpkOnespf;
  const bool needs_attacks = name == SchemeName::kSpkMulspf || name == SchemeName::kMulspf;
  if ((needs_speakers && n_speakers == 0) || (needs_attacks && n_spoof_types == 0)) {
    throw Error(ErrorCode::kInvalidArgument, "label scheme needs at least one speaker/attack");
  }

  LabelScheme s{name, 0, {}};
  switch (name) {
    case SchemeName::kSpkBinspf:
      for (std::size_t spk = 0; spk < n_speakers; ++spk) {
        s.group_of.push_back(Group::kBona);
        s.group_of.push_back(Group::kSpoof);
      }
      break;
    case SchemeName::kSpkMulspf:
      for (std::size_t spk = 0; spk < n_speakers; ++spk) {
        s.group_of.push_back(Group::kBona);
        s.group_of.insert(s.group_of.end(), n_spoof_types, Group::kSpoof);
      }
      break;
    case SchemeName::kSpkOnespf:
      s.group_of.assign(n_speakers, Group::kBona);
      s.group_of.push_back(Group::kSpoof);
      break;
    case SchemeName::kMulspf:
      s.group_of.push_back(Group::kBona);
      s.group_of.insert(s.group_of.end(), n_spoof_types, Group::kSpoof);
      break;
    case SchemeName::kBinspf:
      s.group_of = {Group::kBona, Group::kSpoof};
      break;
  }
  s.k = s.group_of.size();
  return s;
}

double aggregate_group_llr(std::span<const double> likelihoods, const LabelScheme& scheme,
                           std::span<const double> class_priors) {
  if (likelihoods.size() != scheme.k || scheme.group_of.size() != scheme.k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(scheme.k) + " likelihoods, got " +
                    std::to_string(likelihoods.size()));
  }
  if (!class_priors.empty() && class_priors.size() != scheme.k) {
    throw Error(ErrorCode::kDimensionMismatch,
                "expected " + std::to_string(scheme.k) + " class priors, got " +
                    std::to_string(class_priors.size()));
  }

  // Products are summed in sorted order so the result does not depend on the
  // order of classes within a group.
  std::vector<double> bona_terms, spoof_terms;
  double bona_prior = 0.0, spoof_prior = 0.0;
  bool any_positive = false;
  for (std::size_t k = 0; k < scheme.k; ++k) {
    const double lik = likelihoods[k];
    const double prior = class_priors.empty() ? 1.0 : class_priors[k];
    if (!std::isfinite(lik) || lik < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "likelihoods must be finite and >= 0");
    }
    if (!std::isfinite(prior) || prior < 0.0) {
      throw Error(ErrorCode::kInvalidArgument, "class priors must be finite and >= 0");
    }
    any_positive = any_positive || lik > 0.0;
    if (scheme.group_of[k] == Group::kBona) {
      bona_terms.push_back(prior * lik);
      bona_prior += prior;
    } else {
      spoof_terms.push_back(prior * lik);
      spoof_prior += prior;
    }
  }
  if (!any_positive) {
    throw Error(ErrorCode::kInvalidArgument, "at least one likelihood must be positive");
  }
  if (!(bona_prior > 0.0) || !(spoof_prior > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "each group needs positive total prior");
  }
  const double bona = sorted_sum(bona_terms);
  const double spoof = sorted_sum(spoof_terms);
  if (spoof == 0.0) return kLlrClamp;
  if (bona == 0.0) return -kLlrClamp;
  const double ratio = bona / spoof;
  const double llr = (std::isfinite(ratio) && ratio > 0.0) ? std::log(ratio)
                                                          : std::log(bona) - std::log(spoof);
  return std::clamp(llr, -kLlrClamp, kLlrClamp);
}

ScoreFile minmax_fuse(std::span<const ScoreFile> systems) {
  if (systems.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "fusion needs at least two systems");
  }

  std::map<std::string, double> sums;
  for (const auto& row : systems.front().rows) sums.emplace(row.trial_id, 0.0);
  if (sums.size() != systems.front().rows.size()) {
    throw Error(ErrorCode::kDuplicateTrialId, "system 1 repeats a trial id");
  }

  for (std::size_t s = 0; s < systems.size(); ++s) {
    const auto& rows = systems[s].rows;
    if (rows.size() != sums.size()) {
      throw Error(ErrorCode::kTrialMismatch,
                  "system " + std::to_string(s + 1) + " has a different trial count");
    }
    const auto [lo, hi] = std::minmax_element(
        rows.begin(), rows.end(),
        [](const ScoreRow& a, const ScoreRow& b) { return a.score < b.score; });
    const double min = lo->score;
    const double range = hi->score - min;
    if (!(range > 0.0)) {
      throw Error(ErrorCode::kConstantScores,
                  "system " + std::to_string(s + 1) + " has constant scores");
    }
    std::set<std::string_view> seen;
    for (const auto& row : rows) {
      const auto it = sums.find(row.trial_id);
      if (it == sums.end()) {
        throw Error(ErrorCode::kTrialMismatch, "system " + std::to_string(s + 1) +
                                                   " has unknown trial '" + row.trial_id + "'");
      }
      if (!seen.insert(row.trial_id).second) {
        throw Error(ErrorCode::kDuplicateTrialId, "system " + std::to_string(s + 1) +
                                                      " repeats trial '" + row.trial_id + "'");
      }
      it->second += (row.score - min) / range;
    }
  }

  ScoreFile fused;
  fused.rows.reserve(sums.size());
  const double n = static_cast<double>(systems.size());
  for (const auto& [id, sum] : sums) fused.rows.push_back({id, sum / n});
  return fused;
}

namespace {

void centered(const Embedding& v, const Embedding* mean, Embedding& out) {
  out = v;
  if (mean != nullptr) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= (*mean)[i];
  }
}

double norm(const Embedding& v) {
  double sq = 0.0;
  for (double x : v) sq += x * x;
  return std::sqrt(sq);
}

}  // namespace

double cosine_score(std::span<const Embedding> enroll, const Embedding& test,
                    const Embedding* mean) {
  if (enroll.empty()) throw Error(ErrorCode::kInvalidArgument, "no enrollment embeddings");
  const std::size_t dim = test.size();
  if (dim == 0) throw Error(ErrorCode::kDimensionMismatch, "empty test embedding");
  if (mean != nullptr && mean->size() != dim) {
    throw Error(ErrorCode::kDimensionMismatch, "mean embedding dimension differs");
  }
  for (const auto& e : enroll) {
    if (e.size() != dim) {
      throw Error(ErrorCode::kDimensionMismatch, "enrollment embedding dimension differs");
    }
  }
  auto require_finite = [](const Embedding& v) {
    for (double x : v) {
      if (!std::isfinite(x)) throw Error(ErrorCode::kInvalidArgument, "non-finite embedding");
    }
  };
  require_finite(test);
  if (mean != nullptr) require_finite(*mean);

  Embedding avg(dim, 0.0), tmp;
  for (const auto& e : enroll) {
    require_finite(e);
    centered(e, mean, tmp);
    for (std::size_t i = 0; i < dim; ++i) avg[i] += tmp[i];
  }
  for (double& x : avg) x /= static_cast<double>(enroll.size());

  Embedding t;
  centered(test, mean, t);
  const double na = norm(avg);
  const double nt = norm(t);
  if (!(na > 0.0) || !(nt > 0.0)) {
    throw Error(ErrorCode::kZeroNormAfterNormalization,
                "embedding has zero norm after mean subtraction");
  }
  double dot = 0.0;
  for (std::size_t i = 0; i < dim; ++i) dot += avg[i] * t[i];
  return std::clamp(dot / (na * nt), -1.0, 1.0);
}

}  // namespace sasv
