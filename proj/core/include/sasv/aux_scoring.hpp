// core/include/sasv/aux_scoring.hpp

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

// Auxiliary score-level procedures: bona-fide/spoof LLRs from multi-class
// likelihoods, min-max score fusion, and cosine scoring of embeddings.

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "sasv/score_io.hpp"

namespace sasv {

enum class SchemeName { kSpkBinspf, kSpkMulspf, kSpkOnespf, kMulspf, kBinspf };

std::string_view scheme_token(SchemeName name);
std::optional<SchemeName> scheme_from_token(std::string_view token);

enum class Group { kBona, kSpoof };

/// Training-class layout of a label scheme. Class indices are:
///   spk-binspf  speaker * 2 + {0 bona, 1 spoof}                 K = 2S
///   spk-mulspf  speaker * (A+1) + {0 bona, 1..A attack}         K = S(A+1)
///   spk-onespf  0..S-1 bona speakers, S spoof                   K = S+1
///   mulspf      0 bona, 1..A attack                             K = A+1
///   binspf      0 bona, 1 spoof                                 K = 2
/// with S speakers and A spoofing attack types.
struct LabelScheme {
  SchemeName name;
  std::size_t k = 0;
  std::vector<Group> group_of;
};

LabelScheme make_label_scheme(SchemeName name, std::size_t n_speakers = 400,
                              std::size_t n_spoof_types = 8);

/// log( sum_bona prior*lik / sum_spoof prior*lik ), clamped to +/-700 when a
/// group sum is zero. Pass an empty `class_priors` for uniform priors.
///
/// Softmax posteriors are not likelihoods: divide them by the training class
/// priors first, or pass 1/prior_k as `class_priors`.
///
/// Throws Error(kDimensionMismatch) if sizes disagree with scheme.k, and
/// Error(kInvalidArgument) for negative or non-finite inputs, an all-zero
/// likelihood vector, or a group with zero total prior.
double aggregate_group_llr(std::span<const double> likelihoods, const LabelScheme& scheme,
                           std::span<const double> class_priors = {});

/// Per-system min-max normalization followed by the per-trial mean. Output is
/// sorted by trial id. Throws Error(kInvalidArgument) for fewer than two
/// systems, Error(kTrialMismatch) when trial-id sets differ and
/// Error(kConstantScores) when a system has max == min.
ScoreFile minmax_fuse(std::span<const ScoreFile> systems);

using Embedding = std::vector<double>;

/// Subtracts `mean` (when given) from every embedding, averages the
/// enrollment embeddings and returns the cosine with the test embedding.
///
/// Throws Error(kDimensionMismatch) and Error(kZeroNormAfterNormalization).
double cosine_score(std::span<const Embedding> enroll, const Embedding& test,
                    const Embedding* mean = nullptr);

}  // namespace sasv
