// core/include/sasv/score_io.hpp

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

// Tab-separated trial files.
//
//   score file:  <trial_id> TAB <score>
//   key file:    <trial_id> TAB <class token>
//   likelihoods: <trial_id> TAB <l_1> TAB ... TAB <l_K>
//
// UTF-8, LF line endings, exactly one TAB between fields. Lines starting
// with '#' are comments; blank lines are allowed only at the end of a file.
// Scores are written with 17 significant digits so they re-parse exactly.

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sasv/calibration.hpp"
#include "sasv/decision.hpp"
#include "sasv/trial.hpp"

namespace sasv {

struct ScoreRow {
  std::string trial_id;
  double score = 0.0;
};

struct ScoreFile {
  std::vector<ScoreRow> rows;
};

struct KeyRow {
  std::string trial_id;
  TrialClass trial_class = TrialClass::kBT;
};

struct TrialKeyFile {
  std::vector<KeyRow> rows;
};

struct LikelihoodRow {
  std::string trial_id;
  std::vector<double> values;
};

struct LikelihoodFile {
  std::vector<LikelihoodRow> rows;
};

/// Parse errors carry the 1-based line number in the message, formatted as
/// "<source>:<line>: <reason>".
ScoreFile parse_score_text(std::string_view text, std::string_view source = "<text>");
TrialKeyFile parse_key_text(std::string_view text, std::string_view source = "<text>");
LikelihoodFile parse_likelihood_text(std::string_view text, std::string_view source = "<text>");

ScoreFile parse_score_file(const std::filesystem::path& path);
TrialKeyFile parse_key_file(const std::filesystem::path& path);
LikelihoodFile parse_likelihood_file(const std::filesystem::path& path);

/// One value per non-comment line.
std::vector<double> parse_value_list_file(const std::filesystem::path& path);

/// "%.17g" rendering used for every score written by this library.
std::string format_score(double value);

void write_score_file(std::ostream& out, const ScoreFile& scores);
void write_score_file(const std::filesystem::path& path, const ScoreFile& scores);

/// Sorted by trial id, so output is independent of input row order.
ScoreFile sorted_by_id(ScoreFile scores);

inline constexpr double kScoreClamp = 700.0;

struct JoinedTrialSet {
  std::vector<TrialRecord> records;  // sorted by trial_id
  std::size_t missing_cm = 0;        // keyed trials without a CM score
  std::size_t missing_asv = 0;       // keyed trials without an ASV score
  std::size_t dropped = 0;           // keyed trials missing either score
  std::size_t clamped = 0;           // scores clamped into [-700, 700]
};

/// Inner join of key, CM and ASV files on trial id. Scores are clamped to
/// [-kScoreClamp, kScoreClamp]. Throws Error(kEmptyJoin) if nothing survives.
JoinedTrialSet join_trials(const TrialKeyFile& key, const ScoreFile& cm, const ScoreFile& asv);

struct ScoredJoin {
  std::vector<std::string> trial_ids;
  std::vector<double> scores;
  std::vector<TrialClass> classes;
  std::size_t dropped = 0;
};

/// Inner join of a key with a single score file, sorted by trial id.
ScoredJoin join_scores(const TrialKeyFile& key, const ScoreFile& scores);

struct PairedScores {
  std::vector<std::string> trial_ids;
  std::vector<double> cm;
  std::vector<double> asv;
  std::size_t dropped = 0;
  std::size_t clamped = 0;
};

/// Inner join of CM and ASV score files without a key, sorted by trial id,
/// with the same clamping as join_trials.
PairedScores pair_scores(const ScoreFile& cm, const ScoreFile& asv);

/// Calibration artifact: one key=value per line, '#' comments. Written keys
/// are a0, a1, c0, c1 followed by optimizer diagnostics and any `extra`
/// pairs; reading only requires the four parameters.
void write_calibration_artifact(std::ostream& out, const CalibrationResult& result,
                                const std::vector<std::pair<std::string, std::string>>& extra = {});
CalibrationParams parse_calibration_params_text(std::string_view text,
                                                std::string_view source = "<text>");
CalibrationParams parse_calibration_params_file(const std::filesystem::path& path);

}  // namespace sasv
