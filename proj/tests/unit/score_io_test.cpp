// tests/unit/score_io_test.cpp

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

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "sasv/score_io.hpp"
#include "test_support.hpp"

namespace sasv {
namespace {

using testing::expect_error;

std::string error_message(ErrorCode code, const std::function<void()>& fn) {
  try {
    fn();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
    return e.what();
  }
  ADD_FAILURE() << "expected " << error_name(code);
  return {};
}

TEST(ParseScores, SingleRow) {
  const auto f = parse_score_text("t1\t0.5\n");
  ASSERT_EQ(f.rows.size(), 1u);
  EXPECT_EQ(f.rows[0].trial_id, "t1");
  EXPECT_EQ(f.rows[0].score, 0.5);
}

TEST(ParseScores, CommentsSignsAndTrailingBlankLines) {
  const auto f = parse_score_text("# header\nb\t+1e3\na\t-2.25\n\n\n");
  ASSERT_EQ(f.rows.size(), 2u);
  EXPECT_EQ(f.rows[0].score, 1000.0);
  EXPECT_EQ(f.rows[1].score, -2.25);
  // No trailing newline.
  EXPECT_EQ(parse_score_text("x\t1").rows.size(), 1u);
}

TEST(ParseScores, Duplicate) {
  expect_error(ErrorCode::kDuplicateTrialId, [] { parse_score_text("t1\t0.5\nt1\t0.6\n"); });
}

TEST(ParseScores, MalformedLinesReportLineNumber) {
  const std::string msg = error_message(ErrorCode::kParseError, [] {
    parse_score_text("t1\tabc\n", "scores.tsv");
  });
  EXPECT_NE(msg.find("scores.tsv:1:"), std::string::npos) << msg;

  const std::string third = error_message(ErrorCode::kParseError, [] {
    parse_score_text("# c\nt1\t1\nt2 2\n");
  });
  EXPECT_NE(third.find(":3:"), std::string::npos) << third;

  for (const char* bad : {"t1\t1\t2\n", "t1\t\n", "\t1\n", "t1\tnan\n", "t1\tinf\n",
                          "t1\t1e999\n", "t1\t1.0x\n", "a\t1\n\nb\t2\n", "t1\t1\r\n"}) {
    expect_error(ErrorCode::kParseError, [&] { parse_score_text(bad); });
  }
}

TEST(ParseKey, Tokens) {
  const auto k = parse_key_text(
      "a\ttarget_bona\nb\tnontarget_bona\nc\tspoof_target\nd\tspoof_nontarget\n");
  ASSERT_EQ(k.rows.size(), 4u);
  EXPECT_EQ(k.rows[0].trial_class, TrialClass::kBT);
  EXPECT_EQ(k.rows[1].trial_class, TrialClass::kBN);
  EXPECT_EQ(k.rows[2].trial_class, TrialClass::kST);
  EXPECT_EQ(k.rows[3].trial_class, TrialClass::kSN);
  expect_error(ErrorCode::kParseError, [] { parse_key_text("a\tbona\n"); });
  expect_error(ErrorCode::kDuplicateTrialId, [] {
    parse_key_text("a\ttarget_bona\na\tspoof_target\n");
  });
}

TEST(ParseLikelihoods, Rows) {
  const auto l = parse_likelihood_text("u1\t0.8\t0.2\nu2\t0\t1\n");
  ASSERT_EQ(l.rows.size(), 2u);
  EXPECT_EQ(l.rows[0].values, (std::vector<double>{0.8, 0.2}));
  expect_error(ErrorCode::kParseError, [] { parse_likelihood_text("u1\n"); });
  expect_error(ErrorCode::kParseError, [] { parse_likelihood_text("u1\t1\t2\nu2\t1\n"); });
}

TEST(ParseFile, MissingFileIsIoError) {
  expect_error(ErrorCode::kIoError, [] { parse_score_file("/nonexistent/scores.tsv"); });
}

TEST(FormatScore, RoundTripsExactly) {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<std::uint64_t> bits;
  ScoreFile f;
  for (int i = 0; i < 5000; ++i) {
    double v;
    do {
      const std::uint64_t b = bits(rng);
      std::memcpy(&v, &b, sizeof v);
    } while (!std::isfinite(v));
    f.rows.push_back({"t" + std::to_string(i), v});
  }
  f.rows.push_back({"min", std::numeric_limits<double>::denorm_min()});
  f.rows.push_back({"negzero", -0.0});
  std::ostringstream out;
  write_score_file(out, f);
  const auto back = parse_score_text(out.str());
  ASSERT_EQ(back.rows.size(), f.rows.size());
  for (std::size_t i = 0; i < f.rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].trial_id, f.rows[i].trial_id);
    EXPECT_EQ(back.rows[i].score, f.rows[i].score);
    EXPECT_EQ(std::signbit(back.rows[i].score), std::signbit(f.rows[i].score));
  }
}

TrialKeyFile key_of(std::initializer_list<std::pair<const char*, TrialClass>> rows) {
  TrialKeyFile k;
  for (auto [id, c] : rows) k.rows.push_back({id, c});
  return k;
}

ScoreFile scores_of(std::initializer_list<std::pair<const char*, double>> rows) {
  ScoreFile f;
  for (auto [id, s] : rows) f.rows.push_back({id, s});
  return f;
}

TEST(Join, SingleRecord) {
  const auto j = join_trials(key_of({{"t1", TrialClass::kBT}}), scores_of({{"t1", 1.0}}),
                             scores_of({{"t1", 2.0}}));
  ASSERT_EQ(j.records.size(), 1u);
  EXPECT_EQ(j.records[0].trial_id, "t1");
  EXPECT_EQ(j.records[0].trial_class, TrialClass::kBT);
  EXPECT_EQ(j.records[0].cm_raw, 1.0);
  EXPECT_EQ(j.records[0].asv_raw, 2.0);
  EXPECT_EQ(j.dropped, 0u);
}

TEST(Join, ReportsDrops) {
  const auto j = join_trials(key_of({{"t1", TrialClass::kBT}, {"t2", TrialClass::kBN}}),
                             scores_of({{"t1", 1.0}}), scores_of({{"t1", 2.0}, {"t2", 3.0}}));
  EXPECT_EQ(j.records.size(), 1u);
  EXPECT_EQ(j.dropped, 1u);
  EXPECT_EQ(j.missing_cm, 1u);
  EXPECT_EQ(j.missing_asv, 0u);
}

TEST(Join, DisjointIsEmptyJoin) {
  expect_error(ErrorCode::kEmptyJoin, [] {
    join_trials(key_of({{"t1", TrialClass::kBT}}), scores_of({{"t2", 1.0}}),
                scores_of({{"t2", 1.0}}));
  });
}

TEST(Join, ClampsExtremeScores) {
  const auto j = join_trials(key_of({{"t1", TrialClass::kBT}}), scores_of({{"t1", 1e6}}),
                             scores_of({{"t1", -900.0}}));
  EXPECT_EQ(j.records[0].cm_raw, kScoreClamp);
  EXPECT_EQ(j.records[0].asv_raw, -kScoreClamp);
  EXPECT_EQ(j.clamped, 2u);
}

TEST(Join, OrderIndependent) {
  std::mt19937_64 rng(22);
  std::normal_distribution<double> n;
  TrialKeyFile key;
  ScoreFile cm, asv;
  for (int i = 0; i < 200; ++i) {
    const std::string id = "trial" + std::to_string(i);
    key.rows.push_back({id, static_cast<TrialClass>(i % 4)});
    if (i % 7 != 0) cm.rows.push_back({id, n(rng)});
    if (i % 11 != 0) asv.rows.push_back({id, n(rng)});
  }
  const auto ref = join_trials(key, cm, asv);
  for (int r = 0; r < 5; ++r) {
    std::shuffle(key.rows.begin(), key.rows.end(), rng);
    std::shuffle(cm.rows.begin(), cm.rows.end(), rng);
    std::shuffle(asv.rows.begin(), asv.rows.end(), rng);
    const auto j = join_trials(key, cm, asv);
    ASSERT_EQ(j.records.size(), ref.records.size());
    EXPECT_EQ(j.dropped, ref.dropped);
    for (std::size_t i = 0; i < j.records.size(); ++i) {
      EXPECT_EQ(j.records[i].trial_id, ref.records[i].trial_id);
      EXPECT_EQ(j.records[i].cm_raw, ref.records[i].cm_raw);
      EXPECT_EQ(j.records[i].asv_raw, ref.records[i].asv_raw);
    }
  }
}

TEST(JoinScores, InnerJoinSortedById) {
  const auto j = join_scores(key_of({{"b", TrialClass::kBN}, {"a", TrialClass::kBT}}),
                             scores_of({{"a", 1.0}, {"b", 2.0}, {"c", 3.0}}));
  EXPECT_EQ(j.trial_ids, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(j.scores, (std::vector<double>{1.0, 2.0}));
  expect_error(ErrorCode::kEmptyJoin, [] {
    join_scores(key_of({{"x", TrialClass::kBT}}), scores_of({{"y", 1.0}}));
  });
}

TEST(PairScores, Drops) {
  const auto p = pair_scores(scores_of({{"b", 1.0}, {"a", 2.0}}), scores_of({{"a", 3.0}}));
  EXPECT_EQ(p.trial_ids, (std::vector<std::string>{"a"}));
  EXPECT_EQ(p.cm, (std::vector<double>{2.0}));
  EXPECT_EQ(p.asv, (std::vector<double>{3.0}));
  EXPECT_EQ(p.dropped, 1u);
}

TEST(CalibrationArtifact, RoundTrip) {
  CalibrationResult r;
  r.params = {0.1, 2.0 / 3.0, -1.5, 0.3};
  r.initial_objective = 0.7;
  r.final_objective = 0.2;
  r.iterations = 12;
  r.converged = true;
  std::ostringstream out;
  write_calibration_artifact(out, r, {{"note", "x"}});
  const std::string text = out.str();
  EXPECT_NE(text.find("converged=true"), std::string::npos) << text;
  EXPECT_NE(text.find("note=x"), std::string::npos);
  EXPECT_EQ(parse_calibration_params_text(text), r.params);
}

TEST(CalibrationArtifact, RequiresAllParameters) {
  expect_error(ErrorCode::kParseError, [] { parse_calibration_params_text("a0=0\na1=1\nc0=0\n"); });
  expect_error(ErrorCode::kParseError, [] {
    parse_calibration_params_text("a0=0\na1=x\nc0=0\nc1=1\n");
  });
  EXPECT_EQ(parse_calibration_params_text("# c\nc1=1\nc0=0\na1=1\na0=0\n"),
            CalibrationParams::identity());
}

}  // namespace
}  // namespace sasv
