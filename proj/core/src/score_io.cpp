// core/src/score_io.cpp

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

#include "sasv/score_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

#include "sasv/error.hpp"

namespace sasv {

namespace {

struct Line {
  std::size_t number;
  std::string_view text;
};

[[noreturn]] void parse_fail(std::string_view source, std::size_t line, const std::string& why) {
  std::ostringstream os;
  os << source << ":" << line << ": " << why;
  throw Error(ErrorCode::kParseError, os.str());
}

// Splits on LF, drops comment lines, and rejects blank lines that are
// followed by content.
std::vector<Line> content_lines(std::string_view text, std::string_view source) {
  std::vector<Line> lines;
  std::size_t pending_blank = 0;
  std::size_t number = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t end = std::min(text.find('\n', pos), text.size());
    const std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++number;
    if (line.empty()) {
      if (pending_blank == 0) pending_blank = number;
      continue;
    }
    if (line.front() == '#') continue;
    if (pending_blank != 0) parse_fail(source, pending_blank, "blank line before end of file");
    lines.push_back({number, line});
  }
  return lines;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t pos = 0;
  while (true) {
    const std::size_t tab = line.find('\t', pos);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(pos));
      return fields;
    }
    fields.push_back(line.substr(pos, tab - pos));
    pos = tab + 1;
  }
}

double parse_finite(std::string_view field, std::string_view source, std::size_t line) {
  if (field.empty()) parse_fail(source, line, "empty numeric field");
  // from_chars rejects a leading '+'; accept it for hand-written files.
  std::string_view digits = field;
  if (digits.front() == '+') digits.remove_prefix(1);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), value);
  if (ec != std::errc() || ptr != digits.data() + digits.size()) {
    parse_fail(source, line, "not a decimal number: '" + std::string(field) + "'");
  }
  if (!std::isfinite(value)) {
    parse_fail(source, line, "non-finite value: '" + std::string(field) + "'");
  }
  return value;
}

std::string_view require_id(std::string_view field, std::string_view source, std::size_t line) {
  if (field.empty()) parse_fail(source, line, "empty trial id");
  return field;
}

void require_unique(std::unordered_set<std::string_view>& seen, std::string_view id,
                    std::string_view source, std::size_t line) {
  if (!seen.insert(id).second) {
    std::ostringstream os;
    os << source << ":" << line << ": duplicate trial id '" << id << "'";
    throw Error(ErrorCode::kDuplicateTrialId, os.str());
  }
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kIoError, "cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

double clamp_score(double s, std::size_t& clamped) {
  if (s > kScoreClamp || s < -kScoreClamp) {
    ++clamped;
    return std::clamp(s, -kScoreClamp, kScoreClamp);
  }
  return s;
}

}  // namespace

ScoreFile parse_score_text(std::string_view text, std::string_view source) {
  ScoreFile out;
  std::unordered_set<std::string_view> seen;
  for (const auto& [number, line] : content_lines(text, source)) {
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      parse_fail(source, number, "expected 2 tab-separated fields, got " +
                                     std::to_string(fields.size()));
    }
    const auto id = require_id(fields[0], source, number);
    require_unique(seen, id, source, number);
    out.rows.push_back({std::string(id), parse_finite(fields[1], source, number)});
  }
  return out;
}

TrialKeyFile parse_key_text(std::string_view text, std::string_view source) {
  TrialKeyFile out;
  std::unordered_set<std::string_view> seen;
  for (const auto& [number, line] : content_lines(text, source)) {
    const auto fields = split_tabs(line);
    if (fields.size() != 2) {
      parse_fail(source, number, "expected 2 tab-separated fields, got " +
                                     std::to_string(fields.size()));
    }
    const auto id = require_id(fields[0], source, number);
    const auto cls = class_from_key_token(fields[1]);
    if (!cls) parse_fail(source, number, "unknown class '" + std::string(fields[1]) + "'");
    require_unique(seen, id, source, number);
    out.rows.push_back({std::string(id), *cls});
  }
  return out;
}

LikelihoodFile parse_likelihood_text(std::string_view text, std::string_view source) {
  LikelihoodFile out;
  std::unordered_set<std::string_view> seen;
  std::size_t width = 0;
  for (const auto& [number, line] : content_lines(text, source)) {
    const auto fields = split_tabs(line);
    if (fields.size() < 2) parse_fail(source, number, "expected a trial id and values");
    if (width == 0) width = fields.size();
    if (fields.size() != width) {
      parse_fail(source, number, "expected " + std::to_string(width) + " fields, got " +
                                     std::to_string(fields.size()));
    }
    const auto id = require_id(fields[0], source, number);
    require_unique(seen, id, source, number);
    LikelihoodRow row{std::string(id), {}};
    row.values.reserve(fields.size() - 1);
    for (std::size_t k = 1; k < fields.size(); ++k) {
      row.values.push_back(parse_finite(fields[k], source, number));
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

ScoreFile parse_score_file(const std::filesystem::path& path) {
  return parse_score_text(read_file(path), path.string());
}

TrialKeyFile parse_key_file(const std::filesystem::path& path) {
  return parse_key_text(read_file(path), path.string());
}

LikelihoodFile parse_likelihood_file(const std::filesystem::path& path) {
  return parse_likelihood_text(read_file(path), path.string());
}

std::vector<double> parse_value_list_file(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  const std::string source = path.string();
  std::vector<double> values;
  for (const auto& [number, line] : content_lines(text, source)) {
    values.push_back(parse_finite(line, source, number));
  }
  return values;
}

std::string format_score(double value) {
  char buf[32];
  const int n = std::snprintf(buf, sizeof buf, "%.17g", value);
  return std::string(buf, static_cast<std::size_t>(n));
}

void write_score_file(std::ostream& out, const ScoreFile& scores) {
  for (const auto& row : scores.rows) {
    out << row.trial_id << '\t' << format_score(row.score) << '\n';
  }
}

void write_score_file(const std::filesystem::path& path, const ScoreFile& scores) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  write_score_file(out, scores);
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

ScoreFile sorted_by_id(ScoreFile scores) {
  std::sort(scores.rows.begin(), scores.rows.end(),
            [](const ScoreRow& a, const ScoreRow& b) { return a.trial_id < b.trial_id; });
  return scores;
}

namespace {

std::unordered_map<std::string_view, double> index_scores(const ScoreFile& f) {
  std::unordered_map<std::string_view, double> m;
  m.reserve(f.rows.size());
  for (const auto& r : f.rows) m.emplace(r.trial_id, r.score);
  return m;
}

}  // namespace

JoinedTrialSet join_trials(const TrialKeyFile& key, const ScoreFile& cm, const ScoreFile& asv) {
  const auto cm_by_id = index_scores(cm);
  const auto asv_by_id = index_scores(asv);

  JoinedTrialSet out;
  for (const auto& row : key.rows) {
    const auto c = cm_by_id.find(row.trial_id);
    const auto a = asv_by_id.find(row.trial_id);
    out.missing_cm += c == cm_by_id.end();
    out.missing_asv += a == asv_by_id.end();
    if (c == cm_by_id.end() || a == asv_by_id.end()) {
      ++out.dropped;
      continue;
    }
    out.records.push_back({row.trial_id, row.trial_class, clamp_score(c->second, out.clamped),
                           clamp_score(a->second, out.clamped)});
  }
  if (out.records.empty()) {
    throw Error(ErrorCode::kEmptyJoin, "no keyed trial has both a CM and an ASV score");
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const TrialRecord& a, const TrialRecord& b) { return a.trial_id < b.trial_id; });
  return out;
}

ScoredJoin join_scores(const TrialKeyFile& key, const ScoreFile& scores) {
  const auto by_id = index_scores(scores);
  std::vector<std::pair<std::string_view, std::pair<double, TrialClass>>> rows;
  std::size_t dropped = 0;
  for (const auto& row : key.rows) {
    const auto it = by_id.find(row.trial_id);
    if (it == by_id.end()) {
      ++dropped;
      continue;
    }
    rows.push_back({row.trial_id, {it->second, row.trial_class}});
  }
  if (rows.empty()) throw Error(ErrorCode::kEmptyJoin, "no keyed trial has a score");
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  ScoredJoin out;
  out.dropped = dropped;
  for (const auto& [id, v] : rows) {
    out.trial_ids.emplace_back(id);
    out.scores.push_back(v.first);
    out.classes.push_back(v.second);
  }
  return out;
}

PairedScores pair_scores(const ScoreFile& cm, const ScoreFile& asv) {
  const auto asv_by_id = index_scores(asv);
  std::vector<std::pair<std::string_view, std::pair<double, double>>> rows;
  std::size_t dropped = 0;
  for (const auto& r : cm.rows) {
    const auto it = asv_by_id.find(r.trial_id);
    if (it == asv_by_id.end()) {
      ++dropped;
      continue;
    }
    rows.push_back({r.trial_id, {r.score, it->second}});
  }
  dropped += asv.rows.size() - rows.size();
  if (rows.empty()) throw Error(ErrorCode::kEmptyJoin, "CM and ASV files share no trial id");
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  PairedScores out;
  out.dropped = dropped;
  for (const auto& [id, v] : rows) {
    out.trial_ids.emplace_back(id);
    out.cm.push_back(clamp_score(v.first, out.clamped));
    out.asv.push_back(clamp_score(v.second, out.clamped));
  }
  return out;
}

void write_calibration_artifact(std::ostream& out, const CalibrationResult& result,
                                const std::vector<std::pair<std::string, std::string>>& extra) {
  const auto& p = result.params;
  out << "# sasv calibration parameters\n";
  out << "a0=" << format_score(p.a0) << '\n';
  out << "a1=" << format_score(p.a1) << '\n';
  out << "c0=" << format_score(p.c0) << '\n';
  out << "c1=" << format_score(p.c1) << '\n';
  out << "initial_objective=" << format_score(result.initial_objective) << '\n';
  out << "final_objective=" << format_score(result.final_objective) << '\n';
  out << "iterations=" << result.iterations << '\n';
  out << "converged=" << (result.converged ? "true" : "false") << '\n';
  out << "gradient_norm=" << format_score(result.gradient_norm) << '\n';
  for (const auto& [k, v] : extra) out << k << '=' << v << '\n';
}

CalibrationParams parse_calibration_params_text(std::string_view text, std::string_view source) {
  std::array<std::optional<double>, 4> found;
  constexpr std::array<std::string_view, 4> kKeys = {"a0", "a1", "c0", "c1"};
  for (const auto& [number, line] : content_lines(text, source)) {
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) parse_fail(source, number, "expected key=value");
    const std::string_view key = line.substr(0, eq);
    for (std::size_t k = 0; k < kKeys.size(); ++k) {
      if (key != kKeys[k]) continue;
      if (found[k]) parse_fail(source, number, "repeated key '" + std::string(key) + "'");
      found[k] = parse_finite(line.substr(eq + 1), source, number);
    }
  }
  std::array<double, 4> values{};
  for (std::size_t k = 0; k < kKeys.size(); ++k) {
    if (!found[k]) {
      throw Error(ErrorCode::kParseError,
                  std::string(source) + ": missing key '" + std::string(kKeys[k]) + "'");
    }
    values[k] = *found[k];
  }
  return CalibrationParams::from_array(values);
}

CalibrationParams parse_calibration_params_file(const std::filesystem::path& path) {
  return parse_calibration_params_text(read_file(path), path.string());
}

}  // namespace sasv
