// tools/sasv/commands.cpp

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

#include "commands.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "sasv/aux_scoring.hpp"
#include "sasv/calibration.hpp"
#include "sasv/decision.hpp"
#include "sasv/error.hpp"
#include "sasv/metrics.hpp"
#include "sasv/score_io.hpp"
#include "sasv/synth.hpp"

namespace sasv::cli {

namespace {

std::vector<double> parse_number_list(const std::string& text, std::size_t expected,
                                      const std::string& flag) {
  std::vector<double> values;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size() || !std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, flag + ": not a number: '" + item + "'");
    }
    values.push_back(v);
  }
  if (values.size() != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                flag + ": expected " + std::to_string(expected) + " comma-separated values");
  }
  return values;
}

std::string join_numbers(std::initializer_list<double> values) {
  std::string out;
  for (double v : values) {
    if (!out.empty()) out += ',';
    out += format_score(v);
  }
  return out;
}

// --costs / --preset / --priors handling shared by several subcommands.
struct OperatingPointFlags {
  std::string costs;
  std::string priors;
  std::string preset;

  void attach(CLI::App& cmd, bool priors_required) {
    auto* c = cmd.add_option("--costs", costs,
                             "c_miss,c_fa_imp,c_fa_spoof,c_fa_spoof_imp (default 1,1,1,1)");
    auto* p = cmd.add_option("--preset", preset,
                             "Named cost preset: asvspoof5 (miss 1, false accepts 10)")
                  ->check(CLI::IsMember({"asvspoof5"}));
    c->excludes(p);
    auto* pr = cmd.add_option("--priors", priors, "p_bt,p_bn,p_st,p_sn");
    if (priors_required) pr->required();
  }

  CostModel cost_model() const {
    if (preset == "asvspoof5") return CostModel(1.0, 10.0, 10.0, 10.0);
    if (costs.empty()) return CostModel::unit();
    const auto v = parse_number_list(costs, 4, "--costs");
    return {v[0], v[1], v[2], v[3]};
  }

  PriorModel prior_model() const {
    const auto v = parse_number_list(priors, 4, "--priors");
    return {v[0], v[1], v[2], v[3]};
  }
};

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "write failed: " + path.string());
}

// ---------------------------------------------------------------- calibrate

struct CalibrateArgs {
  std::string key, cm, asv, out;
  OperatingPointFlags op;
  int max_iterations = 1000;
  double gradient_tolerance = 1e-8;
};

int run_calibrate(const CalibrateArgs& a, std::ostream& err) {
  const auto costs = a.op.cost_model();
  const auto priors = a.op.prior_model();
  const auto joined =
      join_trials(parse_key_file(a.key), parse_score_file(a.cm), parse_score_file(a.asv));
  err << "calibrate: " << joined.records.size() << " trials joined, " << joined.dropped
      << " dropped, " << joined.clamped << " scores clamped\n";

  std::size_t skipped_sn = 0;
  const auto data = CalibrationDataset::from_records(joined.records, &skipped_sn);
  if (skipped_sn > 0) err << "calibrate: ignoring " << skipped_sn << " spoof_nontarget trials\n";

  FitSettings settings;
  settings.max_iterations = a.max_iterations;
  settings.gradient_tolerance = a.gradient_tolerance;
  const auto result = fit_calibration(data, costs, priors, settings);

  std::ostringstream text;
  write_calibration_artifact(
      text, result,
      {{"costs", join_numbers({costs.c_miss(), costs.c_fa_imp(), costs.c_fa_spoof(),
                               costs.c_fa_spoof_imp()})},
       {"priors", join_numbers({priors.p_bt(), priors.p_bn(), priors.p_st(), priors.p_sn()})},
       {"trials_bt", std::to_string(data.bt().size())},
       {"trials_bn", std::to_string(data.bn().size())},
       {"trials_st", std::to_string(data.st().size())}});
  write_text_file(a.out, text.str());

  err << "calibrate: objective " << format_score(result.initial_objective) << " -> "
      << format_score(result.final_objective) << " in " << result.iterations << " iterations\n";
  if (!result.converged) {
    throw Error(ErrorCode::kMaxIterations,
                "not converged after " + std::to_string(result.iterations) +
                    " iterations (gradient norm " + format_score(result.gradient_norm) +
                    "); parameters written to " + a.out);
  }
  return kExitOk;
}

// ------------------------------------------------------------------ compose

struct ComposeArgs {
  std::string cm, asv, params, out;
  OperatingPointFlags op;
};

int run_compose(const ComposeArgs& a, std::ostream& err) {
  const auto costs = a.op.cost_model();
  const auto priors = a.op.prior_model();
  const auto cond = conditional_reject_priors(effective_priors(costs, priors));
  std::optional<CalibrationParams> params;
  if (!a.params.empty()) {
    params = parse_calibration_params_file(a.params);
    params->validate();
  }

  const auto paired = pair_scores(parse_score_file(a.cm), parse_score_file(a.asv));
  err << "compose: " << paired.trial_ids.size() << " trials, " << paired.dropped
      << " unpaired rows dropped, " << paired.clamped << " scores clamped\n";

  ScoreFile out;
  out.rows.reserve(paired.trial_ids.size());
  for (std::size_t i = 0; i < paired.trial_ids.size(); ++i) {
    const LlrPair llrs(paired.cm[i], paired.asv[i]);
    const double llr = params ? corrected_sasv_llr(llrs, *params, cond) : sasv_llr(llrs, cond);
    if (!std::isfinite(llr)) {
      throw Error(ErrorCode::kNonFiniteObjective,
                  "non-finite SASV LLR for trial '" + paired.trial_ids[i] + "'");
    }
    out.rows.push_back({paired.trial_ids[i], llr});
  }
  write_score_file(a.out, out);
  return kExitOk;
}

// ----------------------------------------------------------------- evaluate

struct EvaluateArgs {
  std::string key, scores, out;
  OperatingPointFlags op;
  bool binary_cm = false;
  bool normalize_a_dcf = false;
};

std::string report_lines(const MetricsReport& r, bool binary_cm, bool normalized) {
  std::ostringstream os;
  os << "mode=" << (binary_cm ? "cm" : "sasv") << '\n';
  os << "eer=" << format_score(r.eer) << '\n';
  os << "min_dcf=" << format_score(r.min_dcf) << '\n';
  os << "act_dcf=" << format_score(r.act_dcf) << '\n';
  os << "cllr=" << format_score(r.cllr) << '\n';
  os << "min_a_dcf=" << format_score(r.min_a_dcf) << '\n';
  os << "min_a_dcf_threshold=" << format_score(r.min_a_dcf_threshold) << '\n';
  os << "min_a_dcf_normalized=" << (normalized ? "true" : "false") << '\n';
  return os.str();
}

std::string report_table(const MetricsReport& r, bool binary_cm) {
  char buf[512];
  std::snprintf(buf, sizeof buf,
                "%-22s %s\n"
                "%-22s %.4f %%\n"
                "%-22s %.5f\n"
                "%-22s %.5f\n"
                "%-22s %.5f bits\n"
                "%-22s %.5f (threshold %.6g)\n",
                "evaluation", binary_cm ? "countermeasure (bona fide vs spoof)" : "SASV",
                "EER", 100.0 * r.eer, "minDCF", r.min_dcf, "actDCF", r.act_dcf, "Cllr", r.cllr,
                "min a-DCF", r.min_a_dcf, r.min_a_dcf_threshold);
  return buf;
}

int run_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const ADcfConfig cfg{a.op.cost_model(), a.op.prior_model()};
  const auto joined = join_scores(parse_key_file(a.key), parse_score_file(a.scores));
  err << "evaluate: " << joined.scores.size() << " trials scored, " << joined.dropped
      << " keyed trials without score\n";
  const ScoredTrials trials(joined.scores, joined.classes);
  const auto report = a.binary_cm ? evaluate_cm(trials, cfg, a.normalize_a_dcf)
                                  : evaluate_sasv(trials, cfg, a.normalize_a_dcf);
  const std::string lines = report_lines(report, a.binary_cm, a.normalize_a_dcf);
  out << report_table(report, a.binary_cm) << '\n' << lines;
  if (!a.out.empty()) write_text_file(a.out, lines);
  return kExitOk;
}

// ----------------------------------------------------------------- simulate

struct SimulateArgs {
  std::string out_dir;
  std::uint64_t seed = 1;
  std::size_t n_bt = 1000, n_bn = 1000, n_st = 1000;
  double cm_separation = 4.0, asv_separation = 4.0;
  std::string cm_corruption = "1,0", asv_corruption = "1,0";
};

int run_simulate(const SimulateArgs& a, std::ostream& err) {
  SynthConfig cfg;
  cfg.seed = a.seed;
  cfg.n_bt = a.n_bt;
  cfg.n_bn = a.n_bn;
  cfg.n_st = a.n_st;
  cfg.cm_separation = a.cm_separation;
  cfg.asv_separation = a.asv_separation;
  const auto cm = parse_number_list(a.cm_corruption, 2, "--cm-corruption");
  const auto asv = parse_number_list(a.asv_corruption, 2, "--asv-corruption");
  cfg.cm_corruption = {cm[0], cm[1]};
  cfg.asv_corruption = {asv[0], asv[1]};
  const auto set = generate(cfg);

  const std::filesystem::path dir(a.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, "cannot create " + dir.string());

  std::ostringstream key, cm_out, asv_out, truth;
  truth << "# seed=" << cfg.seed << '\n'
        << "# cm_separation=" << format_score(cfg.cm_separation)
        << " asv_separation=" << format_score(cfg.asv_separation) << '\n'
        << "# cm_corruption=" << join_numbers({cfg.cm_corruption.scale, cfg.cm_corruption.offset})
        << " asv_corruption="
        << join_numbers({cfg.asv_corruption.scale, cfg.asv_corruption.offset}) << '\n'
        << "# trial_id\tclass\ttrue_llr_cm\ttrue_llr_asv\n";
  for (std::size_t i = 0; i < set.records.size(); ++i) {
    const auto& r = set.records[i];
    key << r.trial_id << '\t' << key_token(r.trial_class) << '\n';
    cm_out << r.trial_id << '\t' << format_score(r.cm_raw) << '\n';
    asv_out << r.trial_id << '\t' << format_score(r.asv_raw) << '\n';
    truth << r.trial_id << '\t' << key_token(r.trial_class) << '\t'
          << format_score(set.true_llr_cm[i]) << '\t' << format_score(set.true_llr_asv[i])
          << '\n';
  }
  write_text_file(dir / "key.tsv", key.str());
  write_text_file(dir / "cm.tsv", cm_out.str());
  write_text_file(dir / "asv.tsv", asv_out.str());
  write_text_file(dir / "truth.tsv", truth.str());
  err << "simulate: wrote " << set.records.size() << " trials to " << dir.string() << '\n';
  return kExitOk;
}

// --------------------------------------------------------------------- fuse

struct FuseArgs {
  std::vector<std::string> scores;
  std::string out;
};

int run_fuse(const FuseArgs& a, std::ostream& err) {
  std::vector<ScoreFile> systems;
  for (const auto& path : a.scores) systems.push_back(parse_score_file(path));
  write_score_file(a.out, minmax_fuse(systems));
  err << "fuse: fused " << systems.size() << " systems\n";
  return kExitOk;
}

// ---------------------------------------------------------------- aggregate

struct AggregateArgs {
  std::string likelihoods, scheme, class_priors, out;
  std::size_t speakers = 400;
  std::size_t spoof_types = 8;
};

int run_aggregate(const AggregateArgs& a, std::ostream& err) {
  const auto name = scheme_from_token(a.scheme);
  if (!name) throw Error(ErrorCode::kInvalidArgument, "unknown scheme '" + a.scheme + "'");
  const auto scheme = make_label_scheme(*name, a.speakers, a.spoof_types);
  std::vector<double> priors;
  if (!a.class_priors.empty()) priors = parse_value_list_file(a.class_priors);

  const auto lik = parse_likelihood_file(a.likelihoods);
  ScoreFile out;
  out.rows.reserve(lik.rows.size());
  for (const auto& row : lik.rows) {
    out.rows.push_back({row.trial_id, aggregate_group_llr(row.values, scheme, priors)});
  }
  write_score_file(a.out, sorted_by_id(std::move(out)));
  err << "aggregate: " << lik.rows.size() << " trials, scheme " << scheme_token(*name)
      << " (K = " << scheme.k << ")\n";
  return kExitOk;
}

int exit_code_for(ErrorCode code) {
  switch (error_category(code)) {
    case ErrorCategory::kUsage: return kExitUsage;
    case ErrorCategory::kData: return kExitData;
    case ErrorCategory::kNumerical: return kExitNumerical;
  }
  return kExitData;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Score-level toolkit for spoofing-robust speaker verification", "sasv"};
  app.require_subcommand(1);

  CalibrateArgs cal;
  auto* calibrate = app.add_subcommand("calibrate", "Fit joint CM/ASV affine calibration");
  calibrate->add_option("--key", cal.key, "Trial key file")->required();
  calibrate->add_option("--cm", cal.cm, "CM score file")->required();
  calibrate->add_option("--asv", cal.asv, "ASV score file")->required();
  calibrate->add_option("--out", cal.out, "Output parameter file")->required();
  calibrate->add_option("--max-iterations", cal.max_iterations)->check(CLI::PositiveNumber);
  calibrate->add_option("--gradient-tolerance", cal.gradient_tolerance)
      ->check(CLI::PositiveNumber);
  cal.op.attach(*calibrate, /*priors_required=*/true);

  ComposeArgs comp;
  auto* compose = app.add_subcommand("compose", "Compose CM and ASV scores into SASV LLRs");
  compose->add_option("--cm", comp.cm, "CM score file")->required();
  compose->add_option("--asv", comp.asv, "ASV score file")->required();
  compose->add_option("--params", comp.params, "Calibration parameter file");
  compose->add_option("--out", comp.out, "Output score file")->required();
  comp.op.attach(*compose, /*priors_required=*/true);

  EvaluateArgs ev;
  auto* evaluate = app.add_subcommand("evaluate", "Compute EER, minDCF, actDCF, Cllr, min a-DCF");
  evaluate->add_option("--key", ev.key, "Trial key file")->required();
  evaluate->add_option("--scores", ev.scores, "Score file")->required();
  evaluate->add_option("--out", ev.out, "Also write key=value report here");
  evaluate->add_flag("--binary-cm", ev.binary_cm, "Evaluate as bona fide vs spoof");
  evaluate->add_flag("--normalize-a-dcf", ev.normalize_a_dcf,
                     "Divide min a-DCF by the best default-decision cost");
  ev.op.attach(*evaluate, /*priors_required=*/true);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Generate synthetic trials with known LLRs");
  simulate->add_option("--out-dir", sim.out_dir, "Output directory")->required();
  simulate->add_option("--seed", sim.seed);
  simulate->add_option("--n-bt", sim.n_bt)->check(CLI::PositiveNumber);
  simulate->add_option("--n-bn", sim.n_bn)->check(CLI::PositiveNumber);
  simulate->add_option("--n-st", sim.n_st)->check(CLI::PositiveNumber);
  simulate->add_option("--cm-separation", sim.cm_separation);
  simulate->add_option("--asv-separation", sim.asv_separation);
  simulate->add_option("--cm-corruption", sim.cm_corruption, "scale,offset applied to CM LLRs");
  simulate->add_option("--asv-corruption", sim.asv_corruption,
                       "scale,offset applied to ASV LLRs");

  FuseArgs fu;
  auto* fuse = app.add_subcommand("fuse", "Min-max normalize and average score files");
  fuse->add_option("--scores", fu.scores, "Score files (two or more)")->required();
  fuse->add_option("--out", fu.out, "Output score file")->required();

  AggregateArgs ag;
  auto* aggregate =
      app.add_subcommand("aggregate", "Bona fide vs spoof LLR from multi-class likelihoods");
  aggregate->add_option("--likelihoods", ag.likelihoods, "trial_id + K likelihood columns")
      ->required();
  aggregate->add_option("--scheme", ag.scheme, "spk-binspf|spk-mulspf|spk-onespf|mulspf|binspf")
      ->required();
  aggregate->add_option("--speakers", ag.speakers)->check(CLI::PositiveNumber);
  aggregate->add_option("--spoof-types", ag.spoof_types)->check(CLI::PositiveNumber);
  aggregate->add_option("--class-priors", ag.class_priors, "One prior per line, K lines");
  aggregate->add_option("--out", ag.out, "Output score file")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: UsageError: " << e.what() << '\n';
    return kExitUsage;
  }

  try {
    if (calibrate->parsed()) return run_calibrate(cal, err);
    if (compose->parsed()) return run_compose(comp, err);
    if (evaluate->parsed()) return run_evaluate(ev, out, err);
    if (simulate->parsed()) return run_simulate(sim, err);
    if (fuse->parsed()) return run_fuse(fu, err);
    if (aggregate->parsed()) return run_aggregate(ag, err);
  } catch (const Error& e) {
    err << "error: " << error_name(e.code()) << ": " << e.what() << '\n';
    return exit_code_for(e.code());
  }
  return kExitUsage;
}

}  // namespace sasv::cli
