// tests/acceptance/acceptance.cpp

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

// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <sys/types.h>
#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "commands.hpp"
#include "sasv/aux_scoring.hpp"
#include "sasv/calibration.hpp"
#include "sasv/decision.hpp"
#include "sasv/metrics.hpp"
#include "sasv/oracle.hpp"
#include "sasv/synth.hpp"

namespace sasv {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      if (!detail.empty()) detail += "; ";
      detail += what;
    }
  }
};

std::string fmt(const char* format, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

// Fixture shared by the calibration criteria.
const CostModel kCosts(1, 10, 10, 10);
const PriorModel kPriors(0.9, 0.05, 0.05, 0.0);
constexpr std::size_t kPerClass = 100000;

SynthConfig fixture(std::uint64_t seed, bool corrupted) {
  SynthConfig cfg;
  cfg.seed = seed;
  cfg.n_bt = cfg.n_bn = cfg.n_st = kPerClass;
  cfg.cm_separation = 3.0;
  cfg.asv_separation = 3.0;
  if (corrupted) {
    cfg.cm_corruption = {2.0, 3.0};
    cfg.asv_corruption = {0.5, -1.0};
  }
  return cfg;
}

// ----------------------------------------------------------------------------

Outcome decision_equivalence() {
  Outcome o;
  const auto start = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::normal_distribution<double> log_lik(0.0, 3.0);
  int disagreements = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) {
    const oracle::Likelihoods lik{std::exp(log_lik(rng)), std::exp(log_lik(rng)),
                                  std::exp(log_lik(rng)), std::exp(log_lik(rng))};
    const CostModel costs(u(rng) * 10 + 0.01, u(rng) * 10, u(rng) * 10, u(rng) * 10);
    double p[4] = {u(rng) + 0.01, u(rng), u(rng), u(rng)};
    const double s = p[0] + p[1] + p[2] + p[3];
    for (double& v : p) v /= s;
    const PriorModel priors(p[0], p[1], p[2], std::max(0.0, 1.0 - p[0] - p[1] - p[2]));

    const bool direct = oracle::bayes_decision(lik, costs, priors);
    const auto ep = effective_priors(costs, priors);
    bool via_llr;
    if (ep.reject_mass() == 0.0) {
      via_llr = bayes_accept(0.0, costs, priors);
    } else {
      const double llr = compose_llr(std::log(lik.bt / lik.bn), std::log(lik.bt / lik.st),
                                     std::log(lik.bt / lik.sn), conditional_reject_priors(ep));
      via_llr = bayes_accept(llr, costs, priors);
    }
    if (via_llr != direct) ++disagreements;
  }
  const double t = seconds_since(start);
  o.require(disagreements == 0, fmt("%d disagreements", disagreements));
  o.require(t < 1.0, fmt("runtime %.3f s >= 1 s", t));
  o.detail = fmt("%d draws, %d disagreements, %.3f s", n, disagreements, t) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome calibration_recovery() {
  Outcome o;
  const auto start = Clock::now();

  const auto corrupted = generate(fixture(101, true));
  const auto fit = fit_calibration(CalibrationDataset::from_records(corrupted.records), kCosts,
                                   kPriors);
  const double target[4] = {2.0, 2.0, -1.5, 0.5};  // a0, a1, c0, c1
  const auto got = fit.params.as_array();
  double worst_rel = 0.0;
  for (int k = 0; k < 4; ++k) {
    worst_rel = std::max(worst_rel, std::abs(got[k] - target[k]) / std::abs(target[k]));
  }
  o.require(fit.converged, "corrupted fit did not converge");
  o.require(worst_rel <= 0.10, fmt("relative error %.4f > 0.10", worst_rel));

  const auto clean = generate(fixture(102, false));
  const auto id_fit =
      fit_calibration(CalibrationDataset::from_records(clean.records), kCosts, kPriors);
  const double ident[4] = {0.0, 1.0, 0.0, 1.0};
  const auto id_got = id_fit.params.as_array();
  double worst_abs = 0.0;
  for (int k = 0; k < 4; ++k) worst_abs = std::max(worst_abs, std::abs(id_got[k] - ident[k]));
  o.require(id_fit.converged, "identity fit did not converge");
  o.require(worst_abs <= 0.05, fmt("identity deviation %.4f > 0.05", worst_abs));

  const double t = seconds_since(start);
  o.require(t < 30.0, fmt("runtime %.1f s >= 30 s", t));
  const std::string summary =
      fmt("corrupted fit (a0,a1,c0,c1)=(%.4f,%.4f,%.4f,%.4f) max rel err %.4f; ", got[0], got[1],
          got[2], got[3], worst_rel) +
      fmt("identity fit (%.4f,%.4f,%.4f,%.4f) max abs dev %.4f; %.2f s", id_got[0], id_got[1],
          id_got[2], id_got[3], worst_abs, t);
  o.detail = summary + (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

ScoredTrials composed(const SynthTrialSet& set, const CalibrationParams* params) {
  const auto cond = conditional_reject_priors(effective_priors(kCosts, kPriors));
  std::vector<double> scores;
  std::vector<TrialClass> classes;
  for (const auto& r : set.records) {
    const LlrPair raw(r.cm_raw, r.asv_raw);
    scores.push_back(params ? corrected_sasv_llr(raw, *params, cond) : sasv_llr(raw, cond));
    classes.push_back(r.trial_class);
  }
  return {std::move(scores), std::move(classes)};
}

Outcome calibration_improves_min_a_dcf() {
  Outcome o;
  const auto start = Clock::now();
  const auto dev = generate(fixture(201, true));
  const auto eval = generate(fixture(202, true));
  const auto fit =
      fit_calibration(CalibrationDataset::from_records(dev.records), kCosts, kPriors);
  const ADcfConfig cfg{kCosts, kPriors};
  const double raw = min_a_dcf(composed(eval, nullptr), cfg).value;
  const double cal = min_a_dcf(composed(eval, &fit.params), cfg).value;
  const double rel = (raw - cal) / raw;
  const double t = seconds_since(start);
  o.require(cal <= raw, "calibrated is worse");
  o.require(rel > 0.01, fmt("relative improvement %.4f <= 0.01", rel));
  o.require(t < 30.0, fmt("runtime %.1f s >= 30 s", t));
  o.detail = fmt("uncalibrated %.5f, calibrated %.5f, improvement %.2f%%, %.2f s", raw, cal,
                 100 * rel, t) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome gradient_correctness() {
  Outcome o;
  std::mt19937_64 rng(303);
  std::normal_distribution<double> n(0.0, 1.0);
  std::uniform_int_distribution<int> size(1, 20);
  const double h = 1e-5;
  double worst = 0.0;
  for (int d = 0; d < 100; ++d) {
    auto draw = [&](double cm_mean, double asv_mean) {
      std::vector<ScorePair> v(size(rng));
      for (auto& s : v) s = {cm_mean + 2 * n(rng), asv_mean + 2 * n(rng)};
      return v;
    };
    const CalibrationDataset data(draw(2, 2), draw(2, -2), draw(-2, 2));
    const double pbt = 0.2 + 0.7 * std::abs(std::tanh(n(rng)));
    const double pbn = (1.0 - pbt) * (0.1 + 0.8 * std::abs(std::tanh(n(rng))));
    const PriorModel priors(pbt, pbn, 1.0 - pbt - pbn, 0.0);
    const CostModel costs(1.0, 1.0 + 9 * std::abs(std::tanh(n(rng))), 10.0, 10.0);
    const CalibrationObjective objective(data, costs, priors);
    const CalibrationParams p{0.5 * n(rng), 1.0 + 0.3 * n(rng), 0.5 * n(rng), 1.0 + 0.3 * n(rng)};
    std::array<double, 4> g{};
    objective.value_and_gradient(p, g);
    for (std::size_t k = 0; k < 4; ++k) {
      auto plus = p.as_array(), minus = p.as_array();
      plus[k] += h;
      minus[k] -= h;
      const double fd = (objective.value(CalibrationParams::from_array(plus)) -
                         objective.value(CalibrationParams::from_array(minus))) /
                        (2 * h);
      worst = std::max(worst, std::abs(fd - g[k]));
    }
  }
  o.require(worst <= 1e-6, fmt("max abs difference %.3g > 1e-6", worst));
  o.detail = fmt("100 datasets, max abs difference %.3g", worst) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome metric_oracles() {
  Outcome o;
  std::mt19937_64 rng(404);
  std::uniform_int_distribution<int> size(4, 1000);
  std::uniform_int_distribution<int> cls(0, 3);
  std::uniform_real_distribution<double> u(0.05, 1.0);
  std::normal_distribution<double> n(0.0, 1.5);
  int mismatches = 0;
  for (int i = 0; i < 200; ++i) {
    const int size_i = size(rng);
    const bool ties = i % 2 == 0;
    std::vector<double> scores;
    std::vector<TrialClass> classes;
    for (int j = 0; j < size_i; ++j) {
      const auto c = j < 4 ? static_cast<TrialClass>(j) : static_cast<TrialClass>(cls(rng));
      double s = (c == TrialClass::kBT ? 1.0 : 0.0) + n(rng);
      if (ties) s = std::round(4 * s) / 4;
      scores.push_back(s);
      classes.push_back(c);
    }
    const ScoredTrials t(std::move(scores), std::move(classes));
    const double a = u(rng), b = u(rng), c = u(rng), d = 0.5 * u(rng), s = a + b + c + d;
    const ADcfConfig cfg{CostModel(1.0, 10 * u(rng), 10 * u(rng), 10 * u(rng)),
                         PriorModel(a / s, b / s, c / s, std::max(0.0, 1 - (a + b + c) / s))};
    const auto fast = min_a_dcf(t, cfg);
    const auto slow = oracle::min_a_dcf(t, cfg);
    if (fast.value != slow.value || fast.threshold != slow.threshold) ++mismatches;
    if (min_dcf(t, cfg) != oracle::min_dcf(t, cfg)) ++mismatches;
    if (eer(t, ClassSet::sasv_positive(), ClassSet::sasv_negative()) !=
        oracle::eer(t, ClassSet::sasv_positive(), ClassSet::sasv_negative())) {
      ++mismatches;
    }
    if (eer(t, ClassSet::bona_fide(), ClassSet::spoof()) !=
        oracle::eer(t, ClassSet::bona_fide(), ClassSet::spoof())) {
      ++mismatches;
    }
  }
  o.require(mismatches == 0, fmt("%d mismatches", mismatches));
  o.detail = fmt("200 instances, %d mismatches", mismatches) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

// Expected Cllr (bits) of perfectly calibrated LLRs from the equal-variance
// model with separation d: positives ~ N(d^2/2, d^2), negatives mirrored, so
// Cllr = E[log2(1 + exp(-x))] over the positive density. Composite Simpson
// over +/- 12 standard deviations.
double cllr_quadrature(double d) {
  const double mean = 0.5 * d * d, sd = d;
  const double lo = mean - 12 * sd, hi = mean + 12 * sd;
  const int m = 200000;
  const double h = (hi - lo) / m;
  auto f = [&](double x) {
    const double z = (x - mean) / sd;
    const double pdf = std::exp(-0.5 * z * z) / (sd * std::sqrt(2 * std::numbers::pi));
    return pdf * detail::softplus(-x) / std::numbers::ln2;
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < m; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
  return sum * h / 3;
}

Outcome cllr_sanity() {
  Outcome o;
  SynthConfig cfg;
  cfg.seed = 505;
  cfg.n_bt = cfg.n_bn = cfg.n_st = kPerClass;
  cfg.cm_separation = 3.0;
  cfg.asv_separation = 2.0;
  const auto set = generate(cfg);
  std::vector<TrialClass> classes;
  for (const auto& r : set.records) classes.push_back(r.trial_class);

  auto cm_cllr = [&](const AffineMap& m) {
    std::vector<double> s;
    for (double v : set.true_llr_cm) s.push_back(m(v));
    return cllr(ScoredTrials(std::move(s), classes), ClassSet::bona_fide(), ClassSet::spoof());
  };
  auto asv_cllr = [&](const AffineMap& m) {
    std::vector<double> s;
    for (double v : set.true_llr_asv) s.push_back(m(v));
    return cllr(ScoredTrials(std::move(s), classes), {TrialClass::kBT, TrialClass::kST},
                {TrialClass::kBN});
  };

  const double cm_ref = cllr_quadrature(3.0), asv_ref = cllr_quadrature(2.0);
  const double cm_emp = cm_cllr({}), asv_emp = asv_cllr({});
  const double cm_rel = std::abs(cm_emp - cm_ref) / cm_ref;
  const double asv_rel = std::abs(asv_emp - asv_ref) / asv_ref;
  o.require(cm_rel <= 0.02, fmt("CM Cllr off by %.4f", cm_rel));
  o.require(asv_rel <= 0.02, fmt("ASV Cllr off by %.4f", asv_rel));

  const AffineMap corruptions[] = {{2.0, 3.0}, {0.5, -1.0}, {1.0, 1.0}, {1.0, -1.0},
                                   {1.5, 0.0}, {0.7, 0.0},  {-1.0, 0.0}, {1.2, 0.3}};
  int not_worse = 0;
  for (const auto& m : corruptions) {
    if (!(cm_cllr(m) > cm_emp)) ++not_worse;
    if (!(asv_cllr(m) > asv_emp)) ++not_worse;
  }
  o.require(not_worse == 0, fmt("%d corruptions did not increase Cllr", not_worse));
  o.detail = fmt("CM %.5f vs %.5f (%.2f%%), ASV %.5f vs %.5f (%.2f%%), %zu corruptions", cm_emp,
                 cm_ref, 100 * cm_rel, asv_emp, asv_ref, 100 * asv_rel, std::size(corruptions)) +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Runs simulate -> calibrate -> compose -> evaluate in `dir`; returns every
// output file and the evaluate report concatenated.
std::string cli_pipeline(const fs::path& dir) {
  fs::remove_all(dir);
  const std::string d = dir.string();
  const std::vector<std::string> op = {"--preset", "asvspoof5", "--priors", "0.9,0.05,0.05,0"};
  auto with_op = [&](std::vector<std::string> args) {
    args.insert(args.end(), op.begin(), op.end());
    return args;
  };
  std::ostringstream out, err;
  const std::vector<std::vector<std::string>> steps = {
      {"simulate", "--out-dir", d, "--seed", "77", "--n-bt", "2000", "--n-bn", "2000", "--n-st",
       "2000", "--cm-corruption", "2,3", "--asv-corruption", "0.5,-1"},
      with_op({"calibrate", "--key", d + "/key.tsv", "--cm", d + "/cm.tsv", "--asv",
               d + "/asv.tsv", "--out", d + "/params.txt"}),
      with_op({"compose", "--cm", d + "/cm.tsv", "--asv", d + "/asv.tsv", "--params",
               d + "/params.txt", "--out", d + "/sasv.tsv"}),
      with_op({"evaluate", "--key", d + "/key.tsv", "--scores", d + "/sasv.tsv", "--out",
               d + "/report.txt"})};
  for (const auto& s : steps) {
    if (cli::run(s, out, err) != cli::kExitOk) return "failed: " + err.str();
  }
  std::string all = out.str();
  for (const char* f :
       {"key.tsv", "cm.tsv", "asv.tsv", "truth.tsv", "params.txt", "sasv.tsv", "report.txt"}) {
    all += slurp(dir / f);
  }
  return all;
}

Outcome monotone_and_deterministic() {
  Outcome o;
  int fixtures = 0, violations = 0;
  auto check = [&](const CalibrationResult& r) {
    ++fixtures;
    for (std::size_t k = 1; k < r.trace.size(); ++k) {
      if (r.trace[k] > r.trace[k - 1]) ++violations;
    }
    if (r.final_objective > r.initial_objective) ++violations;
  };
  for (std::uint64_t seed : {601, 602}) {
    for (bool corrupted : {true, false}) {
      auto cfg = fixture(seed, corrupted);
      cfg.n_bt = cfg.n_bn = cfg.n_st = 20000;
      check(fit_calibration(CalibrationDataset::from_records(generate(cfg).records), kCosts,
                            kPriors));
    }
  }
  std::mt19937_64 rng(606);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    auto draw = [&](double cm_mean, double asv_mean) {
      std::vector<ScorePair> v(50);
      for (auto& s : v) s = {cm_mean + n(rng), asv_mean + n(rng)};
      return v;
    };
    check(fit_calibration(CalibrationDataset(draw(2, 2), draw(2, -2), draw(-2, 2)), kCosts,
                          kPriors));
  }
  o.require(violations == 0, fmt("%d trace increases", violations));

  const fs::path base = fs::temp_directory_path() / ("sasv_acceptance_" + std::to_string(getpid()));
  const std::string a = cli_pipeline(base / "a");
  const std::string b = cli_pipeline(base / "b");
  fs::remove_all(base);
  const bool ok_run = a.rfind("failed", 0) != 0;
  o.require(ok_run, "CLI pipeline failed: " + a);
  o.require(a == b, "CLI outputs differ between identical runs");
  o.detail = fmt("%d fixtures, %d trace increases; CLI pipeline outputs %s", fixtures, violations,
                 ok_run && a == b ? "byte-identical" : "differ") +
             (o.detail.empty() ? "" : " | " + o.detail);
  return o;
}

Outcome aux_hand_checks() {
  Outcome o;
  const std::size_t expected[] = {800, 3600, 401, 9, 2};
  const SchemeName names[] = {SchemeName::kSpkBinspf, SchemeName::kSpkMulspf,
                              SchemeName::kSpkOnespf, SchemeName::kMulspf, SchemeName::kBinspf};
  for (int i = 0; i < 5; ++i) {
    o.require(make_label_scheme(names[i]).k == expected[i],
              std::string("class count of ") + std::string(scheme_token(names[i])));
  }

  o.require(std::abs(aggregate_group_llr(std::vector<double>{0.8, 0.2},
                                         make_label_scheme(SchemeName::kBinspf)) -
                     std::log(4.0)) < 1e-12,
            "binspf aggregation");
  std::vector<double> mul(9, 0.0625);
  mul[0] = 0.5;
  o.require(std::abs(aggregate_group_llr(mul, make_label_scheme(SchemeName::kMulspf))) < 1e-12,
            "mulspf aggregation");
  std::vector<double> one(401, 0.002);
  one[400] = 0.2;
  o.require(std::abs(aggregate_group_llr(one, make_label_scheme(SchemeName::kSpkOnespf)) -
                     std::log(4.0)) < 1e-12,
            "spk-onespf aggregation");

  auto file = [](std::vector<std::pair<std::string, double>> rows) {
    ScoreFile f;
    for (auto& [id, s] : rows) f.rows.push_back({id, s});
    return f;
  };
  auto matches = [](const ScoreFile& f, const std::vector<double>& want) {
    if (f.rows.size() != want.size()) return false;
    for (std::size_t i = 0; i < want.size(); ++i) {
      if (std::abs(f.rows[i].score - want[i]) > 1e-12) return false;
    }
    return true;
  };
  const auto self = file({{"a", 0}, {"b", 5}, {"c", 10}});
  o.require(matches(minmax_fuse(std::vector<ScoreFile>{self, self}), {0, 0.5, 1}),
            "self fusion");
  o.require(matches(minmax_fuse(std::vector<ScoreFile>{file({{"a", 0}, {"b", 10}}),
                                                       file({{"a", 10}, {"b", 0}})}),
                    {0.5, 0.5}),
            "symmetric fusion");
  // Normalized: (0, 0.5, 1), (1, 0, 0.25), (0.5, 1, 0).
  o.require(matches(minmax_fuse(std::vector<ScoreFile>{
                        file({{"a", -2}, {"b", 0}, {"c", 2}}), file({{"a", 9}, {"b", 1}, {"c", 3}}),
                        file({{"a", 0.5}, {"b", 0.75}, {"c", 0.25}})}),
                    {0.5, 0.5, 1.25 / 3}),
            "three-system fusion");

  const Embedding v = {0.3, -1.2, 2.5};
  const std::vector<Embedding> ev = {v};
  o.require(std::abs(cosine_score(ev, v) - 1.0) < 1e-12, "cosine self");
  o.require(std::abs(cosine_score(ev, {-0.3, 1.2, -2.5}) + 1.0) < 1e-12, "cosine antipodal");
  const std::vector<Embedding> two = {{1, 0}, {0, 1}};
  o.require(std::abs(cosine_score(two, {1, 1}) - 1.0) < 1e-12, "cosine enrollment average");
  if (o.detail.empty()) o.detail = "label counts 800/3600/401/9/2, aggregation, fusion, cosine";
  return o;
}

}  // namespace
}  // namespace sasv

int main() {
  using namespace sasv;
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"decision_equivalence", decision_equivalence},
      {"calibration_recovery", calibration_recovery},
      {"calibrated_min_a_dcf_improves", calibration_improves_min_a_dcf},
      {"gradient_correctness", gradient_correctness},
      {"metric_oracles", metric_oracles},
      {"cllr_calibration_sanity", cllr_sanity},
      {"monotone_trace_and_cli_determinism", monotone_and_deterministic},
      {"aux_scoring_hand_checks", aux_hand_checks},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    Outcome o;
    try {
      o = fn();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(std::size(criteria)) - failed,
              std::size(criteria));
  return failed == 0 ? 0 : 1;
}
