// core/src/calibration.cpp

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

#include "sasv/calibration.hpp"

#include <ceres/ceres.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

#include "sasv/error.hpp"

namespace sasv {

void CalibrationParams::validate() const {
  for (double v : as_array()) {
    if (!std::isfinite(v)) {
      throw Error(ErrorCode::kInvalidArgument, "CalibrationParams: values must be finite");
    }
  }
}

namespace {

void require_finite_pairs(const std::vector<ScorePair>& pairs, const char* name) {
  if (pairs.empty()) {
    throw Error(ErrorCode::kEmptyClass, std::string("calibration data: no ") + name + " trials");
  }
  for (const auto& p : pairs) {
    if (!std::isfinite(p.cm) || !std::isfinite(p.asv)) {
      throw Error(ErrorCode::kInvalidArgument,
                  std::string("calibration data: non-finite score in class ") + name);
    }
  }
}

std::string describe(const CalibrationParams& p) {
  std::ostringstream os;
  os.precision(17);
  os << "a0=" << p.a0 << " a1=" << p.a1 << " c0=" << p.c0 << " c1=" << p.c1;
  return os.str();
}

}  // namespace

CalibrationDataset::CalibrationDataset(std::vector<ScorePair> bt, std::vector<ScorePair> bn,
                                       std::vector<ScorePair> st)
    : bt_(std::move(bt)), bn_(std::move(bn)), st_(std::move(st)) {
  require_finite_pairs(bt_, "BT");
  require_finite_pairs(bn_, "BN");
  require_finite_pairs(st_, "ST");
}

CalibrationDataset CalibrationDataset::from_records(std::span<const TrialRecord> records,
                                                    std::size_t* skipped_sn) {
  std::vector<ScorePair> bt, bn, st;
  std::size_t sn = 0;
  for (const auto& r : records) {
    const ScorePair pair{r.cm_raw, r.asv_raw};
    switch (r.trial_class) {
      case TrialClass::kBT: bt.push_back(pair); break;
      case TrialClass::kBN: bn.push_back(pair); break;
      case TrialClass::kST: st.push_back(pair); break;
      case TrialClass::kSN: ++sn; break;
    }
  }
  if (skipped_sn != nullptr) *skipped_sn = sn;
  return {std::move(bt), std::move(bn), std::move(st)};
}

std::span<const ScorePair> CalibrationDataset::of(TrialClass c) const {
  switch (c) {
    case TrialClass::kBT: return bt_;
    case TrialClass::kBN: return bn_;
    case TrialClass::kST: return st_;
    case TrialClass::kSN: break;
  }
  throw Error(ErrorCode::kUnsupportedSpoofNontarget,
              "calibration data holds no spoof-nontarget class");
}

double corrected_sasv_llr(const LlrPair& raw, const CalibrationParams& params,
                          const ConditionalRejectPriors& cond) {
  if (cond.p_sn() > 0.0) {
    throw Error(ErrorCode::kUnsupportedSpoofNontarget,
                "corrected SASV LLR is defined for p_sn = 0 only");
  }
  const LlrPair calibrated(params.c1 * raw.llr_cm() + params.c0,
                           params.a1 * raw.llr_asv() + params.a0);
  return sasv_llr(calibrated, cond);
}

namespace {

ConditionalRejectPriors checked_conditional(const EffectivePriors& ep) {
  if (ep.ep_bt() <= 0.0 || ep.ep_bn() + ep.ep_st() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument,
                "calibration needs positive effective mass on BT and on BN+ST");
  }
  return conditional_reject_priors(ep);
}

const PriorModel& require_no_spoof_nontarget(const PriorModel& priors) {
  if (priors.p_sn() != 0.0) {
    throw Error(ErrorCode::kUnsupportedSpoofNontarget,
                "calibration assumes p_sn = 0");
  }
  return priors;
}

}  // namespace

CalibrationObjective::CalibrationObjective(const CalibrationDataset& data,
                                           const CostModel& costs, const PriorModel& priors)
    : data_(&data),
      effective_(effective_priors(costs, require_no_spoof_nontarget(priors))),
      cond_(checked_conditional(effective_)),
      tau_(std::log(effective_.ep_bt() / (effective_.ep_bn() + effective_.ep_st()))) {}

double CalibrationObjective::value(const CalibrationParams& params) const {
  std::array<double, 4> unused{};
  return value_and_gradient(params, unused);
}

double CalibrationObjective::value_and_gradient(const CalibrationParams& params,
                                                std::array<double, 4>& grad) const {
  grad = {0.0, 0.0, 0.0, 0.0};
  const double log_bn = std::log(cond_.p_bn());
  const double log_st = std::log(cond_.p_st());

  double total = 0.0;
  for (TrialClass cls : {TrialClass::kBT, TrialClass::kBN, TrialClass::kST}) {
    const auto trials = data_->of(cls);
    const double weight = effective_.prior_of(cls) / static_cast<double>(trials.size());
    const double label = cls == TrialClass::kBT ? 1.0 : -1.0;

    double class_loss = 0.0;
    std::array<double, 4> class_grad{};
    for (const auto& s : trials) {
      const double u = params.a1 * s.asv + params.a0;
      const double v = params.c1 * s.cm + params.c0;
      const double llr = compose_llr(u, v, u + v, cond_);
      const double margin = -label * (llr + tau_);
      class_loss += detail::softplus(margin);

      // d softplus(margin) / d llr, then chain through the log-sum-exp whose
      // softmax weights are e^(term + llr).
      const double d_llr = -label * detail::sigmoid(margin);
      const double w_bn = std::exp(log_bn - u + llr);
      const double w_st = std::exp(log_st - v + llr);
      class_grad[0] += d_llr * w_bn;
      class_grad[1] += d_llr * w_bn * s.asv;
      class_grad[2] += d_llr * w_st;
      class_grad[3] += d_llr * w_st * s.cm;
    }
    total += weight * class_loss;
    for (std::size_t k = 0; k < 4; ++k) grad[k] += weight * class_grad[k];
  }
  return total;
}

double weighted_logistic_objective(const CalibrationDataset& data,
                                   const CalibrationParams& params,
                                   const CostModel& costs, const PriorModel& priors) {
  return CalibrationObjective(data, costs, priors).value(params);
}

std::array<double, 4> gradient(const CalibrationDataset& data, const CalibrationParams& params,
                               const CostModel& costs, const PriorModel& priors) {
  std::array<double, 4> g{};
  CalibrationObjective(data, costs, priors).value_and_gradient(params, g);
  return g;
}

namespace {

class CeresObjective final : public ceres::FirstOrderFunction {
 public:
  explicit CeresObjective(const CalibrationObjective& objective) : objective_(objective) {}

  bool Evaluate(const double* x, double* cost, double* grad) const override {
    std::array<double, 4> g{};
    const double f = objective_.value_and_gradient(
        CalibrationParams::from_array({x[0], x[1], x[2], x[3]}), g);
    if (!std::isfinite(f)) return false;
    *cost = f;
    if (grad != nullptr) {
      for (std::size_t k = 0; k < 4; ++k) {
        if (!std::isfinite(g[k])) return false;
        grad[k] = g[k];
      }
    }
    return true;
  }

  int NumParameters() const override { return 4; }

 private:
  const CalibrationObjective& objective_;
};

double inf_norm(const std::array<double, 4>& g) {
  double n = 0.0;
  for (double v : g) n = std::max(n, std::abs(v));
  return n;
}

}  // namespace

CalibrationResult fit_calibration(const CalibrationDataset& data, const CostModel& costs,
                                  const PriorModel& priors, const FitSettings& settings) {
  const CalibrationObjective objective(data, costs, priors);
  const auto start = CalibrationParams::identity();

  CalibrationResult result;
  result.initial_objective = objective.value(start);
  if (!std::isfinite(result.initial_objective)) {
    throw Error(ErrorCode::kNonFiniteObjective,
                "objective is not finite at " + describe(start));
  }

  std::array<double, 4> x = start.as_array();
  ceres::GradientProblemSolver::Options options;
  options.line_search_direction_type = ceres::LBFGS;
  options.line_search_type = ceres::WOLFE;
  options.max_lbfgs_rank = settings.lbfgs_rank;
  options.max_num_iterations = settings.max_iterations;
  options.gradient_tolerance = settings.gradient_tolerance;
  options.function_tolerance = 0.0;
  options.parameter_tolerance = 0.0;
  options.logging_type = ceres::SILENT;
  options.minimizer_progress_to_stdout = false;

  // The problem takes ownership of the function object.
  ceres::GradientProblem problem(new CeresObjective(objective));
  ceres::GradientProblemSolver::Summary summary;
  ceres::Solve(options, problem, x.data(), &summary);

  result.params = CalibrationParams::from_array(x);
  std::array<double, 4> g{};
  result.final_objective = objective.value_and_gradient(result.params, g);
  if (!std::isfinite(result.final_objective)) {
    throw Error(ErrorCode::kNonFiniteObjective,
                "objective is not finite at " + describe(result.params));
  }
  // The solver only ever moves to points with a lower cost; keep the start if
  // it reports otherwise.
  if (result.final_objective > result.initial_objective) {
    result.params = start;
    result.final_objective = objective.value_and_gradient(start, g);
  }
  result.gradient_norm = inf_norm(g);
  result.converged = result.gradient_norm <= settings.gradient_tolerance;
  result.iterations = summary.iterations.empty() ? 0 : summary.iterations.back().iteration;

  result.trace.reserve(summary.iterations.size());
  for (const auto& it : summary.iterations) result.trace.push_back(it.cost);
  if (result.trace.empty()) result.trace.push_back(result.initial_objective);
  return result;
}

}  // namespace sasv
