// core/src/synth.cpp

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

#include "sasv/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <string>

#include "sasv/error.hpp"

namespace sasv {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t stream)
    : key_(splitmix64(splitmix64(seed) ^ (stream * 0xd1b54a32d192ed03ULL))) {}

std::uint64_t CounterRng::bits(std::uint64_t counter) const {
  return splitmix64(key_ + counter * 0x9e3779b97f4a7c15ULL);
}

double CounterRng::uniform(std::uint64_t counter) const {
  // 53 random bits, shifted by half a step to stay away from 0 and 1.
  return (static_cast<double>(bits(counter) >> 11) + 0.5) * 0x1.0p-53;
}

double CounterRng::normal(std::uint64_t i) const {
  const double u1 = uniform(2 * i);
  const double u2 = uniform(2 * i + 1);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void SynthConfig::validate() const {
  auto require = [](bool ok, const char* what) {
    if (!ok) throw Error(ErrorCode::kInvalidArgument, std::string("SynthConfig: ") + what);
  };
  require(n_bt > 0 && n_bn > 0 && n_st > 0, "class counts must be positive");
  require(std::isfinite(cm_separation) && cm_separation > 0.0, "cm_separation must be > 0");
  require(std::isfinite(asv_separation) && asv_separation > 0.0, "asv_separation must be > 0");
  require(std::isfinite(cm_corruption.scale) && cm_corruption.scale != 0.0 &&
              std::isfinite(cm_corruption.offset),
          "cm corruption must be finite with nonzero scale");
  require(std::isfinite(asv_corruption.scale) && asv_corruption.scale != 0.0 &&
              std::isfinite(asv_corruption.offset),
          "asv corruption must be finite with nonzero scale");
}

namespace {

// Stream numbering: 2 * class index for CM latents, 2 * class index + 1 for
// ASV latents.
constexpr std::uint64_t cm_stream(TrialClass c) { return 2 * index_of(c); }
constexpr std::uint64_t asv_stream(TrialClass c) { return 2 * index_of(c) + 1; }

bool is_bona(TrialClass c) { return c == TrialClass::kBT || c == TrialClass::kBN; }
bool is_target(TrialClass c) { return c == TrialClass::kBT || c == TrialClass::kST; }

std::string trial_id(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "sim%07zu", index);
  return buf;
}

}  // namespace

SynthTrialSet generate(const SynthConfig& cfg) {
  cfg.validate();
  SynthTrialSet out;
  out.config = cfg;
  const std::size_t total = cfg.n_bt + cfg.n_bn + cfg.n_st;
  out.records.reserve(total);
  out.true_llr_cm.reserve(total);
  out.true_llr_asv.reserve(total);

  const std::array<std::pair<TrialClass, std::size_t>, 3> plan = {{
      {TrialClass::kBT, cfg.n_bt}, {TrialClass::kBN, cfg.n_bn}, {TrialClass::kST, cfg.n_st}}};

  for (const auto& [cls, n] : plan) {
    const CounterRng cm_rng(cfg.seed, cm_stream(cls));
    const CounterRng asv_rng(cfg.seed, asv_stream(cls));
    const double cm_mean = (is_bona(cls) ? 0.5 : -0.5) * cfg.cm_separation;
    const double asv_mean = (is_target(cls) ? 0.5 : -0.5) * cfg.asv_separation;
    for (std::size_t i = 0; i < n; ++i) {
      const double llr_cm = cfg.cm_separation * (cm_mean + cm_rng.normal(i));
      const double llr_asv = cfg.asv_separation * (asv_mean + asv_rng.normal(i));
      out.records.push_back({trial_id(out.records.size()), cls, cfg.cm_corruption(llr_cm),
                             cfg.asv_corruption(llr_asv)});
      out.true_llr_cm.push_back(llr_cm);
      out.true_llr_asv.push_back(llr_asv);
    }
  }
  return out;
}

}  // namespace sasv
