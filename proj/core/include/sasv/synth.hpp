// core/include/sasv/synth.hpp

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

// Synthetic SASV trials with known ground-truth LLRs.
//
// Latents are unit-variance Gaussians with means +/- separation/2:
//   CM:  bona fide (BT, BN) at +sep/2, spoof (ST) at -sep/2
//   ASV: target (BT, ST) at +sep/2, non-target (BN) at -sep/2
// so the exact LLR of a latent s is separation * s. Raw scores are an affine
// corruption of the exact LLRs: raw = scale * llr + offset.
//
// Random numbers come from CounterRng: SplitMix64 applied to a per-stream key
// and a counter, with Box-Muller normals. Each (class, score type) pair has its
// own stream, so fixtures are reproducible across platforms and can be
// generated per class independently.

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sasv/decision.hpp"
#include "sasv/trial.hpp"

namespace sasv {

class CounterRng {
 public:
  CounterRng(std::uint64_t seed, std::uint64_t stream);

  /// Raw 64-bit output for a counter value.
  std::uint64_t bits(std::uint64_t counter) const;
  /// Uniform on the open interval (0, 1).
  double uniform(std::uint64_t counter) const;
  /// Standard normal draw number i (consumes counters 2i and 2i+1).
  double normal(std::uint64_t i) const;

 private:
  std::uint64_t key_;
};

std::uint64_t splitmix64(std::uint64_t x);

struct AffineMap {
  double scale = 1.0;
  double offset = 0.0;

  double operator()(double x) const { return scale * x + offset; }
  friend bool operator==(const AffineMap&, const AffineMap&) = default;
};

struct SynthConfig {
  std::uint64_t seed = 1;
  std::size_t n_bt = 1000;
  std::size_t n_bn = 1000;
  std::size_t n_st = 1000;
  double cm_separation = 4.0;
  double asv_separation = 4.0;
  AffineMap cm_corruption;
  AffineMap asv_corruption;

  /// Throws Error(kInvalidArgument) on zero counts, non-positive separations
  /// or zero corruption scales.
  void validate() const;
};

struct SynthTrialSet {
  std::vector<TrialRecord> records;  // ordered BT, BN, ST; ids sim0000000, ...
  std::vector<double> true_llr_cm;   // parallel to records
  std::vector<double> true_llr_asv;
  SynthConfig config;
};

SynthTrialSet generate(const SynthConfig& cfg);

}  // namespace sasv
