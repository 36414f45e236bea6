// Copyright 2026 The HQRN Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hqrn/blocks.hpp"
#include "hqrn/linalg.hpp"

namespace hqrn {

/// Name of the generator behind every seeded draw in the library.
inline constexpr std::string_view kRngAlgorithm = "mt19937_64 seeded by splitmix64(seed)";

/// splitmix64 finalizer.
std::uint64_t splitmix64(std::uint64_t x);

/// Per-item seed that depends only on (run_seed, index), never on
/// evaluation order.
std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index);

struct ShotConfig {
  std::optional<std::uint64_t> shots_per_branch;  // nullopt: infinite shots
  std::uint64_t seed = 0;

  static ShotConfig infinite() { return {}; }
  static ShotConfig finite(std::uint64_t shots, std::uint64_t seed);
  bool is_infinite() const noexcept { return !shots_per_branch.has_value(); }
};

/// Copies of the input ensemble consumed by each block. A block consumes 2 Ns
/// copies for the U+/U- measurements and 2 Ns for the residual mix, and
/// returns 4 Ns output copies, so the ensemble size is maintained.
class EnsembleLedger {
 public:
  void record_block(std::uint64_t shots_per_branch);

  const std::vector<std::uint64_t>& per_block_copies() const noexcept { return per_block_; }
  /// Copies of rho^(0) needed to run every recorded block.
  std::uint64_t total_initial_copies() const noexcept;

 private:
  std::vector<std::uint64_t> per_block_;
};

/// Empirical frequencies of a multinomial draw of n_shots outcomes.
SimplexVector sample_distribution(const SimplexVector& p, std::uint64_t n_shots,
                                  std::uint64_t seed);

struct SampledQrbOutput {
  DensityMatrix rho;
  SimplexVector h;
  SimplexVector p_plus;
  SimplexVector p_minus;
  std::uint64_t copies_consumed = 0;  // 0 for infinite shots
};

/// qrb_forward with p+ and p- replaced by Ns-shot frequencies. The residual
/// mix is the exact convex combination. Infinite shots reproduce
/// qrb_forward exactly.
SampledQrbOutput qrb_forward_sampled(const DensityMatrix& rho, const QrbParams& params,
                                     Activation kind, const ShotConfig& cfg,
                                     EnsembleLedger* ledger = nullptr);

double disagreement_rate(std::span<const int> labels_a, std::span<const int> labels_b);

struct ConfusionFractions {
  double both_correct = 0.0;
  double a_only = 0.0;
  double b_only = 0.0;
  double both_wrong = 0.0;
};

ConfusionFractions confusion_decomposition(std::span<const int> pred_a,
                                           std::span<const int> pred_b,
                                           std::span<const int> truth);

}  // namespace hqrn
