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
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hqrn/cascade_training.hpp"
#include "hqrn/config.hpp"
#include "hqrn/reconstruct.hpp"
#include "hqrn/sampling.hpp"

namespace hqrn {

// ---------------------------------------------------------------------------
// Digits

struct DigitsData {
  std::vector<Example> train;
  std::vector<Example> test;
  Index num_classes = 0;
};

/// MNIST subsets (first train_count / test_count records) or synthetic blobs.
DigitsData load_digits_data(const DigitsConfig& cfg, std::uint64_t seed);

/// Two classes on the dim-simplex: centers are a descending and an ascending
/// ramp, perturbed by Gaussian noise, clipped and renormalized. Labels
/// alternate 0, 1, 0, ...
std::vector<Example> synthetic_simplex_blobs(std::size_t count, Index dim, double noise,
                                             std::uint64_t seed);

/// One reconstructed QRB per cascade block.
std::vector<ReconstructedBlock> reconstruct_cascade(const CascadeNetwork& net,
                                                    const std::optional<TrotterSpec>& trotter);

/// Labels assigned by the hybrid network: the classical projection, the
/// reconstructed QRBs on the dilated space under `shots`, then the classical
/// head on the first d populations. Item i draws from derive_seed(seed, i).
std::vector<int> hqrn_predictions(const CascadeNetwork& net,
                                  const std::vector<ReconstructedBlock>& blocks,
                                  std::span<const Example> data, ShotSetting shots,
                                  std::uint64_t seed, EnsembleLedger* ledger = nullptr);

struct DigitsEvaluation {
  int epoch = 0;
  ShotSetting shots;
  int repeat = 0;
  double error_rate = 0.0;    // hybrid network
  double disagreement = 0.0;  // hybrid vs classical
  ConfusionFractions confusion;  // a = classical, b = hybrid
};

struct DigitsReport {
  std::vector<EpochMetrics> history;
  std::vector<DigitsEvaluation> evaluations;
  double max_reconstruction_error = 0.0;
  nlohmann::json json;
};

/// Trains the classical cascade, reconstructs it at each checkpoint and
/// evaluates it at every shot setting. Writes report.json, training.csv,
/// metrics.csv and checkpoints/ under cfg.output_dir.
DigitsReport run_digits(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Entanglement

struct FamilyAccuracy {
  double werner = 0.0;
  double random_separable = 0.0;
  double adversarial = 0.0;
};

struct DepthResult {
  int depth = 0;
  double train_contrastive_loss = 0.0;
  double accuracy = 0.0;  // test set, classical head
  FamilyAccuracy per_family;
  double pair_accuracy = 0.0;  // Werner / adversarial mimic pairs
  std::optional<double> hqrn_accuracy;   // head reconstructed on three qubits
  std::optional<double> hqrn_agreement;  // with the classical head
  int head_best_epoch = 0;
};

struct EntanglementReport {
  std::vector<DepthResult> depths;
  nlohmann::json json;
};

/// Greedy QRB training up to the deepest requested depth, then a classical
/// head per depth on the measured features. Writes report.json, metrics.csv,
/// trajectories.csv and blocks.json under cfg.output_dir.
EntanglementReport run_entanglement(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Equivalence suite

struct SuiteResult {
  std::string name;
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
  double seconds = 0.0;
  std::string detail;
};

struct EquivalenceReport {
  std::vector<SuiteResult> suites;
  bool all_passed = false;
  nlohmann::json json;
};

SuiteResult check_crb_equivalence(int trials, const std::vector<Index>& dims, std::uint64_t seed);
SuiteResult check_closed_form(int trials, int max_depth, std::uint64_t seed);
SuiteResult check_dilation_round_trip(int trials, std::uint64_t seed);
SuiteResult check_dilated_block(int trials, std::uint64_t seed);
SuiteResult check_trotter_round_trip(int trials, const TrotterSpec& spec, std::uint64_t seed);
/// Mean order-2 unitary error at 8 and 32 steps; passes when the ratio is
/// 16 within 50%.
SuiteResult check_trotter_scaling(int trials, std::uint64_t seed);
/// Log-log slope of the mean sup-norm sampling error against the shot count.
SuiteResult check_shot_scaling(int seeds, const std::vector<std::uint64_t>& shot_list,
                               std::uint64_t seed);
SuiteResult check_ppt_boundary();

/// Runs every suite. Writes report.json and metrics.csv when cfg.output_dir
/// is non-empty.
EquivalenceReport run_equivalence_suite(const ExperimentConfig& cfg);

}  // namespace hqrn
