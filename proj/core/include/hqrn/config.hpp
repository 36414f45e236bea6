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
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hqrn/blocks.hpp"
#include "hqrn/cascade_training.hpp"
#include "hqrn/entangle.hpp"
#include "hqrn/greedy.hpp"
#include "hqrn/reconstruct.hpp"

namespace hqrn {

enum class Task { kDigits, kEntanglement, kEquivalenceSuite };

std::string_view to_string(Task t);
Task task_from_string(std::string_view name);

/// nullopt stands for infinitely many shots.
using ShotSetting = std::optional<std::uint64_t>;

struct MnistPaths {
  std::filesystem::path train_images;
  std::filesystem::path train_labels;
  std::filesystem::path test_images;
  std::filesystem::path test_labels;
};

/// Two-class blobs on the probability simplex.
struct SyntheticSpec {
  Index dim = 4;
  double noise = 0.1;
};

struct DigitsConfig {
  std::optional<MnistPaths> mnist;
  std::optional<SyntheticSpec> synthetic;
  std::size_t train_count = 1000;  // first N records of the training file
  std::size_t test_count = 1000;
  Index hidden_dim = 64;
  int num_blocks = 10;
  double alpha = 0.5;
  Activation activation = Activation::kReLU;
  CascadeInit init;
  OptimizerConfig optimizer;
  std::vector<ShotSetting> shots{std::nullopt};
  int shot_repeats = 1;
  int reconstruct_every = 0;  // 0: final epoch only
  int checkpoint_every = 1;   // 0: no checkpoints
  std::optional<TrotterSpec> trotter = TrotterSpec{};

  void validate() const;
};

struct EntanglementConfig {
  DatasetCounts train{70, 60, 130};
  DatasetCounts test{100, 150, 250};
  std::size_t mimic_pairs = 250;
  std::vector<int> depths{0, 1, 2, 3, 4};
  double alpha = 0.5;
  Activation activation = Activation::kReLU;
  GreedyConfig greedy;
  int head_blocks = 10;
  CascadeInit head_init;
  OptimizerConfig head_optimizer{OptimizerConfig::Algorithm::kAdam, 1e-3, 1e-4, 600, 32, 0.0};
  bool reconstruct_head = true;
  std::optional<TrotterSpec> trotter;  // nullopt: exact dilation

  void validate() const;
};

struct EquivalenceConfig {
  int equivalence_trials = 500;
  std::vector<Index> dims{4, 8};
  int closed_form_trials = 100;
  int max_depth = 6;
  int reconstruction_trials = 100;
  TrotterSpec trotter{2, 64};
  int shot_seeds = 100;
  std::vector<std::uint64_t> shot_list{1000, 10000, 100000, 1000000};

  void validate() const;
};

struct ExperimentConfig {
  Task task = Task::kEquivalenceSuite;
  std::uint64_t seed = 0;
  std::filesystem::path output_dir = "out";
  DigitsConfig digits;
  EntanglementConfig entanglement;
  EquivalenceConfig equivalence;

  void validate() const;
};

/// Parses and validates. Unknown fields anywhere are rejected. Relative data and output
/// paths are resolved against `base_dir`.
ExperimentConfig parse_config(const nlohmann::json& j,
                              const std::filesystem::path& base_dir = {});
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json to_json(const ExperimentConfig& cfg);

}  // namespace hqrn
