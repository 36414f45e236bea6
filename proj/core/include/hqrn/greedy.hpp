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

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "hqrn/ansatz.hpp"
#include "hqrn/blocks.hpp"
#include "hqrn/contrastive.hpp"
#include "hqrn/entangle.hpp"

namespace hqrn {

/// Trainable parameters of one two-qubit QRB: ansatz angles of U+ [0..14] and
/// U- [15..29], bias [30..33], gamma [34].
inline constexpr std::size_t kQrbTrainableParams = 2 * kAnsatzParams + 4 + 1;
using QrbParameterVector = std::array<double, kQrbTrainableParams>;

QrbParams qrb_from_parameters(const QrbParameterVector& x, double alpha);

/// U+ = U- = I, bias 1/4, gamma 1: every input maps to the uniform
/// intermediate state.
QrbParameterVector identity_block_parameters();

struct GreedyConfig {
  int restarts = 5;
  int max_steps = 200;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double fd_step = 1e-4;
  double gradient_clip = 10.0;
  double min_learning_rate = 1e-6;
  double max_learning_rate = 1.0;
  double lr_growth = 1.2;  // applied after each accepted step
  double alpha = 0.5;
  Activation activation = Activation::kReLU;
  ContrastiveLossConfig loss;

  void validate() const;
};

struct GreedyLayerReport {
  double identity_start_loss = 0.0;
  double best_loss = 0.0;
  int best_restart = -1;
  int discarded_restarts = 0;
  std::vector<double> accepted_losses;  // of the winning restart
};

struct GreedyResult {
  std::vector<QrbParams> blocks;
  std::vector<QrbParameterVector> parameters;
  std::vector<GreedyLayerReport> layers;
};

/// States after applying `blocks` in order.
std::vector<DensityMatrix> propagate_states(std::span<const DensityMatrix> states,
                                            std::span<const QrbParams> blocks, Activation kind);

/// Z-measurement vectors of the states after `blocks`.
std::vector<RealVector> stack_features(std::span<const LabeledState> data,
                                       std::span<const QrbParams> blocks, Activation kind);

ContrastiveLoss stack_loss(std::span<const LabeledState> data, std::span<const QrbParams> blocks,
                           Activation kind, const ContrastiveLossConfig& cfg);

/// Layer-wise training: block k is optimized with blocks 1..k-1 frozen, by
/// momentum descent on central finite-difference gradients of the
/// contrastive loss. Only loss-decreasing steps are accepted; a rejected
/// step halves the learning rate and resets the momentum, an accepted one
/// grows it by `lr_growth`. Restart 0 starts from the identity block,
/// the rest from random parameters; the lowest final loss wins.
GreedyResult greedy_train_qrb_stack(std::span<const LabeledState> train, int depth,
                                    const GreedyConfig& cfg, std::uint64_t seed);

}  // namespace hqrn
