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
#include <functional>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "hqrn/blocks.hpp"
#include "hqrn/linalg.hpp"

namespace hqrn {

/// Trainable R^D -> R^d map feeding a normalized activation, so that the
/// cascade input is a simplex vector.
struct InputProjection {
  RealMatrix weight;  // d x D
  RealVector bias;
};

/// Optional input projection, a cascade of classical residual blocks and a
/// linear head.
struct CascadeNetwork {
  std::optional<InputProjection> projection;
  std::vector<CrbParams> blocks;
  RealMatrix head_weight;  // outputs x d
  RealVector head_bias;
  Activation activation = Activation::kReLU;

  Index input_dim() const;
  Index hidden_dim() const;
  Index num_outputs() const { return head_weight.rows(); }
  void validate() const;

  std::size_t parameter_count() const;
  /// Projection, then each block's weight and bias, then the head. Matrices
  /// are flattened column-major. Residual weights are not trainable.
  std::vector<double> flatten() const;
  void unflatten(std::span<const double> params);

  /// The cascade input: the projected simplex vector, or x itself.
  SimplexVector embed(const RealVector& x) const;
  SimplexVector hidden(const RealVector& x) const;
  RealVector scores(const RealVector& x) const;
  /// Argmax of the scores; for a single-logit head, 1 iff the logit is > 0.
  int predict(const RealVector& x) const;
  /// The head's decision on a cascade output.
  int head_label(const SimplexVector& y) const;
};

struct CascadeInit {
  double projection_scale = 1.0;
  double block_weight_scale = 1.0;
  double block_bias = 0.0;
  double head_scale = 1.0;
};

CascadeNetwork init_cascade(std::optional<Index> projection_input_dim, Index hidden_dim,
                            int num_blocks, Index num_outputs, double alpha, Activation activation,
                            std::uint64_t seed, const CascadeInit& init = {});

struct Example {
  RealVector x;
  int label = 0;  // class index; for weighted BCE 1 = positive (entangled)
};

enum class LossKind { kCrossEntropy, kWeightedBce };

struct LossOptions {
  LossKind kind = LossKind::kCrossEntropy;
  double positive_weight = 1.0;  // w_p = N_neg / N_pos for weighted BCE
};

/// N_neg / N_pos over a labeled set.
double positive_class_weight(std::span<const Example> data);

/// Mean loss over the batch; fills `grad` (flatten() layout) when non-null.
double loss_and_gradient(const CascadeNetwork& net, std::span<const Example> batch,
                         const LossOptions& loss, std::vector<double>* grad);

struct OptimizerConfig {
  enum class Algorithm { kRmsProp, kAdam };

  Algorithm algorithm = Algorithm::kRmsProp;
  double learning_rate = 3e-3;
  double weight_decay = 1e-4;
  int epochs = 50;
  int batch_size = 32;
  double gradient_clip = 0.0;  // max gradient 2-norm; 0 disables

  void validate() const;
};

std::string_view to_string(OptimizerConfig::Algorithm a);

/// RMSProp (smoothing 0.99, eps 1e-8) or Adam (0.9, 0.999, eps 1e-8), with
/// L2 weight decay added to the gradient.
class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, std::size_t num_params);
  void step(std::vector<double>& params, const std::vector<double>& grad);

 private:
  OptimizerConfig cfg_;
  std::vector<double> first_;
  std::vector<double> second_;
  long long t_ = 0;
};

struct EpochMetrics {
  int epoch = 0;
  double loss = 0.0;
  double train_error = 0.0;
  double test_error = 0.0;
};

struct TrainingResult {
  CascadeNetwork network;       // after the last epoch
  CascadeNetwork best_network;  // lowest training error, earliest on ties
  int best_epoch = 0;
  std::vector<EpochMetrics> history;
};

using EpochCallback = std::function<void(const EpochMetrics&, const CascadeNetwork&)>;

double error_rate(const CascadeNetwork& net, std::span<const Example> data);

/// Mini-batch training with a seeded shuffle. Throws TrainingError on a
/// non-finite loss.
TrainingResult train_crb_cascade(CascadeNetwork net, std::span<const Example> train,
                                 std::span<const Example> test, const OptimizerConfig& cfg,
                                 const LossOptions& loss, std::uint64_t seed,
                                 const EpochCallback& on_epoch = {});

/// max(x, 0) / (sum max(x, 0) + 1e-20). An all-zero image maps to zero.
RealVector preprocess_image(std::span<const double> pixels);

/// preprocess_image, with an all-zero result replaced by the uniform vector
/// (a warning is logged).
SimplexVector image_to_simplex(std::span<const double> pixels);

struct Classification {
  int label = 0;
  RealVector scores;
};

/// scores = W y + b; ties go to the lowest index.
Classification classify(const SimplexVector& y, const RealMatrix& head_weight,
                        const RealVector& head_bias);

}  // namespace hqrn
