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

#include "hqrn/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <string>

#include "hqrn/error.hpp"
#include "hqrn/sampling.hpp"

namespace hqrn {
namespace {

using Mat4 = Eigen::Matrix4cd;
using Vec4 = Eigen::Vector4d;

std::span<const double, kAnsatzParams> ansatz_slice(const QrbParameterVector& x,
                                                    std::size_t offset) {
  return std::span<const double, kAnsatzParams>(x.data() + offset, kAnsatzParams);
}

Vec4 outcome_probabilities(const Mat4& u, const Mat4& rho) {
  return (u * rho).cwiseProduct(u.conjugate()).rowwise().sum().real();
}

double relu(double z) { return z > 0.0 ? z : 0.0; }

// Loss of one candidate block on fixed input states, without materializing
// output density matrices: the measured output is a diag(rho) + (1-a) h.
class LayerObjective {
 public:
  LayerObjective(std::span<const DensityMatrix> inputs, std::vector<int> labels,
                 const GreedyConfig& cfg)
      : labels_(std::move(labels)), cfg_(cfg) {
    states_.reserve(inputs.size());
    diagonals_.reserve(inputs.size());
    for (const DensityMatrix& r : inputs) {
      if (r.dim() != 4) throw DimensionError("greedy training expects two-qubit states");
      states_.push_back(r.matrix());
      diagonals_.push_back(r.matrix().diagonal().real());
    }
    points_.resize(states_.size(), RealVector(4));
  }

  ContrastiveLoss evaluate(const QrbParameterVector& x) {
    const Mat4 u_plus = ansatz_unitary(ansatz_slice(x, 0));
    const Mat4 u_minus = ansatz_unitary(ansatz_slice(x, kAnsatzParams));
    const Vec4 bias(x[30], x[31], x[32], x[33]);
    const double gamma = x[34];
    const double a = cfg_.alpha;
    for (std::size_t i = 0; i < states_.size(); ++i) {
      const Vec4 z = gamma * (outcome_probabilities(u_plus, states_[i]) -
                              outcome_probabilities(u_minus, states_[i])) +
                     bias;
      Vec4 f;
      for (int n = 0; n < 4; ++n) {
        f[n] = cfg_.activation == Activation::kReLU ? relu(z[n]) : 1.0 / (1.0 + std::exp(-z[n]));
      }
      const double total = f.sum();
      const Vec4 h = total < 1e-20 ? Vec4::Constant(0.25) : Vec4(f / total);
      points_[i] = a * diagonals_[i] + (1.0 - a) * h;
    }
    return contrastive_loss(points_, labels_, cfg_.loss);
  }

  double value(const QrbParameterVector& x) { return evaluate(x).total; }

 private:
  std::vector<Mat4> states_;
  std::vector<Vec4> diagonals_;
  std::vector<RealVector> points_;
  std::vector<int> labels_;
  GreedyConfig cfg_;
};

struct RestartOutcome {
  QrbParameterVector x{};
  double loss = std::numeric_limits<double>::infinity();
  std::vector<double> accepted;
  bool discarded = false;
};

RestartOutcome descend(LayerObjective& objective, QrbParameterVector x, const GreedyConfig& cfg) {
  RestartOutcome out;
  double loss = objective.value(x);
  if (!std::isfinite(loss)) {
    out.discarded = true;
    return out;
  }
  out.accepted.push_back(loss);
  QrbParameterVector velocity{};
  QrbParameterVector grad{};
  double lr = cfg.learning_rate;

  for (int step = 0; step < cfg.max_steps && lr >= cfg.min_learning_rate; ++step) {
    double norm2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      QrbParameterVector probe = x;
      probe[i] = x[i] + cfg.fd_step;
      const double up = objective.value(probe);
      probe[i] = x[i] - cfg.fd_step;
      const double down = objective.value(probe);
      grad[i] = (up - down) / (2.0 * cfg.fd_step);
      if (!std::isfinite(grad[i])) {
        out.discarded = true;
        return out;
      }
      norm2 += grad[i] * grad[i];
    }
    const double norm = std::sqrt(norm2);
    const double scale = norm > cfg.gradient_clip ? cfg.gradient_clip / norm : 1.0;

    QrbParameterVector candidate = x;
    for (std::size_t i = 0; i < x.size(); ++i) {
      velocity[i] = cfg.momentum * velocity[i] - lr * scale * grad[i];
      candidate[i] += velocity[i];
    }
    const double cand_loss = objective.value(candidate);
    if (!std::isfinite(cand_loss)) {
      out.discarded = true;
      return out;
    }
    if (cand_loss <= loss) {
      x = candidate;
      loss = cand_loss;
      out.accepted.push_back(loss);
      lr = std::min(lr * cfg.lr_growth, cfg.max_learning_rate);
    } else {
      velocity.fill(0.0);
      lr *= 0.5;
    }
  }
  out.x = x;
  out.loss = loss;
  return out;
}

QrbParameterVector random_parameters(std::mt19937_64& rng) {
  QrbParameterVector x{};
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> jitter(-0.1, 0.1);
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  for (std::size_t i = 0; i < 2 * kAnsatzParams; ++i) x[i] = angle(rng);
  for (std::size_t i = 30; i < 34; ++i) x[i] = 0.25 + jitter(rng);
  x[34] = gain(rng);
  return x;
}

std::vector<int> labels_of(std::span<const LabeledState> data) {
  std::vector<int> labels;
  labels.reserve(data.size());
  for (const LabeledState& s : data) labels.push_back(static_cast<int>(s.label));
  return labels;
}

std::vector<DensityMatrix> states_of(std::span<const LabeledState> data) {
  std::vector<DensityMatrix> states;
  states.reserve(data.size());
  for (const LabeledState& s : data) states.push_back(s.state);
  return states;
}

}  // namespace

QrbParams qrb_from_parameters(const QrbParameterVector& x, double alpha) {
  return QrbParams{ansatz_unitary(ansatz_slice(x, 0)),
                   ansatz_unitary(ansatz_slice(x, kAnsatzParams)), x[34],
                   RealVector{{x[30], x[31], x[32], x[33]}}, alpha};
}

QrbParameterVector identity_block_parameters() {
  QrbParameterVector x{};
  for (std::size_t i = 30; i < 34; ++i) x[i] = 0.25;
  x[34] = 1.0;
  return x;
}

void GreedyConfig::validate() const {
  if (restarts < 1) throw PreconditionError("GreedyConfig: restarts must be >= 1");
  if (max_steps < 0) throw PreconditionError("GreedyConfig: max_steps must be >= 0");
  if (!(learning_rate > 0.0) || !(fd_step > 0.0)) {
    throw PreconditionError("GreedyConfig: learning_rate and fd_step must be positive");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw PreconditionError("GreedyConfig: alpha in (0, 1)");
  loss.validate();
}

std::vector<DensityMatrix> propagate_states(std::span<const DensityMatrix> states,
                                            std::span<const QrbParams> blocks, Activation kind) {
  std::vector<DensityMatrix> out(states.begin(), states.end());
  for (const QrbParams& b : blocks) {
    for (DensityMatrix& s : out) s = qrb_forward(s, b, kind).rho;
  }
  return out;
}

std::vector<RealVector> stack_features(std::span<const LabeledState> data,
                                       std::span<const QrbParams> blocks, Activation kind) {
  const std::vector<DensityMatrix> out = propagate_states(states_of(data), blocks, kind);
  std::vector<RealVector> features;
  features.reserve(out.size());
  for (const DensityMatrix& s : out) features.push_back(measure_z(s).values());
  return features;
}

ContrastiveLoss stack_loss(std::span<const LabeledState> data, std::span<const QrbParams> blocks,
                           Activation kind, const ContrastiveLossConfig& cfg) {
  return contrastive_loss(stack_features(data, blocks, kind), labels_of(data), cfg);
}

GreedyResult greedy_train_qrb_stack(std::span<const LabeledState> train, int depth,
                                    const GreedyConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  if (depth < 0) throw PreconditionError("greedy_train_qrb_stack: depth must be >= 0");
  GreedyResult result;
  if (depth == 0) return result;
  if (train.empty()) throw PreconditionError("greedy_train_qrb_stack: empty training set");

  const std::vector<int> labels = labels_of(train);
  std::vector<DensityMatrix> current = states_of(train);

  for (int layer = 0; layer < depth; ++layer) {
    LayerObjective objective(current, labels, cfg);
    GreedyLayerReport report;
    report.identity_start_loss = objective.value(identity_block_parameters());
    RestartOutcome best;

    for (int r = 0; r < cfg.restarts; ++r) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(layer) * 1000 + r));
      const QrbParameterVector start = r == 0 ? identity_block_parameters() : random_parameters(rng);
      RestartOutcome outcome = descend(objective, start, cfg);
      if (outcome.discarded) {
        ++report.discarded_restarts;
        continue;
      }
      if (outcome.loss < best.loss) {
        best = std::move(outcome);
        report.best_restart = r;
      }
    }
    if (report.best_restart < 0) {
      throw TrainingError("greedy_train_qrb_stack: every restart of layer " +
                          std::to_string(layer + 1) + " diverged");
    }
    report.best_loss = best.loss;
    report.accepted_losses = best.accepted;

    QrbParams block = qrb_from_parameters(best.x, cfg.alpha);
    for (DensityMatrix& s : current) s = qrb_forward(s, block, cfg.activation).rho;
    result.blocks.push_back(std::move(block));
    result.parameters.push_back(best.x);
    result.layers.push_back(std::move(report));
  }
  return result;
}

}  // namespace hqrn
