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

#include "hqrn/cascade_training.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <string>

#include "hqrn/error.hpp"
#include "hqrn/sampling.hpp"

namespace hqrn {
namespace {

constexpr double kActivationFloor = 1e-20;
constexpr double kImageEpsilon = 1e-20;

double act(double z, Activation kind) {
  return kind == Activation::kReLU ? std::max(z, 0.0) : 1.0 / (1.0 + std::exp(-z));
}

double act_derivative(double z, Activation kind) {
  if (kind == Activation::kReLU) return z > 0.0 ? 1.0 : 0.0;
  const double s = 1.0 / (1.0 + std::exp(-z));
  return s * (1.0 - s);
}

// Forward state of F(z) = f(z) / sum f(z), kept for the backward pass.
struct NormalizedAct {
  RealVector z;
  RealVector out;
  double total = 0.0;
  bool degenerate = false;
};

NormalizedAct normalized_forward(RealVector z, Activation kind) {
  NormalizedAct a;
  RealVector f = z.unaryExpr([kind](double v) { return act(v, kind); });
  a.total = f.sum();
  a.degenerate = a.total < kActivationFloor;
  a.out = a.degenerate ? RealVector::Constant(z.size(), 1.0 / static_cast<double>(z.size()))
                       : RealVector(f / a.total);
  a.z = std::move(z);
  return a;
}

// dL/dz_j = f'(z_j) / S * (dL/dF_j - <dL/dF, F>); zero in the uniform fallback.
RealVector normalized_backward(const NormalizedAct& a, const RealVector& grad_out,
                               Activation kind) {
  if (a.degenerate) return RealVector::Zero(a.z.size());
  const double centered = grad_out.dot(a.out);
  RealVector g(a.z.size());
  for (Index j = 0; j < a.z.size(); ++j) {
    g[j] = act_derivative(a.z[j], kind) / a.total * (grad_out[j] - centered);
  }
  return g;
}

double softplus(double x) { return x > 0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

// Flattened parameter cursor.
class Writer {
 public:
  explicit Writer(std::vector<double>& out) : out_(out) {}
  void put(const RealMatrix& m) { out_.insert(out_.end(), m.data(), m.data() + m.size()); }
  void put(const RealVector& v) { out_.insert(out_.end(), v.data(), v.data() + v.size()); }

 private:
  std::vector<double>& out_;
};

class Reader {
 public:
  explicit Reader(std::span<const double> in) : in_(in) {}
  void get(RealMatrix& m) { take(m.data(), m.size()); }
  void get(RealVector& v) { take(v.data(), v.size()); }
  bool done() const { return pos_ == in_.size(); }

 private:
  void take(double* dst, Index n) {
    const auto count = static_cast<std::size_t>(n);
    if (pos_ + count > in_.size()) throw DimensionError("unflatten: parameter vector too short");
    std::copy_n(in_.begin() + static_cast<std::ptrdiff_t>(pos_), count, dst);
    pos_ += count;
  }
  std::span<const double> in_;
  std::size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// CascadeNetwork

Index CascadeNetwork::input_dim() const {
  return projection ? projection->weight.cols() : hidden_dim();
}

Index CascadeNetwork::hidden_dim() const {
  if (projection) return projection->weight.rows();
  if (!blocks.empty()) return blocks.front().dim();
  return head_weight.cols();
}

void CascadeNetwork::validate() const {
  const Index d = hidden_dim();
  if (projection && projection->bias.size() != d) {
    throw DimensionError("CascadeNetwork: projection bias size mismatch");
  }
  for (const CrbParams& b : blocks) {
    b.validate();
    if (b.dim() != d) throw DimensionError("CascadeNetwork: block dimension mismatch");
  }
  if (head_weight.cols() != d || head_bias.size() != head_weight.rows() ||
      head_weight.rows() == 0) {
    throw DimensionError("CascadeNetwork: head shape mismatch");
  }
}

std::size_t CascadeNetwork::parameter_count() const {
  std::size_t n = 0;
  if (projection) n += static_cast<std::size_t>(projection->weight.size() + projection->bias.size());
  for (const CrbParams& b : blocks) n += static_cast<std::size_t>(b.weight.size() + b.bias.size());
  n += static_cast<std::size_t>(head_weight.size() + head_bias.size());
  return n;
}

std::vector<double> CascadeNetwork::flatten() const {
  std::vector<double> out;
  out.reserve(parameter_count());
  Writer w(out);
  if (projection) {
    w.put(projection->weight);
    w.put(projection->bias);
  }
  for (const CrbParams& b : blocks) {
    w.put(b.weight);
    w.put(b.bias);
  }
  w.put(head_weight);
  w.put(head_bias);
  return out;
}

void CascadeNetwork::unflatten(std::span<const double> params) {
  if (params.size() != parameter_count()) {
    throw DimensionError("unflatten: expected " + std::to_string(parameter_count()) +
                         " parameters, got " + std::to_string(params.size()));
  }
  Reader r(params);
  if (projection) {
    r.get(projection->weight);
    r.get(projection->bias);
  }
  for (CrbParams& b : blocks) {
    r.get(b.weight);
    r.get(b.bias);
  }
  r.get(head_weight);
  r.get(head_bias);
}

SimplexVector CascadeNetwork::embed(const RealVector& x) const {
  if (x.size() != input_dim()) throw DimensionError("CascadeNetwork: input dimension mismatch");
  if (projection) {
    return normalized_activation(projection->weight * x + projection->bias, activation);
  }
  return SimplexVector(x);
}

SimplexVector CascadeNetwork::hidden(const RealVector& x) const {
  return cascade_crb(embed(x), blocks, activation);
}

RealVector CascadeNetwork::scores(const RealVector& x) const {
  return head_weight * hidden(x).values() + head_bias;
}

int CascadeNetwork::predict(const RealVector& x) const { return head_label(hidden(x)); }

int CascadeNetwork::head_label(const SimplexVector& y) const {
  const Classification c = classify(y, head_weight, head_bias);
  if (num_outputs() == 1) return c.scores[0] > 0.0 ? 1 : 0;
  return c.label;
}

CascadeNetwork init_cascade(std::optional<Index> projection_input_dim, Index hidden_dim,
                            int num_blocks, Index num_outputs, double alpha, Activation activation,
                            std::uint64_t seed, const CascadeInit& init) {
  if (hidden_dim <= 0 || num_outputs <= 0 || num_blocks < 0) {
    throw DimensionError("init_cascade: dimensions must be positive");
  }
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> gauss;
  auto random_matrix = [&](Index rows, Index cols, double scale) {
    RealMatrix m(rows, cols);
    for (Index j = 0; j < cols; ++j)
      for (Index i = 0; i < rows; ++i) m(i, j) = scale * gauss(rng);
    return m;
  };

  CascadeNetwork net;
  net.activation = activation;
  if (projection_input_dim) {
    net.projection = InputProjection{
        random_matrix(hidden_dim, *projection_input_dim, init.projection_scale),
        RealVector::Zero(hidden_dim)};
  }
  for (int k = 0; k < num_blocks; ++k) {
    net.blocks.push_back(CrbParams{random_matrix(hidden_dim, hidden_dim, init.block_weight_scale),
                                   RealVector::Constant(hidden_dim, init.block_bias), alpha});
  }
  net.head_weight = random_matrix(num_outputs, hidden_dim, init.head_scale);
  net.head_bias = RealVector::Zero(num_outputs);
  net.validate();
  return net;
}

// ---------------------------------------------------------------------------
// Loss

double positive_class_weight(std::span<const Example> data) {
  std::size_t pos = 0;
  for (const Example& e : data) pos += e.label == 1;
  const std::size_t neg = data.size() - pos;
  if (pos == 0) throw PreconditionError("positive_class_weight: no positive examples");
  return static_cast<double>(neg) / static_cast<double>(pos);
}

double loss_and_gradient(const CascadeNetwork& net, std::span<const Example> batch,
                         const LossOptions& loss, std::vector<double>* grad) {
  if (batch.empty()) throw PreconditionError("loss_and_gradient: empty batch");
  const Activation kind = net.activation;
  const std::size_t num_blocks = net.blocks.size();
  if (loss.kind == LossKind::kWeightedBce && net.num_outputs() != 1) {
    throw DimensionError("weighted BCE needs a single-logit head");
  }

  // Gradient accumulators, same layout as flatten().
  CascadeNetwork g = net;
  if (grad) {
    if (g.projection) {
      g.projection->weight.setZero();
      g.projection->bias.setZero();
    }
    for (CrbParams& b : g.blocks) {
      b.weight.setZero();
      b.bias.setZero();
    }
    g.head_weight.setZero();
    g.head_bias.setZero();
  }

  double total = 0.0;
  std::vector<NormalizedAct> block_acts(num_blocks);
  std::vector<RealVector> ys(num_blocks + 1);

  for (const Example& ex : batch) {
    if (ex.x.size() != net.input_dim()) {
      throw DimensionError("loss_and_gradient: example dimension mismatch");
    }
    NormalizedAct proj_act;
    if (net.projection) {
      proj_act = normalized_forward(net.projection->weight * ex.x + net.projection->bias, kind);
      ys[0] = proj_act.out;
    } else {
      ys[0] = ex.x;
    }
    for (std::size_t k = 0; k < num_blocks; ++k) {
      const CrbParams& b = net.blocks[k];
      block_acts[k] = normalized_forward(b.weight * ys[k] + b.bias, kind);
      ys[k + 1] = (1.0 - b.alpha) * block_acts[k].out + b.alpha * ys[k];
    }
    const RealVector s = net.head_weight * ys[num_blocks] + net.head_bias;

    RealVector ds(s.size());
    if (loss.kind == LossKind::kCrossEntropy) {
      if (ex.label < 0 || ex.label >= s.size()) {
        throw DimensionError("loss_and_gradient: label out of range");
      }
      const double m = s.maxCoeff();
      const RealVector e = (s.array() - m).exp();
      const double z = e.sum();
      total += -(s[ex.label] - m - std::log(z));
      ds = e / z;
      ds[ex.label] -= 1.0;
    } else {
      const double y = ex.label == 1 ? 1.0 : 0.0;
      const double wp = loss.positive_weight;
      // -[wp y ln sig(s) + (1-y) ln(1 - sig(s))]
      total += wp * y * softplus(-s[0]) + (1.0 - y) * softplus(s[0]);
      const double sig = sigmoid(s[0]);
      ds[0] = wp * y * (sig - 1.0) + (1.0 - y) * sig;
    }
    if (!grad) continue;

    g.head_weight += ds * ys[num_blocks].transpose();
    g.head_bias += ds;
    RealVector dy = net.head_weight.transpose() * ds;
    for (std::size_t k = num_blocks; k-- > 0;) {
      const CrbParams& b = net.blocks[k];
      const RealVector dh = (1.0 - b.alpha) * dy;
      const RealVector da = normalized_backward(block_acts[k], dh, kind);
      g.blocks[k].weight += da * ys[k].transpose();
      g.blocks[k].bias += da;
      dy = b.alpha * dy + b.weight.transpose() * da;
    }
    if (net.projection) {
      const RealVector dz = normalized_backward(proj_act, dy, kind);
      g.projection->weight += dz * ex.x.transpose();
      g.projection->bias += dz;
    }
  }

  const double inv = 1.0 / static_cast<double>(batch.size());
  if (grad) {
    *grad = g.flatten();
    for (double& v : *grad) v *= inv;
  }
  return total * inv;
}

// ---------------------------------------------------------------------------
// Optimizers

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ConfigError("optimizer: learning_rate must be >= 0");
  if (!(weight_decay >= 0.0)) throw ConfigError("optimizer: weight_decay must be >= 0");
  if (epochs < 0) throw ConfigError("optimizer: epochs must be >= 0");
  if (batch_size < 1) throw ConfigError("optimizer: batch_size must be >= 1");
  if (!(gradient_clip >= 0.0)) throw ConfigError("optimizer: gradient_clip must be >= 0");
}

std::string_view to_string(OptimizerConfig::Algorithm a) {
  return a == OptimizerConfig::Algorithm::kAdam ? "adam" : "rmsprop";
}

Optimizer::Optimizer(const OptimizerConfig& cfg, std::size_t num_params)
    : cfg_(cfg), first_(num_params, 0.0), second_(num_params, 0.0) {}

void Optimizer::step(std::vector<double>& params, const std::vector<double>& grad) {
  constexpr double kEps = 1e-8;
  ++t_;
  const double lr = cfg_.learning_rate;
  if (cfg_.algorithm == OptimizerConfig::Algorithm::kRmsProp) {
    constexpr double kSmoothing = 0.99;
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double gi = grad[i] + cfg_.weight_decay * params[i];
      second_[i] = kSmoothing * second_[i] + (1.0 - kSmoothing) * gi * gi;
      params[i] -= lr * gi / (std::sqrt(second_[i]) + kEps);
    }
    return;
  }
  constexpr double kBeta1 = 0.9, kBeta2 = 0.999;
  const double c1 = 1.0 - std::pow(kBeta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(kBeta2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double gi = grad[i] + cfg_.weight_decay * params[i];
    first_[i] = kBeta1 * first_[i] + (1.0 - kBeta1) * gi;
    second_[i] = kBeta2 * second_[i] + (1.0 - kBeta2) * gi * gi;
    params[i] -= lr * (first_[i] / c1) / (std::sqrt(second_[i] / c2) + kEps);
  }
}

// ---------------------------------------------------------------------------
// Training loop

double error_rate(const CascadeNetwork& net, std::span<const Example> data) {
  if (data.empty()) return 0.0;
  std::size_t wrong = 0;
  for (const Example& e : data) wrong += net.predict(e.x) != e.label;
  return static_cast<double>(wrong) / static_cast<double>(data.size());
}

TrainingResult train_crb_cascade(CascadeNetwork net, std::span<const Example> train,
                                 std::span<const Example> test, const OptimizerConfig& cfg,
                                 const LossOptions& loss, std::uint64_t seed,
                                 const EpochCallback& on_epoch) {
  cfg.validate();
  net.validate();
  if (train.empty()) throw PreconditionError("train_crb_cascade: empty training set");
  for (const Example& e : train) {
    const bool ok = loss.kind == LossKind::kCrossEntropy
                        ? (e.label >= 0 && e.label < net.num_outputs())
                        : (e.label == 0 || e.label == 1);
    if (!ok) throw PreconditionError("train_crb_cascade: label outside the head's range");
  }

  std::vector<double> params = net.flatten();
  Optimizer opt(cfg, params.size());
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);
  std::mt19937_64 rng(splitmix64(seed));

  TrainingResult result;
  result.best_network = net;
  double best_error = error_rate(net, train);
  std::vector<Example> batch;
  std::vector<double> grad;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(cfg.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
      batch.clear();
      for (std::size_t i = start; i < stop; ++i) batch.push_back(train[order[i]]);
      const double l = loss_and_gradient(net, batch, loss, &grad);
      if (!std::isfinite(l)) {
        throw TrainingError("train_crb_cascade: non-finite loss at epoch " +
                            std::to_string(epoch) + ", batch starting at " +
                            std::to_string(start));
      }
      epoch_loss += l * static_cast<double>(stop - start);
      if (cfg.gradient_clip > 0.0) {
        double norm2 = 0.0;
        for (double g : grad) norm2 += g * g;
        const double norm = std::sqrt(norm2);
        if (norm > cfg.gradient_clip) {
          for (double& g : grad) g *= cfg.gradient_clip / norm;
        }
      }
      opt.step(params, grad);
      net.unflatten(params);
    }
    EpochMetrics m{epoch, epoch_loss / static_cast<double>(train.size()), error_rate(net, train),
                   error_rate(net, test)};
    result.history.push_back(m);
    if (m.train_error < best_error) {
      best_error = m.train_error;
      result.best_network = net;
      result.best_epoch = epoch;
    }
    if (on_epoch) on_epoch(m, net);
  }
  result.network = std::move(net);
  return result;
}

// ---------------------------------------------------------------------------
// Images and heads

RealVector preprocess_image(std::span<const double> pixels) {
  RealVector x(static_cast<Index>(pixels.size()));
  for (std::size_t i = 0; i < pixels.size(); ++i) {
    x[static_cast<Index>(i)] = std::max(pixels[i], 0.0);
  }
  return x / (x.sum() + kImageEpsilon);
}

SimplexVector image_to_simplex(std::span<const double> pixels) {
  if (pixels.empty()) throw DimensionError("image_to_simplex: empty image");
  RealVector x = preprocess_image(pixels);
  const double s = x.sum();
  if (s == 0.0) {
    std::clog << "warning: all-zero image replaced by the uniform distribution\n";
    return SimplexVector::uniform(x.size());
  }
  // The epsilon leaves the sum 1e-20-ish short of one; renormalize exactly.
  return SimplexVector::assume_valid(x / s);
}

Classification classify(const SimplexVector& y, const RealMatrix& head_weight,
                        const RealVector& head_bias) {
  if (head_weight.cols() != y.dim() || head_bias.size() != head_weight.rows() ||
      head_weight.rows() == 0) {
    throw DimensionError("classify: head shape does not match input");
  }
  Classification c{0, head_weight * y.values() + head_bias};
  for (Index i = 1; i < c.scores.size(); ++i) {
    if (c.scores[i] > c.scores[c.label]) c.label = static_cast<int>(i);
  }
  return c;
}

}  // namespace hqrn
