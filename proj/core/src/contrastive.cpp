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

#include "hqrn/contrastive.hpp"

#include <cmath>
#include <limits>

#include "hqrn/error.hpp"

namespace hqrn {

void ContrastiveLossConfig::validate() const {
  if (!(beta > 0 && d_min > 0 && close_threshold > 0 && close_penalty_scale > 0)) {
    throw PreconditionError("ContrastiveLossConfig: all parameters must be positive");
  }
}

ContrastiveLoss contrastive_loss(std::span<const RealVector> points, std::span<const int> labels,
                                 const ContrastiveLossConfig& cfg) {
  cfg.validate();
  const std::size_t n = points.size();
  if (labels.size() != n) throw DimensionError("contrastive_loss: labels/points size mismatch");
  if (n < 2) throw PreconditionError("contrastive_loss: need at least two points");
  bool has_pos = false, has_neg = false;
  for (int l : labels) (l > 0 ? has_pos : has_neg) = true;
  if (!has_pos || !has_neg) throw PreconditionError("contrastive_loss: both classes required");

  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> nearest_same(n, kInf), nearest_diff(n, kInf);
  double repulsion = 0.0;
  std::size_t cross_pairs = 0, close_pairs = 0;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dist = (points[i] - points[j]).norm();
      if ((labels[i] > 0) == (labels[j] > 0)) {
        nearest_same[i] = std::min(nearest_same[i], dist);
        nearest_same[j] = std::min(nearest_same[j], dist);
      } else {
        nearest_diff[i] = std::min(nearest_diff[i], dist);
        nearest_diff[j] = std::min(nearest_diff[j], dist);
        repulsion += std::exp(-dist / cfg.d_min);
        ++cross_pairs;
        if (dist < cfg.close_threshold) ++close_pairs;
      }
    }
  }

  double margin_sum = 0.0;
  std::size_t margin_terms = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (nearest_same[i] == kInf) continue;
    margin_sum += std::tanh(nearest_diff[i] - nearest_same[i]);
    ++margin_terms;
  }

  ContrastiveLoss out;
  out.l1 = margin_terms > 0 ? -margin_sum / static_cast<double>(margin_terms) : 0.0;
  out.l2 = repulsion / static_cast<double>(cross_pairs);
  out.l3 = cfg.close_penalty_scale * static_cast<double>(close_pairs);
  out.total = out.l1 + cfg.beta * out.l2 + out.l3;
  return out;
}

}  // namespace hqrn
