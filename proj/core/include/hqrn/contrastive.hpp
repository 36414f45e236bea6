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

#include <span>
#include <vector>

#include "hqrn/linalg.hpp"

namespace hqrn {

struct ContrastiveLossConfig {
  double beta = 5.0;
  double d_min = 0.1;
  double close_threshold = 1e-2;
  double close_penalty_scale = 100.0;

  void validate() const;
};

struct ContrastiveLoss {
  double total = 0.0;  // l1 + beta l2 + l3
  double l1 = 0.0;     // -mean tanh(nearest other-class - nearest same-class)
  double l2 = 0.0;     // mean over cross-class pairs of exp(-D / d_min)
  double l3 = 0.0;     // penalty scale * #(cross-class pairs with D < threshold)
};

/// Distance-based separation loss over points labeled +1 / -1. A point with
/// no other member of its class contributes no L1 term; L1 averages over the
/// points that do.
ContrastiveLoss contrastive_loss(std::span<const RealVector> points, std::span<const int> labels,
                                 const ContrastiveLossConfig& cfg = {});

}  // namespace hqrn
