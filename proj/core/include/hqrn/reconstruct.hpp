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
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hqrn/blocks.hpp"
#include "hqrn/linalg.hpp"
#include "hqrn/pauli.hpp"

namespace hqrn {

/// W = lambda (w_pos - w_neg) with w_pos = (|W| + W) / 2, w_neg = (|W| - W) / 2.
struct SignSplit {
  RealMatrix w_pos;
  RealMatrix w_neg;
  double lambda = 1.0;
};

/// w_pos = c * (m_plus)^2 and w_neg = c * (m_minus)^2 entrywise, with both
/// contractions of spectral norm at most one.
struct ContractionPair {
  RealMatrix m_plus;
  RealMatrix m_minus;
  double c = 1.0;
};

struct TrotterSpec {
  int order = 2;  // even, >= 2
  int steps = 64;

  void validate() const;
};

/// exp(i angle P).
struct PauliRotation {
  PauliString pauli;
  double angle = 0.0;
};

struct TrotterResult {
  /// Gates of one S_order(1/steps) step in application order. The compiled
  /// circuit repeats this list `repetitions` times.
  std::vector<PauliRotation> step_factors;
  int repetitions = 0;
  std::size_t term_count = 0;
  ComplexMatrix approx;

  /// Every gate of the compiled circuit, in application order.
  std::vector<PauliRotation> flattened() const;
};

struct ReconstructedBlock {
  /// Acts on the dilated 2d-dimensional space and reads out the first d
  /// (ancilla |0>) outcomes; the other d are discarded.
  QrbParams params;
  RealMatrix w_rec;      // d x d weights realized by params
  double max_abs_error = 0.0;
  std::optional<TrotterSpec> trotter;  // nullopt: exact dilation
  Index classical_dim = 0;
};

SignSplit split_weights(const RealMatrix& w);
ContractionPair to_contractions(const SignSplit& split);

/// [[M, sqrt(I - M M^dag)], [sqrt(I - M^dag M), -M^dag]]. Singular values in
/// (1, 1 + 1e-9] are treated as 1 inside the square-root blocks.
ComplexMatrix halmos_dilate(const ComplexMatrix& m);

/// p_k = 1 / (4 - 4^{1/(2k-1)}) for k >= 2.
double suzuki_coefficient(int k);

/// Relative step lengths of the second-order blocks making up one step of
/// the order-`order` Suzuki formula; they sum to one.
std::vector<double> suzuki_weights(int order);

/// Compiles u = exp(iH), H = -i log(u), split into Pauli-string terms, into
/// [S_order(1/steps)]^steps built from exact term exponentials.
TrotterResult trotterize(const ComplexMatrix& u, const TrotterSpec& spec);

/// Weights gamma (|U+[n,m]|^2 - |U-[n,m]|^2) over the top-left d x d block.
RealMatrix reconstructed_weights(const QrbParams& params, Index classical_dim);

ReconstructedBlock reconstruct_block(const RealMatrix& w, const RealVector& bias, double alpha,
                                     const std::optional<TrotterSpec>& trotter);

/// diag(y) in the top-left d x d block of a 2d x 2d density matrix.
DensityMatrix embed_classical_input(const SimplexVector& y, Index d);

/// The first d populations of a dilated state.
RealVector top_block_populations(const DensityMatrix& rho, Index d);

/// {"max_abs_error": e, "order": p, "steps": r, "gamma": c}
nlohmann::json reconstruction_report(const ReconstructedBlock& block);

}  // namespace hqrn
