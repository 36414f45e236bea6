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

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hqrn/linalg.hpp"

namespace hqrn {

enum class Activation { kReLU, kSigmoid };

std::string_view to_string(Activation a);
Activation activation_from_string(std::string_view name);

/// One quantum residual block: measure U+ rho U+^dag and U- rho U-^dag in the
/// computational basis, activate gamma (p+ - p-) + bias, mix with the input.
/// A bias shorter than dim() reads out only the first bias.size() outcomes;
/// the remaining outcomes are discarded and get h = 0.
struct QrbParams {
  ComplexMatrix u_plus;
  ComplexMatrix u_minus;
  double gamma = 1.0;
  RealVector bias;
  double alpha = 0.5;

  Index dim() const noexcept { return u_plus.rows(); }
  Index readout_dim() const noexcept { return bias.size(); }
  /// Full check including unitarity (O(d^3)); forward passes only check dims.
  void validate() const;
};

/// The diagonal-input reduction of a QRB: an affine map, normalized
/// activation and convex residual mix.
struct CrbParams {
  RealMatrix weight;  // row = output index n, column = input index m
  RealVector bias;
  double alpha = 0.5;

  Index dim() const noexcept { return weight.rows(); }
  void validate() const;
};

/// f(z_n) / sum_l f(z_l); uniform when the denominator is below 1e-20.
SimplexVector normalized_activation(const RealVector& z, Activation kind);

struct QrbOutput {
  DensityMatrix rho;
  SimplexVector h;
  SimplexVector p_plus;
  SimplexVector p_minus;
};

struct CrbOutput {
  SimplexVector y;
  SimplexVector h;
};

QrbOutput qrb_forward(const DensityMatrix& rho, const QrbParams& params, Activation kind);

/// h from measured distributions: the normalized activation of the readout
/// outcomes, zero-padded to dim().
SimplexVector readout_activation(const SimplexVector& p_plus, const SimplexVector& p_minus,
                                 const QrbParams& params, Activation kind);
CrbOutput crb_forward(const SimplexVector& y, const CrbParams& params, Activation kind);

/// gamma (|<n|U+|phi_m>|^2 - |<n|U-|phi_m>|^2) with row n, column m. Without a
/// basis the computational basis is used (the classical weight matrix);
/// with the eigenbasis of rho0 this is the overlap matrix of the closed form.
RealMatrix weights_from_unitaries(const QrbParams& params,
                                  const std::optional<ComplexMatrix>& basis = std::nullopt);

struct CascadeTrace {
  DensityMatrix final_state;
  std::vector<QrbOutput> steps;
};

CascadeTrace cascade_qrb(const DensityMatrix& rho0, std::span<const QrbParams> blocks,
                         Activation kind);

/// Non-iterative evaluation of a QRB cascade: computes the block
/// coefficients h^(1..k) from the weight and overlap matrices only, then
/// assembles rho^(k) = (1-a) sum_j a^j diag(h^(k-j)) + a^k rho0.
DensityMatrix closed_form_output(const DensityMatrix& rho0, std::span<const QrbParams> blocks,
                                 Activation kind);

SimplexVector cascade_crb(const SimplexVector& y0, std::span<const CrbParams> blocks,
                          Activation kind);

nlohmann::json to_json(const QrbParams& p);
nlohmann::json to_json(const CrbParams& p);
QrbParams qrb_params_from_json(const nlohmann::json& j);
CrbParams crb_params_from_json(const nlohmann::json& j);

}  // namespace hqrn
