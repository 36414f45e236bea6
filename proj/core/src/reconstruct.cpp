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

#include "hqrn/reconstruct.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "hqrn/error.hpp"

namespace hqrn {

void TrotterSpec::validate() const {
  if (order < 2 || order % 2 != 0) {
    throw PreconditionError("TrotterSpec: order must be an even integer >= 2, got " +
                            std::to_string(order));
  }
  if (steps < 1) throw PreconditionError("TrotterSpec: steps must be >= 1");
}

std::vector<PauliRotation> TrotterResult::flattened() const {
  std::vector<PauliRotation> out;
  out.reserve(step_factors.size() * static_cast<std::size_t>(repetitions));
  for (int r = 0; r < repetitions; ++r) {
    out.insert(out.end(), step_factors.begin(), step_factors.end());
  }
  return out;
}

SignSplit split_weights(const RealMatrix& w) {
  if (!w.allFinite()) throw PreconditionError("split_weights: non-finite weight");
  const RealMatrix abs = w.cwiseAbs();
  return {0.5 * (abs + w), 0.5 * (abs - w), 1.0};
}

ContractionPair to_contractions(const SignSplit& split) {
  if (split.w_pos.rows() != split.w_neg.rows() || split.w_pos.cols() != split.w_neg.cols()) {
    throw DimensionError("to_contractions: w_pos and w_neg shapes differ");
  }
  const RealMatrix a_plus = split.w_pos.cwiseSqrt();
  const RealMatrix a_minus = split.w_neg.cwiseSqrt();
  const double n_plus = spectral_norm(a_plus.cast<Complex>());
  const double n_minus = spectral_norm(a_minus.cast<Complex>());
  const double c = std::max({n_plus * n_plus, n_minus * n_minus, 1e-12});
  const double scale = 1.0 / std::sqrt(c);
  return {a_plus * scale, a_minus * scale, c};
}

ComplexMatrix halmos_dilate(const ComplexMatrix& m) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError("halmos_dilate: expected a square matrix");
  }
  const Index d = m.rows();
  Eigen::BDCSVD<ComplexMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const RealVector sigma = svd.singularValues();
  if (sigma(0) > 1.0 + 1e-9) {
    throw PreconditionError("halmos_dilate: spectral norm " + std::to_string(sigma(0)) +
                            " exceeds 1");
  }
  // sqrt(I - M M^dag) = U sqrt(1 - s^2) U^dag and likewise with V.
  const RealVector defect = (1.0 - sigma.cwiseMin(1.0).array().square()).cwiseMax(0.0).sqrt();
  const ComplexMatrix left = svd.matrixU() * defect.cast<Complex>().asDiagonal() *
                             svd.matrixU().adjoint();
  const ComplexMatrix right = svd.matrixV() * defect.cast<Complex>().asDiagonal() *
                              svd.matrixV().adjoint();

  ComplexMatrix u(2 * d, 2 * d);
  u.topLeftCorner(d, d) = m;
  u.topRightCorner(d, d) = 0.5 * (left + left.adjoint());
  u.bottomLeftCorner(d, d) = 0.5 * (right + right.adjoint());
  u.bottomRightCorner(d, d) = -m.adjoint();
  return u;
}

double suzuki_coefficient(int k) {
  if (k == 1) throw PreconditionError("suzuki_coefficient: base formula has no coefficient");
  if (k < 1) throw PreconditionError("suzuki_coefficient: k must be >= 2");
  return 1.0 / (4.0 - std::pow(4.0, 1.0 / (2.0 * k - 1.0)));
}

std::vector<double> suzuki_weights(int order) {
  TrotterSpec{order, 1}.validate();
  std::vector<double> weights{1.0};
  for (int k = 2; 2 * k <= order; ++k) {
    const double p = suzuki_coefficient(k);
    std::vector<double> next;
    next.reserve(3 * weights.size());
    for (double scale : {p, 1.0 - 2.0 * p, p}) {
      for (double w : weights) next.push_back(scale * w);
    }
    weights = std::move(next);
  }
  return weights;
}

TrotterResult trotterize(const ComplexMatrix& u, const TrotterSpec& spec) {
  spec.validate();
  const ComplexMatrix h = matrix_log_unitary(u);
  const std::vector<PauliTerm> terms = pauli_decompose(h);
  const double dt = 1.0 / static_cast<double>(spec.steps);

  // S_2(t) = prod_j exp(i c_j t P_j / 2) in forward then reverse order.
  TrotterResult result;
  result.term_count = terms.size();
  result.repetitions = spec.steps;
  for (double w : suzuki_weights(spec.order)) {
    const double half = 0.5 * w * dt;
    for (const PauliTerm& t : terms) result.step_factors.push_back({t.pauli, half * t.coefficient});
    for (auto it = terms.rbegin(); it != terms.rend(); ++it) {
      result.step_factors.push_back({it->pauli, half * it->coefficient});
    }
  }

  RowMajorComplexMatrix step = RowMajorComplexMatrix::Identity(u.rows(), u.cols());
  for (const PauliRotation& g : result.step_factors) apply_pauli_rotation(g.pauli, g.angle, step);

  // step^steps by repeated squaring.
  ComplexMatrix base = step;
  ComplexMatrix acc = ComplexMatrix::Identity(u.rows(), u.cols());
  for (int e = spec.steps; e > 0; e >>= 1) {
    if (e & 1) acc = base * acc;
    if (e > 1) base = base * base;
  }
  result.approx = std::move(acc);
  return result;
}

RealMatrix reconstructed_weights(const QrbParams& params, Index classical_dim) {
  if (classical_dim <= 0 || classical_dim > params.dim()) {
    throw DimensionError("reconstructed_weights: bad classical dimension");
  }
  const Index d = classical_dim;
  return params.gamma * (params.u_plus.topLeftCorner(d, d).cwiseAbs2() -
                         params.u_minus.topLeftCorner(d, d).cwiseAbs2());
}

ReconstructedBlock reconstruct_block(const RealMatrix& w, const RealVector& bias, double alpha,
                                     const std::optional<TrotterSpec>& trotter) {
  const Index d = w.rows();
  if (w.cols() != d || bias.size() != d) {
    throw DimensionError("reconstruct_block: weight must be square and match bias");
  }
  if (!is_power_of_two(d)) {
    throw DimensionError("reconstruct_block: dimension " + std::to_string(d) +
                         " is not a power of two");
  }
  if (trotter) trotter->validate();

  const ContractionPair pair = to_contractions(split_weights(w));
  ComplexMatrix u_plus = halmos_dilate(pair.m_plus.cast<Complex>());
  ComplexMatrix u_minus = halmos_dilate(pair.m_minus.cast<Complex>());
  if (trotter) {
    u_plus = trotterize(u_plus, *trotter).approx;
    u_minus = trotterize(u_minus, *trotter).approx;
  }
  // lambda is fixed at 1, so gamma = lambda c = c.
  const double gamma = pair.c;

  // The d-entry bias reads out the ancilla-|0> outcomes only.
  ReconstructedBlock out{QrbParams{std::move(u_plus), std::move(u_minus), gamma, bias, alpha},
                         RealMatrix{}, 0.0, trotter, d};
  out.w_rec = reconstructed_weights(out.params, d);
  out.max_abs_error = (out.w_rec - w).cwiseAbs().maxCoeff();
  return out;
}

DensityMatrix embed_classical_input(const SimplexVector& y, Index d) {
  if (y.dim() != d) {
    throw DimensionError("embed_classical_input: vector dim " + std::to_string(y.dim()) +
                         " != " + std::to_string(d));
  }
  ComplexMatrix m = ComplexMatrix::Zero(2 * d, 2 * d);
  m.topLeftCorner(d, d).diagonal() = y.values().cast<Complex>();
  return DensityMatrix::assume_valid(std::move(m));
}

RealVector top_block_populations(const DensityMatrix& rho, Index d) {
  if (d <= 0 || d > rho.dim()) throw DimensionError("top_block_populations: bad dimension");
  return rho.matrix().diagonal().head(d).real().cwiseMax(0.0);
}

nlohmann::json reconstruction_report(const ReconstructedBlock& block) {
  nlohmann::json j{{"max_abs_error", block.max_abs_error}, {"gamma", block.params.gamma}};
  if (block.trotter) {
    j["order"] = block.trotter->order;
    j["steps"] = block.trotter->steps;
  } else {
    j["order"] = nullptr;
    j["steps"] = nullptr;
  }
  return j;
}

}  // namespace hqrn
