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

#include "hqrn/blocks.hpp"

#include <cmath>
#include <string>

#include <nlohmann/json.hpp>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

constexpr double kActivationFloor = 1e-20;

double activate(double z, Activation kind) {
  switch (kind) {
    case Activation::kReLU:
      return z > 0.0 ? z : 0.0;
    case Activation::kSigmoid:
      return 1.0 / (1.0 + std::exp(-z));
  }
  return 0.0;
}

void check_alpha(double alpha, const char* who) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw PreconditionError(std::string(who) + ": alpha must lie in (0, 1), got " +
                            std::to_string(alpha));
  }
}

void check_qrb_shape(const QrbParams& p, Index state_dim) {
  const Index d = p.u_plus.rows();
  if (p.u_plus.cols() != d || p.u_minus.rows() != d || p.u_minus.cols() != d ||
      p.bias.size() < 1 || p.bias.size() > d) {
    throw DimensionError("QrbParams: inconsistent unitary/bias dimensions");
  }
  if (d != state_dim) {
    throw DimensionError("QrbParams: block dim " + std::to_string(d) + " vs state dim " +
                         std::to_string(state_dim));
  }
  check_alpha(p.alpha, "QrbParams");
}

void check_crb_shape(const CrbParams& p, Index state_dim) {
  const Index d = p.weight.rows();
  if (p.weight.cols() != d || p.bias.size() != d) {
    throw DimensionError("CrbParams: weight must be square and match bias");
  }
  if (d != state_dim) {
    throw DimensionError("CrbParams: block dim " + std::to_string(d) + " vs state dim " +
                         std::to_string(state_dim));
  }
  check_alpha(p.alpha, "CrbParams");
}

}  // namespace

std::string_view to_string(Activation a) {
  return a == Activation::kReLU ? "relu" : "sigmoid";
}

Activation activation_from_string(std::string_view name) {
  if (name == "relu") return Activation::kReLU;
  if (name == "sigmoid") return Activation::kSigmoid;
  throw ConfigError("unknown activation '" + std::string(name) + "'");
}

void QrbParams::validate() const {
  check_qrb_shape(*this, u_plus.rows());
  if (!std::isfinite(gamma) || !bias.allFinite()) {
    throw PreconditionError("QrbParams: non-finite gamma or bias");
  }
  if (unitary_deviation(u_plus) > tol::kUnitary || unitary_deviation(u_minus) > tol::kUnitary) {
    throw PreconditionError("QrbParams: U+ and U- must be unitary");
  }
}

void CrbParams::validate() const {
  check_crb_shape(*this, weight.rows());
  if (!weight.allFinite() || !bias.allFinite()) {
    throw PreconditionError("CrbParams: non-finite weight or bias");
  }
}

SimplexVector normalized_activation(const RealVector& z, Activation kind) {
  if (z.size() == 0) throw DimensionError("normalized_activation: empty input");
  if (!z.allFinite()) throw PreconditionError("normalized_activation: non-finite input");
  RealVector f = z.unaryExpr([kind](double v) { return activate(v, kind); });
  const double total = f.sum();
  if (total < kActivationFloor) return SimplexVector::uniform(z.size());
  return SimplexVector::assume_valid(f / total);
}

SimplexVector readout_activation(const SimplexVector& p_plus, const SimplexVector& p_minus,
                                const QrbParams& params, Activation kind) {
  const Index r = params.readout_dim();
  const RealVector z =
      params.gamma * (p_plus.values().head(r) - p_minus.values().head(r)) + params.bias;
  if (r == params.dim()) return normalized_activation(z, kind);
  RealVector h = RealVector::Zero(params.dim());
  h.head(r) = normalized_activation(z, kind).values();
  return SimplexVector::assume_valid(std::move(h));
}

QrbOutput qrb_forward(const DensityMatrix& rho, const QrbParams& params, Activation kind) {
  check_qrb_shape(params, rho.dim());
  SimplexVector p_plus = measure_z(conjugate(params.u_plus, rho));
  SimplexVector p_minus = measure_z(conjugate(params.u_minus, rho));
  SimplexVector h = readout_activation(p_plus, p_minus, params, kind);

  ComplexMatrix out = params.alpha * rho.matrix();
  out.diagonal() += ((1.0 - params.alpha) * h.values()).cast<Complex>();
  return {DensityMatrix::assume_valid(std::move(out)), std::move(h), std::move(p_plus),
          std::move(p_minus)};
}

CrbOutput crb_forward(const SimplexVector& y, const CrbParams& params, Activation kind) {
  check_crb_shape(params, y.dim());
  SimplexVector h = normalized_activation(params.weight * y.values() + params.bias, kind);
  RealVector out = (1.0 - params.alpha) * h.values() + params.alpha * y.values();
  return {SimplexVector::assume_valid(std::move(out)), std::move(h)};
}

RealMatrix weights_from_unitaries(const QrbParams& params,
                                  const std::optional<ComplexMatrix>& basis) {
  check_qrb_shape(params, params.u_plus.rows());
  if (!basis) {
    return params.gamma *
           (params.u_plus.cwiseAbs2() - params.u_minus.cwiseAbs2());
  }
  if (basis->rows() != params.dim() || basis->cols() != params.dim()) {
    throw DimensionError("weights_from_unitaries: basis dimension mismatch");
  }
  return params.gamma *
         ((params.u_plus * *basis).cwiseAbs2() - (params.u_minus * *basis).cwiseAbs2());
}

CascadeTrace cascade_qrb(const DensityMatrix& rho0, std::span<const QrbParams> blocks,
                         Activation kind) {
  CascadeTrace trace{rho0, {}};
  trace.steps.reserve(blocks.size());
  for (const QrbParams& block : blocks) {
    QrbOutput step = qrb_forward(trace.final_state, block, kind);
    trace.final_state = step.rho;
    trace.steps.push_back(std::move(step));
  }
  return trace;
}

DensityMatrix closed_form_output(const DensityMatrix& rho0, std::span<const QrbParams> blocks,
                                 Activation kind) {
  const Index d = rho0.dim();
  if (blocks.empty()) return rho0;
  const double alpha = blocks.front().alpha;
  for (const QrbParams& b : blocks) {
    check_qrb_shape(b, d);
    if (b.alpha != alpha) {
      throw PreconditionError("closed_form_output: all blocks must share alpha");
    }
  }

  // rho0 = sum_m h0_m |phi_m><phi_m|
  const HermitianEigen spectrum = eig_hermitian(rho0.matrix());
  const RealVector h0 = spectrum.values;

  // hs[j] holds h^(j+1).
  std::vector<RealVector> hs;
  hs.reserve(blocks.size());
  for (std::size_t k = 1; k <= blocks.size(); ++k) {
    const QrbParams& block = blocks[k - 1];
    const RealMatrix w = weights_from_unitaries(block, std::nullopt);
    const RealMatrix omega = weights_from_unitaries(block, spectrum.vectors);

    // sum_{j=0}^{k-2} a^j h^(k-1-j)
    RealVector history = RealVector::Zero(d);
    double power = 1.0;
    for (std::size_t j = 0; j + 2 <= k; ++j) {
      history += power * hs[k - 2 - j];
      power *= alpha;
    }
    const double carry = std::pow(alpha, static_cast<double>(k - 1));
    const Index r = block.readout_dim();
    const RealVector z =
        ((1.0 - alpha) * (w * history) + carry * (omega * h0)).head(r) + block.bias;
    RealVector h = RealVector::Zero(d);
    h.head(r) = normalized_activation(z, kind).values();
    hs.push_back(std::move(h));
  }

  const std::size_t k = blocks.size();
  RealVector diag = RealVector::Zero(d);
  double power = 1.0;
  for (std::size_t j = 0; j < k; ++j) {
    diag += power * hs[k - 1 - j];
    power *= alpha;
  }
  ComplexMatrix out = power * rho0.matrix();
  out.diagonal() += ((1.0 - alpha) * diag).cast<Complex>();
  return DensityMatrix::assume_valid(std::move(out));
}

SimplexVector cascade_crb(const SimplexVector& y0, std::span<const CrbParams> blocks,
                          Activation kind) {
  SimplexVector y = y0;
  for (const CrbParams& block : blocks) y = crb_forward(y, block, kind).y;
  return y;
}

nlohmann::json to_json(const QrbParams& p) {
  return {{"u_plus", matrix_to_json(p.u_plus)},
          {"u_minus", matrix_to_json(p.u_minus)},
          {"gamma", p.gamma},
          {"bias", vector_to_json(p.bias)},
          {"alpha", p.alpha}};
}

nlohmann::json to_json(const CrbParams& p) {
  return {{"weight", matrix_to_json(p.weight)},
          {"bias", vector_to_json(p.bias)},
          {"alpha", p.alpha}};
}

QrbParams qrb_params_from_json(const nlohmann::json& j) {
  try {
    QrbParams p{complex_matrix_from_json(j.at("u_plus")),
                complex_matrix_from_json(j.at("u_minus")), j.at("gamma").get<double>(),
                vector_from_json(j.at("bias")), j.at("alpha").get<double>()};
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("QrbParams JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw DataError(std::string("QrbParams JSON: ") + e.what());
  }
}

CrbParams crb_params_from_json(const nlohmann::json& j) {
  try {
    CrbParams p{real_matrix_from_json(j.at("weight")), vector_from_json(j.at("bias")),
                j.at("alpha").get<double>()};
    p.validate();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("CrbParams JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw DataError(std::string("CrbParams JSON: ") + e.what());
  }
}

}  // namespace hqrn
