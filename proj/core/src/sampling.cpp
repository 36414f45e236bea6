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

#include "hqrn/sampling.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "hqrn/error.hpp"

namespace hqrn {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t run_seed, std::uint64_t index) {
  return splitmix64(splitmix64(run_seed) ^ (index * 0xd1342543de82ef95ULL + 1));
}

ShotConfig ShotConfig::finite(std::uint64_t shots, std::uint64_t seed) {
  if (shots == 0) throw PreconditionError("ShotConfig: shots per branch must be >= 1");
  return {shots, seed};
}

void EnsembleLedger::record_block(std::uint64_t shots_per_branch) {
  per_block_.push_back(4 * shots_per_branch);
}

std::uint64_t EnsembleLedger::total_initial_copies() const noexcept {
  return per_block_.empty() ? 0 : per_block_.front();
}

SimplexVector sample_distribution(const SimplexVector& p, std::uint64_t n_shots,
                                  std::uint64_t seed) {
  if (n_shots == 0) throw PreconditionError("sample_distribution: n_shots must be >= 1");
  std::mt19937_64 rng(splitmix64(seed));
  // Sequential conditional binomials give an exact multinomial draw.
  RealVector freq = RealVector::Zero(p.dim());
  std::uint64_t remaining = n_shots;
  double mass_left = 1.0;
  for (Index i = 0; i < p.dim() && remaining > 0; ++i) {
    std::uint64_t count = remaining;
    if (i + 1 < p.dim()) {
      const double q = mass_left > 0.0 ? std::clamp(p[i] / mass_left, 0.0, 1.0) : 0.0;
      count = std::binomial_distribution<std::uint64_t>(remaining, q)(rng);
    }
    freq[i] = static_cast<double>(count);
    remaining -= count;
    mass_left -= p[i];
  }
  return SimplexVector::assume_valid(freq / static_cast<double>(n_shots));
}

SampledQrbOutput qrb_forward_sampled(const DensityMatrix& rho, const QrbParams& params,
                                     Activation kind, const ShotConfig& cfg,
                                     EnsembleLedger* ledger) {
  if (cfg.is_infinite()) {
    QrbOutput exact = qrb_forward(rho, params, kind);
    return {std::move(exact.rho), std::move(exact.h), std::move(exact.p_plus),
            std::move(exact.p_minus), 0};
  }
  const std::uint64_t shots = *cfg.shots_per_branch;
  if (shots == 0) throw PreconditionError("qrb_forward_sampled: shots per branch must be >= 1");
  if (params.dim() != rho.dim() || params.readout_dim() < 1 ||
      params.readout_dim() > params.dim()) {
    throw DimensionError("qrb_forward_sampled: block dim does not match state");
  }

  SimplexVector p_plus = sample_distribution(measure_z(conjugate(params.u_plus, rho)), shots,
                                             derive_seed(cfg.seed, 0));
  SimplexVector p_minus = sample_distribution(measure_z(conjugate(params.u_minus, rho)), shots,
                                              derive_seed(cfg.seed, 1));
  SimplexVector h = readout_activation(p_plus, p_minus, params, kind);

  ComplexMatrix out = params.alpha * rho.matrix();
  out.diagonal() += ((1.0 - params.alpha) * h.values()).cast<Complex>();
  if (ledger) ledger->record_block(shots);
  return {DensityMatrix::assume_valid(std::move(out)), std::move(h), std::move(p_plus),
          std::move(p_minus), 4 * shots};
}

double disagreement_rate(std::span<const int> labels_a, std::span<const int> labels_b) {
  if (labels_a.empty()) throw PreconditionError("disagreement_rate: empty label lists");
  if (labels_a.size() != labels_b.size()) {
    throw DimensionError("disagreement_rate: label lists differ in length");
  }
  std::size_t differ = 0;
  for (std::size_t i = 0; i < labels_a.size(); ++i) differ += labels_a[i] != labels_b[i];
  return static_cast<double>(differ) / static_cast<double>(labels_a.size());
}

ConfusionFractions confusion_decomposition(std::span<const int> pred_a,
                                           std::span<const int> pred_b,
                                           std::span<const int> truth) {
  if (pred_a.size() != truth.size() || pred_b.size() != truth.size()) {
    throw DimensionError("confusion_decomposition: label lists differ in length");
  }
  if (truth.empty()) throw PreconditionError("confusion_decomposition: empty label lists");
  std::size_t cells[4] = {0, 0, 0, 0};
  for (std::size_t i = 0; i < truth.size(); ++i) {
    const bool a = pred_a[i] == truth[i];
    const bool b = pred_b[i] == truth[i];
    ++cells[a && b ? 0 : a ? 1 : b ? 2 : 3];
  }
  const auto n = static_cast<double>(truth.size());
  return {cells[0] / n, cells[1] / n, cells[2] / n, cells[3] / n};
}

}  // namespace hqrn
