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
#include <iosfwd>
#include <string_view>
#include <variant>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "hqrn/linalg.hpp"

namespace hqrn {

enum class BellPair { kPhi, kPsi };  // (|00> + e^{i phi}|11>), (|01> + e^{i phi}|10>)
enum class StateFamily { kWerner, kRandomSeparable, kAdversarial };
enum class EntanglementLabel : int { kEntangled = 1, kSeparable = -1 };

std::string_view to_string(BellPair p);
std::string_view to_string(StateFamily f);

struct BellSpec {
  BellPair pair = BellPair::kPhi;
  double phase = 0.0;  // [0, 2 pi)

  void validate() const;
};

struct WernerRecord {
  double p_b = 0.0;
  BellSpec bell;
};

struct SeparableRecord {
  int num_terms = 1;
  std::vector<double> weights;
  std::vector<double> mixing_a;  // mu of each rho_A factor
  std::vector<double> mixing_b;
  std::uint64_t seed = 0;
};

struct AdversarialRecord {
  double p_ad = 0.0;
  BellSpec mimic;
  std::uint64_t seed = 0;
};

using StateRecord = std::variant<WernerRecord, SeparableRecord, AdversarialRecord>;

struct LabeledState {
  DensityMatrix state;
  EntanglementLabel label;
  StateFamily family;
  StateRecord params;
};

/// |Phi_B><Phi_B| with entries assembled directly (diagonal exactly 1/2).
ComplexMatrix bell_projector(const BellSpec& bell);

/// p_b |Phi_B><Phi_B| + (1 - p_b) I / 4; entangled iff p_b > 1/3.
LabeledState werner_state(double p_b, const BellSpec& bell);

/// sum_k w_k rho_A^(k) (x) rho_B^(k), factors (|psi><psi| + mu I/2) / (1 + mu)
/// with Haar-random |psi> and mu ~ U[0, 1], weights uniform on the simplex.
LabeledState random_separable(int num_terms, std::uint64_t seed);

/// p_ad sigma + (1 - p_ad) I / 4 where sigma is the classically correlated
/// mixture with the same computational-basis statistics as the Bell target.
/// That mixture is the only separable state matching a Bell state's Z
/// statistics exactly, so `seed` is recorded but draws nothing.
LabeledState adversarial_state(double p_ad, const BellSpec& mimic, std::uint64_t seed = 0);

/// Transpose of the second qubit of a two-qubit operator.
ComplexMatrix partial_transpose_b(const ComplexMatrix& rho);

/// Peres-Horodecki: true iff the partial transpose has an eigenvalue below
/// -1e-10. Exact for two qubits.
bool ppt_is_entangled(const DensityMatrix& rho);

struct DatasetCounts {
  std::size_t werner = 0;
  std::size_t random_separable = 0;
  std::size_t adversarial = 0;

  std::size_t total() const noexcept { return werner + random_separable + adversarial; }
};

/// Werner states (p_b ~ U[0,1]), random separable states (1..4 terms) and
/// adversarial states (p_ad ~ U[0,1]), in that order. Bell pair and phase are
/// drawn uniformly. Item i uses derive_seed(seed, i).
std::vector<LabeledState> build_dataset(const DatasetCounts& counts, std::uint64_t seed);

/// Pairs (Werner(p, B), adversarial(p, B)) with p ~ U(1/3, 1]: the two
/// members have identical Z statistics but opposite labels.
std::vector<LabeledState> build_mimic_pairs(std::size_t num_pairs, std::uint64_t seed);

nlohmann::json to_json(const LabeledState& s);
LabeledState labeled_state_from_json(const nlohmann::json& j);
void write_jsonl(std::ostream& os, const std::vector<LabeledState>& states);
std::vector<LabeledState> read_jsonl(std::istream& is);

}  // namespace hqrn
