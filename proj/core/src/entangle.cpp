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

#include "hqrn/entangle.hpp"

#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <string>

#include <nlohmann/json.hpp>

#include "hqrn/error.hpp"
#include "hqrn/sampling.hpp"

namespace hqrn {
namespace {

constexpr double kPptThreshold = -1e-10;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::pair<Index, Index> pair_indices(BellPair p) {
  return p == BellPair::kPhi ? std::pair<Index, Index>{0, 3} : std::pair<Index, Index>{1, 2};
}

ComplexMatrix mix_with_identity(double p, const ComplexMatrix& sigma) {
  return p * sigma + (1.0 - p) * 0.25 * ComplexMatrix::Identity(4, 4);
}

void check_probability(double p, const char* who) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw PreconditionError(std::string(who) + ": mixing weight must lie in [0, 1], got " +
                            std::to_string(p));
  }
}

void check_label(const LabeledState& s) {
  const bool entangled = ppt_is_entangled(s.state);
  if (entangled != (s.label == EntanglementLabel::kEntangled)) {
    throw PreconditionError(std::string("generated ") + std::string(to_string(s.family)) +
                            " state fails the PPT label check");
  }
}

ComplexMatrix random_qubit_factor(std::mt19937_64& rng, double& mu_out) {
  std::normal_distribution<double> gauss;
  Eigen::Vector2cd psi(Complex(gauss(rng), gauss(rng)), Complex(gauss(rng), gauss(rng)));
  psi.normalize();
  const double mu = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  mu_out = mu;
  return (psi * psi.adjoint() + 0.5 * mu * ComplexMatrix::Identity(2, 2)) / (1.0 + mu);
}

BellSpec random_bell(std::mt19937_64& rng) {
  const BellPair pair =
      std::bernoulli_distribution(0.5)(rng) ? BellPair::kPsi : BellPair::kPhi;
  double phase = std::uniform_real_distribution<double>(0.0, kTwoPi)(rng);
  if (phase >= kTwoPi) phase = 0.0;
  return {pair, phase};
}

nlohmann::json bell_json(const BellSpec& b) {
  return {{"pair", to_string(b.pair)}, {"phase", b.phase}};
}

BellSpec bell_from_json(const nlohmann::json& j) {
  const auto pair = j.at("pair").get<std::string>();
  BellSpec b{pair == "phi" ? BellPair::kPhi : BellPair::kPsi, j.at("phase").get<double>()};
  if (pair != "phi" && pair != "psi") throw DataError("unknown Bell pair '" + pair + "'");
  return b;
}

}  // namespace

std::string_view to_string(BellPair p) { return p == BellPair::kPhi ? "phi" : "psi"; }

std::string_view to_string(StateFamily f) {
  switch (f) {
    case StateFamily::kWerner: return "werner";
    case StateFamily::kRandomSeparable: return "random_separable";
    case StateFamily::kAdversarial: return "adversarial";
  }
  return "unknown";
}

void BellSpec::validate() const {
  if (!(phase >= 0.0 && phase < kTwoPi)) {
    throw PreconditionError("BellSpec: phase must lie in [0, 2 pi)");
  }
}

ComplexMatrix bell_projector(const BellSpec& bell) {
  bell.validate();
  const auto [a, b] = pair_indices(bell.pair);
  ComplexMatrix proj = ComplexMatrix::Zero(4, 4);
  proj(a, a) = 0.5;
  proj(b, b) = 0.5;
  proj(b, a) = 0.5 * std::polar(1.0, bell.phase);
  proj(a, b) = std::conj(proj(b, a));
  return proj;
}

LabeledState werner_state(double p_b, const BellSpec& bell) {
  check_probability(p_b, "werner_state");
  LabeledState s{DensityMatrix(mix_with_identity(p_b, bell_projector(bell))),
                 p_b > 1.0 / 3.0 ? EntanglementLabel::kEntangled : EntanglementLabel::kSeparable,
                 StateFamily::kWerner, WernerRecord{p_b, bell}};
  check_label(s);
  return s;
}

LabeledState random_separable(int num_terms, std::uint64_t seed) {
  if (num_terms < 1) throw PreconditionError("random_separable: num_terms must be >= 1");
  std::mt19937_64 rng(splitmix64(seed));
  SeparableRecord rec;
  rec.num_terms = num_terms;
  rec.seed = seed;

  // Normalized exponentials are uniform on the simplex.
  std::exponential_distribution<double> expo(1.0);
  double total = 0.0;
  for (int k = 0; k < num_terms; ++k) {
    rec.weights.push_back(expo(rng));
    total += rec.weights.back();
  }
  for (double& w : rec.weights) w /= total;

  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  for (int k = 0; k < num_terms; ++k) {
    double mu_a = 0.0, mu_b = 0.0;
    const ComplexMatrix a = random_qubit_factor(rng, mu_a);
    const ComplexMatrix b = random_qubit_factor(rng, mu_b);
    rec.mixing_a.push_back(mu_a);
    rec.mixing_b.push_back(mu_b);
    rho += rec.weights[static_cast<std::size_t>(k)] * kron(a, b);
  }
  rho = 0.5 * (rho + rho.adjoint());
  rho /= rho.trace().real();
  LabeledState s{DensityMatrix(std::move(rho)), EntanglementLabel::kSeparable,
                 StateFamily::kRandomSeparable, std::move(rec)};
  check_label(s);
  return s;
}

LabeledState adversarial_state(double p_ad, const BellSpec& mimic, std::uint64_t seed) {
  check_probability(p_ad, "adversarial_state");
  mimic.validate();
  const auto [a, b] = pair_indices(mimic.pair);
  ComplexMatrix sigma = ComplexMatrix::Zero(4, 4);
  sigma(a, a) = 0.5;
  sigma(b, b) = 0.5;
  LabeledState s{DensityMatrix(mix_with_identity(p_ad, sigma)), EntanglementLabel::kSeparable,
                 StateFamily::kAdversarial, AdversarialRecord{p_ad, mimic, seed}};
  check_label(s);
  return s;
}

ComplexMatrix partial_transpose_b(const ComplexMatrix& rho) {
  if (rho.rows() != 4 || rho.cols() != 4) {
    throw DimensionError("partial_transpose_b: expected a 4x4 two-qubit operator");
  }
  ComplexMatrix out(4, 4);
  for (Index a = 0; a < 2; ++a) {
    for (Index b = 0; b < 2; ++b) {
      for (Index a2 = 0; a2 < 2; ++a2) {
        for (Index b2 = 0; b2 < 2; ++b2) {
          out(2 * a + b, 2 * a2 + b2) = rho(2 * a + b2, 2 * a2 + b);
        }
      }
    }
  }
  return out;
}

bool ppt_is_entangled(const DensityMatrix& rho) {
  if (rho.dim() != 4) throw DimensionError("ppt_is_entangled: expected a two-qubit state");
  const HermitianEigen eig = eig_hermitian(partial_transpose_b(rho.matrix()));
  return eig.values.minCoeff() < kPptThreshold;
}

std::vector<LabeledState> build_dataset(const DatasetCounts& counts, std::uint64_t seed) {
  std::vector<LabeledState> out;
  out.reserve(counts.total());
  std::uint64_t index = 0;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (std::size_t i = 0; i < counts.werner; ++i, ++index) {
    std::mt19937_64 rng(derive_seed(seed, index));
    const double p_b = unit(rng);
    out.push_back(werner_state(p_b, random_bell(rng)));
  }
  for (std::size_t i = 0; i < counts.random_separable; ++i, ++index) {
    std::mt19937_64 rng(derive_seed(seed, index));
    const int terms = std::uniform_int_distribution<int>(1, 4)(rng);
    out.push_back(random_separable(terms, rng()));
  }
  for (std::size_t i = 0; i < counts.adversarial; ++i, ++index) {
    std::mt19937_64 rng(derive_seed(seed, index));
    const double p_ad = unit(rng);
    const BellSpec mimic = random_bell(rng);
    out.push_back(adversarial_state(p_ad, mimic, rng()));
  }
  return out;
}

std::vector<LabeledState> build_mimic_pairs(std::size_t num_pairs, std::uint64_t seed) {
  std::vector<LabeledState> out;
  out.reserve(2 * num_pairs);
  for (std::size_t i = 0; i < num_pairs; ++i) {
    std::mt19937_64 rng(derive_seed(seed, i));
    // 1 - U[0,1) lies in (0, 1]; map it onto (1/3, 1].
    const double p = 1.0 / 3.0 + (2.0 / 3.0) * (1.0 - std::uniform_real_distribution<double>(
                                                           0.0, 1.0)(rng));
    const BellSpec bell = random_bell(rng);
    out.push_back(werner_state(p, bell));
    out.push_back(adversarial_state(p, bell, rng()));
  }
  return out;
}

nlohmann::json to_json(const LabeledState& s) {
  nlohmann::json j{{"family", to_string(s.family)},
                   {"label", static_cast<int>(s.label)},
                   {"state", matrix_to_json(s.state.matrix())}};
  std::visit(
      [&j](const auto& rec) {
        using T = std::decay_t<decltype(rec)>;
        if constexpr (std::is_same_v<T, WernerRecord>) {
          j["params"] = {{"p_b", rec.p_b}, {"bell", bell_json(rec.bell)}};
        } else if constexpr (std::is_same_v<T, SeparableRecord>) {
          j["params"] = {{"num_terms", rec.num_terms}, {"weights", rec.weights},
                         {"mixing_a", rec.mixing_a},   {"mixing_b", rec.mixing_b},
                         {"seed", rec.seed}};
        } else {
          j["params"] = {{"p_ad", rec.p_ad}, {"mimic", bell_json(rec.mimic)}, {"seed", rec.seed}};
        }
      },
      s.params);
  return j;
}

LabeledState labeled_state_from_json(const nlohmann::json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    const int label = j.at("label").get<int>();
    if (label != 1 && label != -1) throw DataError("state JSON: label must be +1 or -1");
    DensityMatrix state(complex_matrix_from_json(j.at("state")));
    const auto& p = j.at("params");
    StateRecord rec;
    StateFamily fam;
    if (family == "werner") {
      fam = StateFamily::kWerner;
      rec = WernerRecord{p.at("p_b").get<double>(), bell_from_json(p.at("bell"))};
    } else if (family == "random_separable") {
      fam = StateFamily::kRandomSeparable;
      rec = SeparableRecord{p.at("num_terms").get<int>(),
                            p.at("weights").get<std::vector<double>>(),
                            p.at("mixing_a").get<std::vector<double>>(),
                            p.at("mixing_b").get<std::vector<double>>(),
                            p.at("seed").get<std::uint64_t>()};
    } else if (family == "adversarial") {
      fam = StateFamily::kAdversarial;
      rec = AdversarialRecord{p.at("p_ad").get<double>(), bell_from_json(p.at("mimic")),
                              p.at("seed").get<std::uint64_t>()};
    } else {
      throw DataError("state JSON: unknown family '" + family + "'");
    }
    LabeledState s{std::move(state), static_cast<EntanglementLabel>(label), fam, std::move(rec)};
    if (ppt_is_entangled(s.state) != (s.label == EntanglementLabel::kEntangled)) {
      throw DataError("state JSON: label disagrees with the PPT oracle");
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("state JSON: ") + e.what());
  } catch (const PreconditionError& e) {
    throw DataError(std::string("state JSON: ") + e.what());
  }
}

void write_jsonl(std::ostream& os, const std::vector<LabeledState>& states) {
  for (const LabeledState& s : states) os << to_json(s).dump() << '\n';
}

std::vector<LabeledState> read_jsonl(std::istream& is) {
  std::vector<LabeledState> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    try {
      out.push_back(labeled_state_from_json(nlohmann::json::parse(line)));
    } catch (const nlohmann::json::exception& e) {
      throw DataError("dataset line " + std::to_string(line_no) + ": " + e.what());
    } catch (const DataError& e) {
      throw DataError("dataset line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace hqrn
