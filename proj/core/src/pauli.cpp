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

#include "hqrn/pauli.hpp"

#include <bit>
#include <cmath>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

// <k xor x| P |k> = i^{#Y} (-1)^{popcount(k & z)}
Complex pauli_phase(const PauliString& p, std::uint32_t k) {
  static constexpr Complex kIPowers[4] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
  const int ys = std::popcount(p.x_mask & p.z_mask);
  const int sign_flips = std::popcount(k & p.z_mask);
  return kIPowers[(ys + 2 * sign_flips) & 3];
}

}  // namespace

std::string PauliString::label(int num_qubits) const {
  std::string out(static_cast<std::size_t>(num_qubits), 'I');
  for (int q = 0; q < num_qubits; ++q) {
    const std::uint32_t bit = 1u << (num_qubits - 1 - q);
    const bool x = x_mask & bit;
    const bool z = z_mask & bit;
    out[static_cast<std::size_t>(q)] = x ? (z ? 'Y' : 'X') : (z ? 'Z' : 'I');
  }
  return out;
}

PauliString PauliString::from_label(const std::string& label) {
  PauliString p;
  const int n = static_cast<int>(label.size());
  for (int q = 0; q < n; ++q) {
    const std::uint32_t bit = 1u << (n - 1 - q);
    switch (label[static_cast<std::size_t>(q)]) {
      case 'I': break;
      case 'X': p.x_mask |= bit; break;
      case 'Y': p.x_mask |= bit; p.z_mask |= bit; break;
      case 'Z': p.z_mask |= bit; break;
      default: throw PreconditionError("PauliString: bad label '" + label + "'");
    }
  }
  return p;
}

ComplexMatrix PauliString::matrix(int num_qubits) const {
  const Index dim = Index{1} << num_qubits;
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  for (std::uint32_t k = 0; k < static_cast<std::uint32_t>(dim); ++k) {
    m(k ^ x_mask, k) = pauli_phase(*this, k);
  }
  return m;
}

std::vector<PauliTerm> pauli_decompose(const ComplexMatrix& h, double cutoff) {
  const int n = log2_exact(h.rows());
  if (h.cols() != h.rows()) throw DimensionError("pauli_decompose: matrix must be square");
  if (n > 15) throw PreconditionError("pauli_decompose: too many qubits");
  const auto dim = static_cast<std::uint32_t>(h.rows());
  const std::uint64_t count = std::uint64_t{1} << (2 * n);

  std::vector<PauliTerm> terms;
  for (std::uint64_t code = 0; code < count; ++code) {
    // Base-4 digits, qubit 0 most significant: 0=I 1=X 2=Y 3=Z.
    PauliString p;
    for (int q = 0; q < n; ++q) {
      const auto digit = (code >> (2 * (n - 1 - q))) & 3u;
      const std::uint32_t bit = 1u << (n - 1 - q);
      if (digit == 1 || digit == 2) p.x_mask |= bit;
      if (digit == 2 || digit == 3) p.z_mask |= bit;
    }
    // tr(P H) = sum_k P[k^x, k] H[k, k^x]
    Complex acc{0.0, 0.0};
    for (std::uint32_t k = 0; k < dim; ++k) acc += pauli_phase(p, k) * h(k, k ^ p.x_mask);
    const double c = acc.real() / static_cast<double>(dim);
    if (std::abs(c) > cutoff) terms.push_back({p, c});
  }
  return terms;
}

void apply_pauli_rotation(const PauliString& p, double angle, RowMajorComplexMatrix& s) {
  const double c = std::cos(angle);
  const double sn = std::sin(angle);
  const auto dim = static_cast<std::uint32_t>(s.rows());
  if (p.x_mask == 0) {
    // Diagonal Pauli: each row picks up exp(i angle (+-1)).
    for (std::uint32_t k = 0; k < dim; ++k) {
      const double sign = pauli_phase(p, k).real();
      s.row(k) *= Complex(c, sn * sign);
    }
    return;
  }
  const Complex i_sin{0.0, sn};
  for (std::uint32_t k = 0; k < dim; ++k) {
    const std::uint32_t partner = k ^ p.x_mask;
    if (partner < k) continue;
    // (P s)[partner] = phase(k) s[k];  (P s)[k] = phase(partner) s[partner]
    const Complex to_partner = i_sin * pauli_phase(p, k);
    const Complex to_k = i_sin * pauli_phase(p, partner);
    for (Index col = 0; col < s.cols(); ++col) {
      const Complex a = s(k, col);
      const Complex b = s(partner, col);
      s(k, col) = c * a + to_k * b;
      s(partner, col) = c * b + to_partner * a;
    }
  }
}

}  // namespace hqrn
