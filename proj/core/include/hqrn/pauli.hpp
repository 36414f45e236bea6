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
#include <string>
#include <vector>

#include "hqrn/linalg.hpp"

namespace hqrn {

/// An n-qubit Pauli string in symplectic form. Qubit 0 is the leftmost label
/// character and the most significant bit of a basis index. A qubit with both
/// bits set is a Y.
struct PauliString {
  std::uint32_t x_mask = 0;
  std::uint32_t z_mask = 0;

  std::string label(int num_qubits) const;
  static PauliString from_label(const std::string& label);
  ComplexMatrix matrix(int num_qubits) const;
  friend bool operator==(const PauliString&, const PauliString&) = default;
};

struct PauliTerm {
  PauliString pauli;
  double coefficient = 0.0;
};

/// Coefficients tr(P H) / dim of a Hermitian H, for every Pauli string whose
/// coefficient magnitude exceeds `cutoff`, in lexicographic label order
/// (I < X < Y < Z).
std::vector<PauliTerm> pauli_decompose(const ComplexMatrix& h, double cutoff = 1e-12);

/// In-place s <- exp(i angle P) s. `s` is row-major so the row swaps stay
/// contiguous.
using RowMajorComplexMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
void apply_pauli_rotation(const PauliString& p, double angle, RowMajorComplexMatrix& s);

}  // namespace hqrn
