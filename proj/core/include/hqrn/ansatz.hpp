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

#include <array>
#include <span>

#include "hqrn/linalg.hpp"

namespace hqrn {

inline constexpr std::size_t kAnsatzParams = 15;

/// Two-qubit KAK-form unitary
///
///   U = (A1 (x) A2) exp(i (tx XX + ty YY + tz ZZ)) (B1 (x) B2)
///
/// with every single-qubit factor Rz(a) Ry(b) Rz(c). Parameter layout:
/// theta[0..2] = A1, [3..5] = A2, [6..8] = (tx, ty, tz), [9..11] = B1,
/// [12..14] = B2. theta = 0 gives the identity.
ComplexMatrix ansatz_unitary(std::span<const double, kAnsatzParams> theta);

/// Rz(a) Ry(b) Rz(c).
Eigen::Matrix2cd single_qubit_rotation(double a, double b, double c);

/// exp(i (tx XX + ty YY + tz ZZ)).
Eigen::Matrix4cd canonical_entangler(double tx, double ty, double tz);

}  // namespace hqrn
