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

#include <random>

#include "hqrn/linalg.hpp"

namespace hqrn {

/// Haar-distributed unitary: QR of a complex Ginibre matrix with the phases
/// of R's diagonal divided out.
ComplexMatrix haar_unitary(Index d, std::mt19937_64& rng);

/// Uniform draw from the probability simplex (normalized exponentials).
SimplexVector random_simplex(Index d, std::mt19937_64& rng);

/// G G^dag / tr(G G^dag) for a d x rank complex Ginibre G.
DensityMatrix random_density(Index d, Index rank, std::mt19937_64& rng);

}  // namespace hqrn
