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

#include "hqrn/random.hpp"

#include <cmath>

#include <Eigen/QR>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

ComplexMatrix ginibre(Index rows, Index cols, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss;
  ComplexMatrix g(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) g(i, j) = Complex(gauss(rng), gauss(rng));
  return g;
}

}  // namespace

ComplexMatrix haar_unitary(Index d, std::mt19937_64& rng) {
  if (d < 1) throw DimensionError("haar_unitary: dimension must be positive");
  Eigen::HouseholderQR<ComplexMatrix> qr(ginibre(d, d, rng));
  ComplexMatrix q = qr.householderQ();
  const ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < d; ++j) {
    const double mag = std::abs(r(j, j));
    if (mag > 0.0) q.col(j) *= r(j, j) / mag;
  }
  return q;
}

SimplexVector random_simplex(Index d, std::mt19937_64& rng) {
  if (d < 1) throw DimensionError("random_simplex: dimension must be positive");
  std::exponential_distribution<double> expo(1.0);
  RealVector v(d);
  for (Index i = 0; i < d; ++i) v[i] = expo(rng);
  return SimplexVector::assume_valid(v / v.sum());
}

DensityMatrix random_density(Index d, Index rank, std::mt19937_64& rng) {
  if (d < 1 || rank < 1) throw DimensionError("random_density: dimensions must be positive");
  const ComplexMatrix g = ginibre(d, rank, rng);
  ComplexMatrix rho = g * g.adjoint();
  rho /= rho.trace().real();
  rho = 0.5 * (rho + rho.adjoint()).eval();
  return DensityMatrix(std::move(rho));
}

}  // namespace hqrn
