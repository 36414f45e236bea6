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

#include <complex>
#include <cstddef>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace hqrn {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using RealMatrix = Eigen::MatrixXd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Largest dimension accepted by the dense eigensolvers.
inline constexpr Index kMaxDenseDim = 256;

namespace tol {
inline constexpr double kDensityHermitian = 1e-12;
inline constexpr double kDensityTrace = 1e-12;
inline constexpr double kDensityEigen = -1e-10;
inline constexpr double kSimplexSum = 1e-10;
inline constexpr double kHermitianInput = 1e-10;
inline constexpr double kUnitary = 1e-9;
inline constexpr double kPsdClamp = 1e-9;
}  // namespace tol

/// Unit-trace positive-semidefinite Hermitian matrix.
///
/// The public constructor validates every invariant (Hermiticity, trace,
/// spectrum) and throws PreconditionError on violation. Operations whose
/// output is valid by construction (unitary conjugation, convex mixing) use
/// assume_valid() to skip the eigensolve.
class DensityMatrix {
 public:
  explicit DensityMatrix(ComplexMatrix m);

  static DensityMatrix assume_valid(ComplexMatrix m);
  static DensityMatrix maximally_mixed(Index dim);
  static DensityMatrix diagonal(const RealVector& populations);
  /// |psi><psi| for a normalized state vector.
  static DensityMatrix pure(const Eigen::VectorXcd& psi);

  const ComplexMatrix& matrix() const noexcept { return m_; }
  Index dim() const noexcept { return m_.rows(); }

 private:
  struct Unchecked {};
  DensityMatrix(ComplexMatrix m, Unchecked) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Nonnegative real vector summing to one.
class SimplexVector {
 public:
  explicit SimplexVector(RealVector v);

  static SimplexVector assume_valid(RealVector v);
  static SimplexVector uniform(Index dim);
  static SimplexVector basis(Index dim, Index hot);

  const RealVector& values() const noexcept { return v_; }
  Index dim() const noexcept { return v_.size(); }
  double operator[](Index i) const { return v_[i]; }

 private:
  struct Unchecked {};
  SimplexVector(RealVector v, Unchecked) : v_(std::move(v)) {}

  RealVector v_;
};

struct HermitianEigen {
  RealVector values;     // ascending
  ComplexMatrix vectors;  // columns are eigenvectors
};

// Deviation measures.
double max_abs(const ComplexMatrix& m);
double hermitian_deviation(const ComplexMatrix& m);
double unitary_deviation(const ComplexMatrix& u);
double spectral_norm(const ComplexMatrix& m);
bool is_power_of_two(Index n);
int log2_exact(Index n);

HermitianEigen eig_hermitian(const ComplexMatrix& m);
ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m);
/// Hermitian H with u = exp(iH), eigenphases in (-pi, pi].
ComplexMatrix matrix_log_unitary(const ComplexMatrix& u);
/// exp(i t H) for Hermitian H.
ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t = 1.0);
ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b);

/// U rho U^dagger, re-Hermitized.
DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho);
/// Computational-basis outcome probabilities <n|rho|n>.
SimplexVector measure_z(const DensityMatrix& rho);
/// Throws PreconditionError unless every DensityMatrix invariant holds.
void validate_density(const ComplexMatrix& m);

// {"rows": n, "cols": m, "re": [...], "im": [...]}, row-major.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
nlohmann::json matrix_to_json(const RealMatrix& m);
ComplexMatrix complex_matrix_from_json(const nlohmann::json& j);
/// Accepts a missing or all-zero "im" array.
RealMatrix real_matrix_from_json(const nlohmann::json& j);
nlohmann::json vector_to_json(const RealVector& v);
RealVector vector_from_json(const nlohmann::json& j);

}  // namespace hqrn
