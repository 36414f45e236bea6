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

#include "hqrn/linalg.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <nlohmann/json.hpp>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

std::string fmt_double(double x) {
  std::ostringstream os;
  os.precision(3);
  os << std::scientific << x;
  return os.str();
}

void require_square(const ComplexMatrix& m, const char* what) {
  if (m.rows() != m.cols() || m.rows() == 0) {
    throw DimensionError(std::string(what) + ": expected a nonempty square matrix, got " +
                         std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_dense_dim(Index n, const char* what) {
  if (n > kMaxDenseDim) {
    throw PreconditionError(std::string(what) + ": dimension " + std::to_string(n) +
                            " exceeds dense limit " + std::to_string(kMaxDenseDim));
  }
}

bool all_finite(const ComplexMatrix& m) {
  return m.real().allFinite() && m.imag().allFinite();
}

}  // namespace

// ---------------------------------------------------------------------------
// DensityMatrix / SimplexVector

void validate_density(const ComplexMatrix& m) {
  require_square(m, "DensityMatrix");
  if (!all_finite(m)) throw PreconditionError("DensityMatrix: non-finite entry");
  const double herm = hermitian_deviation(m);
  if (herm > tol::kDensityHermitian) {
    throw PreconditionError("DensityMatrix: not Hermitian (deviation " + fmt_double(herm) + ")");
  }
  const Complex tr = m.trace();
  if (std::abs(tr.real() - 1.0) > tol::kDensityTrace || std::abs(tr.imag()) > tol::kDensityTrace) {
    throw PreconditionError("DensityMatrix: trace " + fmt_double(tr.real()) + " != 1");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < tol::kDensityEigen) {
    throw PreconditionError("DensityMatrix: negative eigenvalue " + fmt_double(min_eig));
  }
}

DensityMatrix::DensityMatrix(ComplexMatrix m) : m_(std::move(m)) { validate_density(m_); }

DensityMatrix DensityMatrix::assume_valid(ComplexMatrix m) {
  return DensityMatrix(std::move(m), Unchecked{});
}

DensityMatrix DensityMatrix::maximally_mixed(Index dim) {
  if (dim <= 0) throw DimensionError("maximally_mixed: dimension must be positive");
  return assume_valid(ComplexMatrix::Identity(dim, dim) / static_cast<double>(dim));
}

DensityMatrix DensityMatrix::diagonal(const RealVector& populations) {
  SimplexVector checked(populations);
  return assume_valid(checked.values().cast<Complex>().asDiagonal().toDenseMatrix());
}

DensityMatrix DensityMatrix::pure(const Eigen::VectorXcd& psi) {
  const double norm = psi.norm();
  if (std::abs(norm - 1.0) > 1e-10) {
    throw PreconditionError("DensityMatrix::pure: state vector is not normalized");
  }
  return assume_valid(psi * psi.adjoint());
}

SimplexVector::SimplexVector(RealVector v) : v_(std::move(v)) {
  if (v_.size() == 0) throw DimensionError("SimplexVector: empty vector");
  if (!v_.allFinite()) throw PreconditionError("SimplexVector: non-finite entry");
  if (v_.minCoeff() < 0.0) {
    throw PreconditionError("SimplexVector: negative entry " + fmt_double(v_.minCoeff()));
  }
  const double s = v_.sum();
  if (std::abs(s - 1.0) > tol::kSimplexSum) {
    throw PreconditionError("SimplexVector: entries sum to " + fmt_double(s));
  }
}

SimplexVector SimplexVector::assume_valid(RealVector v) {
  return SimplexVector(std::move(v), Unchecked{});
}

SimplexVector SimplexVector::uniform(Index dim) {
  if (dim <= 0) throw DimensionError("SimplexVector::uniform: dimension must be positive");
  return assume_valid(RealVector::Constant(dim, 1.0 / static_cast<double>(dim)));
}

SimplexVector SimplexVector::basis(Index dim, Index hot) {
  if (hot < 0 || hot >= dim) throw DimensionError("SimplexVector::basis: index out of range");
  RealVector v = RealVector::Zero(dim);
  v[hot] = 1.0;
  return assume_valid(std::move(v));
}

// ---------------------------------------------------------------------------
// Measures

double max_abs(const ComplexMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

double hermitian_deviation(const ComplexMatrix& m) {
  if (m.rows() != m.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(m - m.adjoint());
}

double unitary_deviation(const ComplexMatrix& u) {
  if (u.rows() != u.cols()) return std::numeric_limits<double>::infinity();
  return max_abs(u.adjoint() * u - ComplexMatrix::Identity(u.rows(), u.cols()));
}

double spectral_norm(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::BDCSVD<ComplexMatrix> svd(m);
  return svd.singularValues()(0);
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

int log2_exact(Index n) {
  if (!is_power_of_two(n)) {
    throw DimensionError("dimension " + std::to_string(n) + " is not a power of two");
  }
  int k = 0;
  while ((Index{1} << k) < n) ++k;
  return k;
}

// ---------------------------------------------------------------------------
// Matrix functions

HermitianEigen eig_hermitian(const ComplexMatrix& m) {
  require_square(m, "eig_hermitian");
  require_dense_dim(m.rows(), "eig_hermitian");
  const double dev = hermitian_deviation(m);
  if (dev > tol::kHermitianInput) {
    throw PreconditionError("eig_hermitian: input not Hermitian (deviation " + fmt_double(dev) +
                            ")");
  }
  const ComplexMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(h);
  if (es.info() != Eigen::Success) throw Error("eig_hermitian: eigensolver did not converge");
  return {es.eigenvalues(), es.eigenvectors()};
}

ComplexMatrix matrix_sqrt_psd(const ComplexMatrix& m) {
  const HermitianEigen eig = eig_hermitian(m);
  if (eig.values.minCoeff() < -tol::kPsdClamp) {
    throw PreconditionError("matrix_sqrt_psd: eigenvalue " + fmt_double(eig.values.minCoeff()) +
                            " below clamp threshold");
  }
  const RealVector roots = eig.values.cwiseMax(0.0).cwiseSqrt();
  ComplexMatrix r = eig.vectors * roots.cast<Complex>().asDiagonal() * eig.vectors.adjoint();
  return 0.5 * (r + r.adjoint());
}

ComplexMatrix matrix_log_unitary(const ComplexMatrix& u) {
  require_square(u, "matrix_log_unitary");
  require_dense_dim(u.rows(), "matrix_log_unitary");
  const double dev = unitary_deviation(u);
  if (dev > tol::kUnitary) {
    throw PreconditionError("matrix_log_unitary: input not unitary (deviation " +
                            fmt_double(dev) + ")");
  }
  // A unitary matrix is normal, so its complex Schur form is diagonal.
  Eigen::ComplexSchur<ComplexMatrix> schur(u);
  if (schur.info() != Eigen::Success) throw Error("matrix_log_unitary: Schur did not converge");
  const ComplexMatrix& q = schur.matrixU();
  const ComplexMatrix& t = schur.matrixT();
  RealVector phases(u.rows());
  for (Index i = 0; i < u.rows(); ++i) {
    double theta = std::arg(t(i, i));
    if (theta <= -std::numbers::pi) theta = std::numbers::pi;
    phases[i] = theta;
  }
  ComplexMatrix h = q * phases.cast<Complex>().asDiagonal() * q.adjoint();
  return 0.5 * (h + h.adjoint());
}

ComplexMatrix exp_i_hermitian(const ComplexMatrix& h, double t) {
  const HermitianEigen eig = eig_hermitian(h);
  Eigen::VectorXcd phases(h.rows());
  for (Index i = 0; i < h.rows(); ++i) phases[i] = std::polar(1.0, t * eig.values[i]);
  return eig.vectors * phases.asDiagonal() * eig.vectors.adjoint();
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Index i = 0; i < a.rows(); ++i) {
    for (Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// States

DensityMatrix conjugate(const ComplexMatrix& u, const DensityMatrix& rho) {
  if (u.rows() != u.cols() || u.cols() != rho.dim()) {
    throw DimensionError("conjugate: operator is " + std::to_string(u.rows()) + "x" +
                         std::to_string(u.cols()) + ", state has dim " +
                         std::to_string(rho.dim()));
  }
  ComplexMatrix out = u * rho.matrix() * u.adjoint();
  return DensityMatrix::assume_valid(0.5 * (out + out.adjoint()));
}

SimplexVector measure_z(const DensityMatrix& rho) {
  RealVector p = rho.matrix().diagonal().real().cwiseMax(0.0);
  return SimplexVector::assume_valid(std::move(p));
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json matrix_to_json(const ComplexMatrix& m) {
  std::vector<double> re, im;
  re.reserve(static_cast<std::size_t>(m.size()));
  im.reserve(static_cast<std::size_t>(m.size()));
  for (Index i = 0; i < m.rows(); ++i) {
    for (Index j = 0; j < m.cols(); ++j) {
      re.push_back(m(i, j).real());
      im.push_back(m(i, j).imag());
    }
  }
  return {{"rows", m.rows()}, {"cols", m.cols()}, {"re", re}, {"im", im}};
}

nlohmann::json matrix_to_json(const RealMatrix& m) {
  return matrix_to_json(ComplexMatrix(m.cast<Complex>()));
}

ComplexMatrix complex_matrix_from_json(const nlohmann::json& j) {
  try {
    const auto rows = j.at("rows").get<Index>();
    const auto cols = j.at("cols").get<Index>();
    if (rows <= 0 || cols <= 0) throw DataError("matrix JSON: dimensions must be positive");
    const auto re = j.at("re").get<std::vector<double>>();
    std::vector<double> im(re.size(), 0.0);
    if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
    const auto n = static_cast<std::size_t>(rows * cols);
    if (re.size() != n || im.size() != n) {
      throw DataError("matrix JSON: expected " + std::to_string(n) + " entries");
    }
    ComplexMatrix m(rows, cols);
    for (Index i = 0; i < rows; ++i) {
      for (Index k = 0; k < cols; ++k) {
        const auto idx = static_cast<std::size_t>(i * cols + k);
        m(i, k) = Complex(re[idx], im[idx]);
      }
    }
    if (!all_finite(m)) throw DataError("matrix JSON: non-finite entry");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("matrix JSON: ") + e.what());
  }
}

RealMatrix real_matrix_from_json(const nlohmann::json& j) {
  const ComplexMatrix m = complex_matrix_from_json(j);
  if (max_abs(m.imag().cast<Complex>()) != 0.0) {
    throw DataError("matrix JSON: expected a real matrix");
  }
  return m.real();
}

nlohmann::json vector_to_json(const RealVector& v) {
  return std::vector<double>(v.data(), v.data() + v.size());
}

RealVector vector_from_json(const nlohmann::json& j) {
  try {
    const auto values = j.get<std::vector<double>>();
    RealVector v(static_cast<Index>(values.size()));
    for (std::size_t i = 0; i < values.size(); ++i) v[static_cast<Index>(i)] = values[i];
    if (!v.allFinite()) throw DataError("vector JSON: non-finite entry");
    return v;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("vector JSON: ") + e.what());
  }
}

}  // namespace hqrn
