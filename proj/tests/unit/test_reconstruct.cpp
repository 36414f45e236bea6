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

#include <cmath>
#include <random>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hqrn/blocks.hpp"
#include "hqrn/error.hpp"
#include "hqrn/pauli.hpp"
#include "hqrn/random.hpp"
#include "hqrn/reconstruct.hpp"
#include "oracles.hpp"

using namespace hqrn;

namespace {

RealMatrix random_weights(Index d, double lo, double hi, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(lo, hi);
  RealMatrix w(d, d);
  for (Index i = 0; i < d; ++i)
    for (Index j = 0; j < d; ++j) w(i, j) = u(rng);
  return w;
}

RealVector random_bias(Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  RealVector b(d);
  for (Index i = 0; i < d; ++i) b[i] = u(rng);
  return b;
}

ComplexMatrix random_contraction(Index d, std::mt19937_64& rng) {
  const ComplexMatrix a = haar_unitary(d, rng), b = haar_unitary(d, rng);
  std::uniform_real_distribution<double> s(0.0, 1.0);
  RealVector sv(d);
  for (Index i = 0; i < d; ++i) sv[i] = s(rng);
  sv[0] = 1.0;
  return a * sv.cast<Complex>().asDiagonal() * b;
}

double trotter_error(const ComplexMatrix& u, int order, int steps) {
  return spectral_norm(trotterize(u, TrotterSpec{order, steps}).approx - u);
}

}  // namespace

TEST_SUITE("split_weights") {
  TEST_CASE("zero matrix") {
    const SignSplit s = split_weights(RealMatrix::Zero(3, 3));
    CHECK(s.w_pos.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.w_neg.cwiseAbs().maxCoeff() == 0.0);
    CHECK(s.lambda == 1.0);
  }

  TEST_CASE("hand example") {
    RealMatrix w(2, 2);
    w << 1, -2, 0, 3;
    const SignSplit s = split_weights(w);
    RealMatrix pos(2, 2), neg(2, 2);
    pos << 1, 0, 0, 3;
    neg << 0, 2, 0, 0;
    CHECK(s.w_pos == pos);
    CHECK(s.w_neg == neg);
    CHECK(s.lambda * (s.w_pos - s.w_neg) == w);
  }

  TEST_CASE("disjoint supports on random input") {
    std::mt19937_64 rng(71);
    const RealMatrix w = random_weights(8, -2, 2, rng);
    const SignSplit s = split_weights(w);
    CHECK(s.w_pos.cwiseProduct(s.w_neg).cwiseAbs().maxCoeff() == 0.0);
    CHECK((s.lambda * (s.w_pos - s.w_neg) - w).cwiseAbs().maxCoeff() < 1e-12);
  }

  TEST_CASE("non-finite input rejected") {
    RealMatrix w = RealMatrix::Zero(2, 2);
    w(0, 1) = std::nan("");
    CHECK_THROWS_AS(split_weights(w), PreconditionError);
  }
}

TEST_SUITE("to_contractions") {
  TEST_CASE("identity") {
    const ContractionPair c = to_contractions(SignSplit{RealMatrix::Identity(2, 2), RealMatrix::Zero(2, 2), 1.0});
    CHECK(c.c == doctest::Approx(1.0));
    CHECK((c.m_plus - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
  }

  TEST_CASE("four times identity") {
    const ContractionPair c =
        to_contractions(SignSplit{4.0 * RealMatrix::Identity(2, 2), RealMatrix::Zero(2, 2), 1.0});
    CHECK(c.c == doctest::Approx(4.0));
    CHECK((c.m_plus - RealMatrix::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-15);
    CHECK(c.m_minus.cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("round trip and norm bound") {
    std::mt19937_64 rng(72);
    for (int t = 0; t < 20; ++t) {
      const SignSplit s = split_weights(random_weights(t % 2 ? 4 : 8, -2, 2, rng));
      const ContractionPair c = to_contractions(s);
      CHECK((c.c * c.m_plus.cwiseAbs2() - s.w_pos).cwiseAbs().maxCoeff() < 1e-10);
      CHECK((c.c * c.m_minus.cwiseAbs2() - s.w_neg).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(spectral_norm(c.m_plus.cast<Complex>()) <= 1.0 + 1e-10);
      CHECK(spectral_norm(c.m_minus.cast<Complex>()) <= 1.0 + 1e-10);
    }
  }
}

TEST_SUITE("halmos_dilate") {
  TEST_CASE("zero gives the swap") {
    const ComplexMatrix u = halmos_dilate(ComplexMatrix::Zero(2, 2));
    ComplexMatrix want = ComplexMatrix::Zero(4, 4);
    want.topRightCorner(2, 2).setIdentity();
    want.bottomLeftCorner(2, 2).setIdentity();
    CHECK(max_abs(u - want) < 1e-15);
  }

  TEST_CASE("identity gives a reflection") {
    const ComplexMatrix u = halmos_dilate(ComplexMatrix::Identity(2, 2));
    ComplexMatrix want = ComplexMatrix::Zero(4, 4);
    want.topLeftCorner(2, 2).setIdentity();
    want.bottomRightCorner(2, 2) = -ComplexMatrix::Identity(2, 2);
    CHECK(max_abs(u - want) < 1e-15);
  }

  TEST_CASE("unitary with the contraction in the top-left block") {
    std::mt19937_64 rng(73);
    for (Index d : {2, 4, 8, 64}) {
      for (int t = 0; t < 3; ++t) {
        const ComplexMatrix m = random_contraction(d, rng);
        const ComplexMatrix u = halmos_dilate(m);
        CHECK(unitary_deviation(u) < 1e-9);
        CHECK(max_abs(u.topLeftCorner(d, d) - m) == 0.0);
      }
    }
  }

  TEST_CASE("norm tolerance") {
    CHECK_NOTHROW(halmos_dilate((1.0 + 5e-10) * ComplexMatrix::Identity(2, 2)));
    CHECK_THROWS_AS(halmos_dilate(1.01 * ComplexMatrix::Identity(2, 2)), PreconditionError);
  }
}

TEST_SUITE("suzuki") {
  TEST_CASE("coefficients") {
    CHECK(suzuki_coefficient(2) == doctest::Approx(0.4144907717).epsilon(1e-10));
    CHECK(suzuki_coefficient(3) == doctest::Approx(0.3730658277).epsilon(1e-10));
    CHECK_THROWS_AS(suzuki_coefficient(1), PreconditionError);
    for (int k = 2; k <= 5; ++k) {
      const double p = suzuki_coefficient(k);
      CHECK(std::abs(p * (4.0 - std::pow(4.0, 1.0 / (2 * k - 1))) - 1.0) < 1e-14);
    }
  }

  TEST_CASE("step weights sum to one") {
    for (int order : {2, 4, 6}) {
      double s = 0.0;
      for (double w : suzuki_weights(order)) s += w;
      CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
    }
    CHECK(suzuki_weights(2).size() == 1);
    CHECK(suzuki_weights(4).size() == 3);
    CHECK(suzuki_weights(6).size() == 9);
    CHECK_THROWS(suzuki_weights(3));
  }
}

TEST_SUITE("trotterize") {
  TEST_CASE("single Pauli term is exact") {
    const ComplexMatrix u = exp_i_hermitian(0.7 * PauliString::from_label("XZ").matrix(2));
    for (int order : {2, 4})
      for (int steps : {1, 3}) CHECK(spectral_norm(trotterize(u, TrotterSpec{order, steps}).approx - u) < 1e-12);
  }

  TEST_CASE("commuting terms are exact") {
    const ComplexMatrix h = 0.4 * PauliString::from_label("ZI").matrix(2) +
                            0.9 * PauliString::from_label("IZ").matrix(2) +
                            -0.3 * PauliString::from_label("ZZ").matrix(2);
    const ComplexMatrix u = exp_i_hermitian(h);
    CHECK(spectral_norm(trotterize(u, TrotterSpec{2, 1}).approx - u) < 1e-10);
  }

  TEST_CASE("compiled gate list reproduces the approximation") {
    std::mt19937_64 rng(74);
    const ComplexMatrix u = haar_unitary(4, rng);
    const TrotterResult r = trotterize(u, TrotterSpec{2, 3});
    CHECK(r.repetitions == 3);
    const std::vector<PauliRotation> gates = r.flattened();
    CHECK(gates.size() == 3 * r.step_factors.size());
    ComplexMatrix prod = ComplexMatrix::Identity(4, 4);
    for (const PauliRotation& g : gates) prod = oracle::expi(g.angle * g.pauli.matrix(2), 1.0) * prod;
    CHECK(spectral_norm(prod - r.approx) < 1e-9);
  }

  TEST_CASE("second-order error scales as r^-2") {
    std::mt19937_64 rng(75);
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix u = haar_unitary(8, rng);
      const double e8 = trotter_error(u, 2, 8), e32 = trotter_error(u, 2, 32);
      CHECK(e32 < e8 / 16.0 * 1.5);
      CHECK(e32 > e8 / 16.0 * 0.5);
    }
  }

  TEST_CASE("fourth order beats second order") {
    std::mt19937_64 rng(76);
    for (int t = 0; t < 5; ++t) {
      const ComplexMatrix u = haar_unitary(8, rng);
      for (int r : {8, 16}) CHECK(trotter_error(u, 4, r) <= trotter_error(u, 2, r));
    }
  }

  TEST_CASE("invalid input") {
    CHECK_THROWS_AS(trotterize(2.0 * ComplexMatrix::Identity(2, 2), TrotterSpec{}), PreconditionError);
    CHECK_THROWS(trotterize(ComplexMatrix::Identity(2, 2), TrotterSpec{3, 4}));
    CHECK_THROWS(trotterize(ComplexMatrix::Identity(2, 2), TrotterSpec{2, 0}));
  }
}

TEST_SUITE("reconstruct_block") {
  TEST_CASE("zero weights") {
    const ReconstructedBlock b = reconstruct_block(RealMatrix::Zero(4, 4), RealVector::Zero(4), 0.5, TrotterSpec{});
    CHECK(b.w_rec.cwiseAbs().maxCoeff() < 1e-12);
    CHECK(b.params.dim() == 8);
  }

  TEST_CASE("permutation minus identity survives Trotterization") {
    RealMatrix w = -RealMatrix::Identity(4, 4);
    for (Index m = 0; m < 4; ++m) w(m ^ 2, m) += 1.0;
    const ReconstructedBlock b = reconstruct_block(w, RealVector::Zero(4), 0.5, TrotterSpec{2, 64});
    CHECK(b.max_abs_error < 1e-8);
    CHECK((b.w_rec - w).cwiseAbs().maxCoeff() < 1e-8);
  }

  TEST_CASE("exact dilation round trip") {
    std::mt19937_64 rng(77);
    for (int t = 0; t < 100; ++t) {
      const RealMatrix w = random_weights(t % 2 ? 4 : 8, -2, 2, rng);
      const ReconstructedBlock b = reconstruct_block(w, random_bias(w.rows(), rng), 0.5, std::nullopt);
      CHECK((b.w_rec - w).cwiseAbs().maxCoeff() < 1e-10);
      CHECK(b.params.gamma == doctest::Approx(to_contractions(split_weights(w)).c));
    }
  }

  TEST_CASE("non-power-of-two dimension") {
    CHECK_THROWS_AS(reconstruct_block(RealMatrix::Zero(3, 3), RealVector::Zero(3), 0.5, std::nullopt),
                    DimensionError);
  }

  // Worst top-block output error over random 4x4 blocks against the classical block.
  double end_to_end_error(const std::optional<TrotterSpec>& spec, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    double worst = 0.0;
    for (int t = 0; t < 10; ++t) {
      const RealMatrix w = random_weights(4, -1, 1, rng);
      const RealVector bias = random_bias(4, rng);
      const ReconstructedBlock b = reconstruct_block(w, bias, 0.5, spec);
      const SimplexVector y = random_simplex(4, rng);
      for (Activation kind : {Activation::kReLU, Activation::kSigmoid}) {
        const CrbOutput classical = crb_forward(y, CrbParams{w, bias, 0.5}, kind);
        const QrbOutput quantum = qrb_forward(embed_classical_input(y, 4), b.params, kind);
        const RealVector top = top_block_populations(quantum.rho, 4);
        worst = std::max(worst, (top - classical.y.values()).cwiseAbs().maxCoeff());
        worst = std::max(worst, (quantum.h.values().head(4) - classical.h.values()).cwiseAbs().maxCoeff());
      }
    }
    return worst;
  }

  TEST_CASE("end-to-end block equivalence, exact dilation") {
    CHECK(end_to_end_error(std::nullopt, 78) < 1e-10);
  }

  TEST_CASE("end-to-end block equivalence, second order r = 128") {
    // The r = 64 weight tolerance of 1e-3 under r^-2 scaling.
    const double e = end_to_end_error(TrotterSpec{2, 128}, 79);
    MESSAGE("worst end-to-end error " << e);
    CHECK(e < 2.5e-4);
  }

  TEST_CASE("report fields") {
    const ReconstructedBlock b = reconstruct_block(RealMatrix::Identity(4, 4), RealVector::Zero(4), 0.5, TrotterSpec{2, 8});
    const nlohmann::json j = reconstruction_report(b);
    CHECK(j.at("order") == 2);
    CHECK(j.at("steps") == 8);
    CHECK(j.contains("max_abs_error"));
    CHECK(j.at("gamma").get<double>() == doctest::Approx(1.0));
  }
}

TEST_SUITE("embed_classical_input") {
  TEST_CASE("basis and uniform") {
    const DensityMatrix e = embed_classical_input(SimplexVector::basis(4, 0), 4);
    CHECK(e.dim() == 8);
    CHECK(e.matrix()(0, 0) == Complex(1.0, 0.0));
    CHECK(std::abs(e.matrix().trace() - Complex(1.0, 0.0)) < 1e-15);
    const DensityMatrix u = embed_classical_input(SimplexVector::uniform(4), 4);
    for (Index i = 0; i < 8; ++i) CHECK(u.matrix()(i, i).real() == doctest::Approx(i < 4 ? 0.25 : 0.0));
    CHECK_THROWS_AS(embed_classical_input(SimplexVector::uniform(8), 4), DimensionError);
  }
}
