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

#include "hqrn/ansatz.hpp"

#include <cmath>

namespace hqrn {
namespace {

Eigen::Matrix2cd rz(double a) {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 0) = std::polar(1.0, -0.5 * a);
  m(1, 1) = std::polar(1.0, 0.5 * a);
  return m;
}

Eigen::Matrix2cd ry(double b) {
  const double c = std::cos(0.5 * b), s = std::sin(0.5 * b);
  Eigen::Matrix2cd m;
  m << c, -s, s, c;
  return m;
}

Eigen::Matrix4cd kron2(const Eigen::Matrix2cd& a, const Eigen::Matrix2cd& b) {
  Eigen::Matrix4cd out;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) out.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
  return out;
}

// exp(i t P) = cos t I + i sin t P for an involutory P.
Eigen::Matrix4cd exp_i_pauli(double t, const Eigen::Matrix4cd& p) {
  return std::cos(t) * Eigen::Matrix4cd::Identity() + Complex(0.0, std::sin(t)) * p;
}

}  // namespace

Eigen::Matrix2cd single_qubit_rotation(double a, double b, double c) {
  return rz(a) * ry(b) * rz(c);
}

Eigen::Matrix4cd canonical_entangler(double tx, double ty, double tz) {
  Eigen::Matrix2cd x, y, z;
  x << 0, 1, 1, 0;
  y << 0, Complex(0, -1), Complex(0, 1), 0;
  z << 1, 0, 0, -1;
  // XX, YY and ZZ commute, so the exponential factorizes.
  return exp_i_pauli(tx, kron2(x, x)) * exp_i_pauli(ty, kron2(y, y)) *
         exp_i_pauli(tz, kron2(z, z));
}

ComplexMatrix ansatz_unitary(std::span<const double, kAnsatzParams> t) {
  const Eigen::Matrix4cd post =
      kron2(single_qubit_rotation(t[0], t[1], t[2]), single_qubit_rotation(t[3], t[4], t[5]));
  const Eigen::Matrix4cd pre = kron2(single_qubit_rotation(t[9], t[10], t[11]),
                                     single_qubit_rotation(t[12], t[13], t[14]));
  return post * canonical_entangler(t[6], t[7], t[8]) * pre;
}

}  // namespace hqrn
