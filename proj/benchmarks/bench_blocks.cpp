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

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "hqrn/blocks.hpp"
#include "hqrn/random.hpp"

namespace {

hqrn::QrbParams make_block(hqrn::Index d, std::mt19937_64& rng) {
  hqrn::QrbParams p;
  p.u_plus = hqrn::haar_unitary(d, rng);
  p.u_minus = hqrn::haar_unitary(d, rng);
  p.bias = hqrn::RealVector::Constant(d, 0.1);
  return p;
}

void BM_QrbForward(benchmark::State& state) {
  const hqrn::Index d = state.range(0);
  std::mt19937_64 rng(1);
  const hqrn::QrbParams p = make_block(d, rng);
  const hqrn::DensityMatrix rho = hqrn::random_density(d, d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::qrb_forward(rho, p, hqrn::Activation::kReLU));
  }
}
BENCHMARK(BM_QrbForward)->RangeMultiplier(2)->Range(4, 128);

void BM_CrbForward(benchmark::State& state) {
  const hqrn::Index d = state.range(0);
  std::mt19937_64 rng(2);
  const hqrn::QrbParams q = make_block(d, rng);
  const hqrn::CrbParams p{hqrn::weights_from_unitaries(q), q.bias, 0.5};
  const hqrn::SimplexVector y = hqrn::random_simplex(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::crb_forward(y, p, hqrn::Activation::kReLU));
  }
}
BENCHMARK(BM_CrbForward)->RangeMultiplier(2)->Range(4, 128);

void BM_ClosedForm(benchmark::State& state) {
  const auto k = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::vector<hqrn::QrbParams> blocks;
  for (int i = 0; i < k; ++i) blocks.push_back(make_block(8, rng));
  const hqrn::DensityMatrix rho = hqrn::random_density(8, 3, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::closed_form_output(rho, blocks, hqrn::Activation::kReLU));
  }
}
BENCHMARK(BM_ClosedForm)->DenseRange(1, 6);

}  // namespace
