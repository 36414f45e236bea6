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

#include "hqrn/random.hpp"
#include "hqrn/reconstruct.hpp"

namespace {

void BM_Trotterize(benchmark::State& state) {
  const hqrn::Index d = state.range(0);
  const auto steps = static_cast<int>(state.range(1));
  std::mt19937_64 rng(4);
  const hqrn::ComplexMatrix u = hqrn::haar_unitary(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::trotterize(u, hqrn::TrotterSpec{2, steps}));
  }
}
BENCHMARK(BM_Trotterize)->ArgsProduct({{4, 8, 16}, {8, 64}});

void BM_ReconstructBlock(benchmark::State& state) {
  const hqrn::Index d = state.range(0);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  hqrn::RealMatrix w(d, d);
  for (hqrn::Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  const hqrn::RealVector b = hqrn::RealVector::Zero(d);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::reconstruct_block(w, b, 0.5, hqrn::TrotterSpec{2, 64}));
  }
}
BENCHMARK(BM_ReconstructBlock)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

void BM_HalmosDilate(benchmark::State& state) {
  const hqrn::Index d = state.range(0);
  std::mt19937_64 rng(6);
  const hqrn::ComplexMatrix m = 0.9 * hqrn::haar_unitary(d, rng);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::halmos_dilate(m));
  }
}
BENCHMARK(BM_HalmosDilate)->RangeMultiplier(4)->Range(4, 64);

}  // namespace
