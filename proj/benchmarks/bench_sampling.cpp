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

#include <cstdint>
#include <random>

#include "hqrn/blocks.hpp"
#include "hqrn/random.hpp"
#include "hqrn/sampling.hpp"

namespace {

void BM_SampleDistribution(benchmark::State& state) {
  const auto shots = static_cast<std::uint64_t>(state.range(0));
  std::mt19937_64 rng(7);
  const hqrn::SimplexVector p = hqrn::random_simplex(64, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::sample_distribution(p, shots, ++seed));
  }
}
BENCHMARK(BM_SampleDistribution)->RangeMultiplier(100)->Range(1000, 10000000);

void BM_QrbForwardSampled(benchmark::State& state) {
  std::mt19937_64 rng(8);
  hqrn::QrbParams p;
  p.u_plus = hqrn::haar_unitary(8, rng);
  p.u_minus = hqrn::haar_unitary(8, rng);
  p.bias = hqrn::RealVector::Constant(8, 0.1);
  const hqrn::DensityMatrix rho = hqrn::random_density(8, 2, rng);
  std::uint64_t seed = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(hqrn::qrb_forward_sampled(rho, p, hqrn::Activation::kReLU,
                                                       hqrn::ShotConfig::finite(1000000, ++seed)));
  }
}
BENCHMARK(BM_QrbForwardSampled);

}  // namespace
