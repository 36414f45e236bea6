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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>

#include "hqrn/entangle.hpp"
#include "hqrn/error.hpp"
#include "hqrn/experiments.hpp"
#include "hqrn/random.hpp"

namespace hqrn {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

QrbParams random_qrb(Index d, double alpha, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> gain(0.5, 2.0);
  std::normal_distribution<double> gauss(0.0, 0.3);
  QrbParams p{haar_unitary(d, rng), haar_unitary(d, rng), gain(rng), RealVector(d), alpha};
  for (Index i = 0; i < d; ++i) p.bias[i] = gauss(rng);
  return p;
}

// Entries uniform in [-scale, scale].
RealMatrix random_weights(Index d, double scale, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> entry(-scale, scale);
  RealMatrix w(d, d);
  for (Index j = 0; j < d; ++j)
    for (Index i = 0; i < d; ++i) w(i, j) = entry(rng);
  return w;
}

double random_scale(std::mt19937_64& rng) {
  return std::uniform_real_distribution<double>(0.1, 3.0)(rng);
}

RealVector random_bias(Index d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 0.3);
  RealVector b(d);
  for (Index i = 0; i < d; ++i) b[i] = gauss(rng);
  return b;
}

SuiteResult finish(std::string name, double measured, double threshold, Clock::time_point t0,
                   std::string detail = {}) {
  return {std::move(name), measured < threshold, measured, threshold, seconds_since(t0),
          std::move(detail)};
}

}  // namespace

SuiteResult check_crb_equivalence(int trials, const std::vector<Index>& dims, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = dims[static_cast<std::size_t>(t) % dims.size()];
    const Activation kind = t % 2 == 0 ? Activation::kReLU : Activation::kSigmoid;
    const double alpha = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const QrbParams q = random_qrb(d, alpha, rng);
    const SimplexVector y = random_simplex(d, rng);
    const QrbOutput quantum = qrb_forward(DensityMatrix::diagonal(y.values()), q, kind);
    const CrbOutput classical = crb_forward(y, CrbParams{weights_from_unitaries(q), q.bias, alpha}, kind);
    const RealVector diag = quantum.rho.matrix().diagonal().real();
    worst = std::max(worst, (diag - classical.y.values()).cwiseAbs().maxCoeff());
    worst = std::max(worst, (quantum.h.values() - classical.h.values()).cwiseAbs().maxCoeff());
  }
  return finish("crb_equivalence", worst, 1e-9, t0, std::to_string(trials) + " trials");
}

SuiteResult check_closed_form(int trials, int max_depth, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = t % 2 == 0 ? 4 : 8;
    const Activation kind = t % 3 == 2 ? Activation::kSigmoid : Activation::kReLU;
    const double alpha = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const DensityMatrix rho0 = random_density(d, d, rng);
    std::vector<QrbParams> blocks;
    for (int k = 0; k < max_depth; ++k) blocks.push_back(random_qrb(d, alpha, rng));
    const CascadeTrace trace = cascade_qrb(rho0, blocks, kind);
    for (int k = 1; k <= max_depth; ++k) {
      const DensityMatrix closed =
          closed_form_output(rho0, std::span<const QrbParams>(blocks.data(), k), kind);
      const ComplexMatrix diff = closed.matrix() - trace.steps[k - 1].rho.matrix();
      worst = std::max(worst, diff.cwiseAbs().maxCoeff());
    }
  }
  return finish("closed_form", worst, 1e-9, t0,
                std::to_string(trials) + " trials, depths 1.." + std::to_string(max_depth));
}

SuiteResult check_dilation_round_trip(int trials, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = t % 2 == 0 ? 4 : 8;
    const RealMatrix w = random_weights(d, random_scale(rng), rng);
    worst = std::max(worst, reconstruct_block(w, random_bias(d, rng), 0.5, std::nullopt).max_abs_error);
  }
  return finish("dilation_round_trip", worst, 1e-10, t0, std::to_string(trials) + " weights");
}

SuiteResult check_dilated_block(int trials, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = t % 2 == 0 ? 4 : 8;
    const double alpha = std::uniform_real_distribution<double>(0.05, 0.95)(rng);
    const RealMatrix w = random_weights(d, random_scale(rng), rng);
    const Activation kind = t % 2 == 0 ? Activation::kReLU : Activation::kSigmoid;
    const SimplexVector y = random_simplex(d, rng);
    const RealVector b = random_bias(d, rng);
    const ReconstructedBlock block = reconstruct_block(w, b, alpha, std::nullopt);
    const QrbOutput q = qrb_forward(embed_classical_input(y, d), block.params, kind);
    const CrbOutput c = crb_forward(y, CrbParams{w, b, alpha}, kind);
    worst = std::max(worst, (top_block_populations(q.rho, d) - c.y.values()).cwiseAbs().maxCoeff());
  }
  return finish("dilated_block", worst, 1e-9, t0, std::to_string(trials) + " blocks");
}

SuiteResult check_trotter_round_trip(int trials, const TrotterSpec& spec, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const Index d = t % 2 == 0 ? 4 : 8;
    const RealMatrix w = random_weights(d, 1.0, rng);
    worst = std::max(worst, reconstruct_block(w, random_bias(d, rng), 0.5, spec).max_abs_error);
  }
  return finish("trotter_round_trip", worst, 1e-3, t0,
                "order " + std::to_string(spec.order) + ", " + std::to_string(spec.steps) + " steps");
}

SuiteResult check_trotter_scaling(int trials, std::uint64_t seed) {
  const auto t0 = Clock::now();
  double coarse = 0.0, fine = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    const RealMatrix w = random_weights(4, 1.0, rng);
    const ContractionPair pair = to_contractions(split_weights(w));
    const ComplexMatrix u = halmos_dilate(pair.m_plus.cast<Complex>());
    coarse += spectral_norm(trotterize(u, {2, 8}).approx - u);
    fine += spectral_norm(trotterize(u, {2, 32}).approx - u);
  }
  const double ratio = coarse / fine;
  // r^-2 predicts 16; accept [8, 24].
  SuiteResult r{"trotter_scaling", std::abs(ratio - 16.0) <= 8.0, ratio, 16.0, seconds_since(t0),
                "mean error ratio r=8 / r=32; expected 16 +- 50%"};
  return r;
}

SuiteResult check_shot_scaling(int seeds, const std::vector<std::uint64_t>& shot_list,
                               std::uint64_t seed) {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(derive_seed(seed, 0));
  const SimplexVector p = random_simplex(4, rng);
  std::vector<double> xs, ys;
  bool monotone = true;
  for (std::size_t n = 0; n < shot_list.size(); ++n) {
    double mean = 0.0;
    for (int s = 0; s < seeds; ++s) {
      const SimplexVector q =
          sample_distribution(p, shot_list[n], derive_seed(seed, 1 + n * 100003 + s));
      mean += (q.values() - p.values()).cwiseAbs().maxCoeff();
    }
    mean /= seeds;
    if (!ys.empty() && !(std::log(mean) < ys.back())) monotone = false;
    xs.push_back(std::log(static_cast<double>(shot_list[n])));
    ys.push_back(std::log(mean));
  }
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / xs.size();
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / ys.size();
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
  }
  const double slope = sxy / sxx;
  return {"shot_scaling", std::abs(slope + 0.5) <= 0.15 && monotone, slope, -0.5,
          seconds_since(t0),
          std::string("log-log slope, expected -0.5 +- 0.15; ") +
              (monotone ? "monotone" : "not monotone")};
}

SuiteResult check_ppt_boundary() {
  const auto t0 = Clock::now();
  bool ok = true;
  double worst_z = 0.0;
  const double third = 1.0 / 3.0;
  for (BellPair pair : {BellPair::kPhi, BellPair::kPsi}) {
    for (double phase : {0.0, 1.0, std::numbers::pi, 5.5}) {
      const BellSpec bell{pair, phase};
      ok &= !ppt_is_entangled(werner_state(third - 1e-6, bell).state);
      ok &= ppt_is_entangled(werner_state(third + 1e-6, bell).state);
      ok &= werner_state(third, bell).label == EntanglementLabel::kSeparable;
      const LabeledState ad = adversarial_state(1.0, bell);
      ok &= !ppt_is_entangled(ad.state);
      const DensityMatrix target = DensityMatrix::assume_valid(bell_projector(bell));
      worst_z = std::max(worst_z,
                         (measure_z(ad.state).values() - measure_z(target).values()).cwiseAbs().maxCoeff());
    }
  }
  SuiteResult r = finish("ppt_boundary", worst_z, 1e-12, t0,
                         "Werner label flip at 1/3 +- 1e-6; adversarial Z mimicry");
  r.passed = r.passed && ok;
  return r;
}

EquivalenceReport run_equivalence_suite(const ExperimentConfig& cfg) {
  cfg.equivalence.validate();
  const EquivalenceConfig& q = cfg.equivalence;
  EquivalenceReport report;
  report.suites.push_back(check_crb_equivalence(q.equivalence_trials, q.dims, derive_seed(cfg.seed, 1)));
  report.suites.push_back(check_closed_form(q.closed_form_trials, q.max_depth, derive_seed(cfg.seed, 2)));
  report.suites.push_back(check_dilation_round_trip(q.reconstruction_trials, derive_seed(cfg.seed, 3)));
  report.suites.push_back(check_dilated_block(q.reconstruction_trials, derive_seed(cfg.seed, 4)));
  report.suites.push_back(check_trotter_round_trip(q.reconstruction_trials, q.trotter, derive_seed(cfg.seed, 5)));
  report.suites.push_back(check_trotter_scaling(std::max(1, q.reconstruction_trials / 5), derive_seed(cfg.seed, 6)));
  report.suites.push_back(check_shot_scaling(q.shot_seeds, q.shot_list, derive_seed(cfg.seed, 7)));
  report.suites.push_back(check_ppt_boundary());

  report.all_passed = std::all_of(report.suites.begin(), report.suites.end(),
                                  [](const SuiteResult& s) { return s.passed; });
  json suites = json::array();
  for (const SuiteResult& s : report.suites) {
    suites.push_back({{"name", s.name},
                      {"passed", s.passed},
                      {"measured", s.measured},
                      {"threshold", s.threshold},
                      {"seconds", s.seconds},
                      {"detail", s.detail}});
  }
  report.json = {{"task", "equivalence-suite"},
                 {"seed", cfg.seed},
                 {"rng_algorithm", kRngAlgorithm},
                 {"config", to_json(cfg)},
                 {"all_passed", report.all_passed},
                 {"max_equivalence_error", report.suites[0].measured},
                 {"suites", suites}};

  if (!cfg.output_dir.empty()) {
    std::filesystem::create_directories(cfg.output_dir);
    std::ofstream out(cfg.output_dir / "report.json");
    if (!out) throw DataError("cannot write " + (cfg.output_dir / "report.json").string());
    out << report.json.dump(2) << "\n";
    std::ofstream csv(cfg.output_dir / "metrics.csv");
    if (!csv) throw DataError("cannot write " + (cfg.output_dir / "metrics.csv").string());
    csv << "suite,passed,measured,threshold\n";
    for (const SuiteResult& s : report.suites) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.12g,%.12g", s.measured, s.threshold);
      csv << s.name << ',' << (s.passed ? 1 : 0) << ',' << buf << '\n';
    }
  }
  return report;
}

}  // namespace hqrn
