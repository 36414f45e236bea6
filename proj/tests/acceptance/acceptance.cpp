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

// Acceptance runner: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Pass criterion numbers as arguments to run a subset.

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iomanip>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "hqrn/blocks.hpp"
#include "hqrn/cascade_training.hpp"
#include "hqrn/config.hpp"
#include "hqrn/entangle.hpp"
#include "hqrn/experiments.hpp"
#include "hqrn/random.hpp"
#include "hqrn/reconstruct.hpp"
#include "hqrn/sampling.hpp"

using namespace hqrn;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed = false;
  std::string measured;
};

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(4) << v;
  return os.str();
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hqrn_acceptance_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

ExperimentConfig shipped_config(const std::string& name) {
  return load_config(fs::path(HQRN_SOURCE_DIR) / "configs" / name);
}

RealMatrix uniform_weights(Index d, double limit, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-limit, limit);
  RealMatrix w(d, d);
  for (Index i = 0; i < w.size(); ++i) w.data()[i] = u(rng);
  return w;
}

QrbParams random_qrb(Index d, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> bias(-0.5, 0.5), gamma(0.5, 2.0), alpha(0.05, 0.95);
  QrbParams p;
  p.u_plus = haar_unitary(d, rng);
  p.u_minus = haar_unitary(d, rng);
  p.gamma = gamma(rng);
  p.bias = RealVector(d);
  for (Index i = 0; i < d; ++i) p.bias[i] = bias(rng);
  p.alpha = alpha(rng);
  return p;
}

// 1. Diagonal QRB output equals the induced classical block.
Outcome criterion_equivalence() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(101);
  double worst = 0.0;
  for (int t = 0; t < 500; ++t) {
    const Index d = t % 2 == 0 ? 4 : 8;
    const Activation kind = t % 4 < 2 ? Activation::kReLU : Activation::kSigmoid;
    const QrbParams q = random_qrb(d, rng);
    const SimplexVector y = random_simplex(d, rng);
    const QrbOutput qo = qrb_forward(DensityMatrix::diagonal(y.values()), q, kind);
    const CrbOutput co = crb_forward(y, CrbParams{weights_from_unitaries(q), q.bias, q.alpha}, kind);
    worst = std::max(worst, (qo.rho.matrix().diagonal().real() - co.y.values()).cwiseAbs().maxCoeff());
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && secs < 10.0,
          "max diff " + fmt(worst) + " (< 1e-9), " + fmt(secs) + " s (< 10 s)"};
}

// 2. Iterated cascade against the closed form on mixed inputs.
Outcome criterion_closed_form() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(102);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Index d = t % 2 == 0 ? 4 : 8;
    const int k = 1 + t % 6;
    std::vector<QrbParams> blocks;
    for (int i = 0; i < k; ++i) blocks.push_back(random_qrb(d, rng));
    for (QrbParams& b : blocks) b.alpha = blocks.front().alpha;
    const DensityMatrix rho0 = random_density(d, 1 + t % d, rng);
    const Activation kind = t % 2 == 0 ? Activation::kReLU : Activation::kSigmoid;
    worst = std::max(worst, max_abs(cascade_qrb(rho0, blocks, kind).final_state.matrix() -
                                    closed_form_output(rho0, blocks, kind).matrix()));
  }
  const double secs = seconds_since(t0);
  return {worst < 1e-9 && secs < 30.0,
          "max diff " + fmt(worst) + " (< 1e-9), " + fmt(secs) + " s (< 30 s)"};
}

// 3. Reconstruction round trip, exact and Trotterized, plus r^-2 scaling.
Outcome criterion_reconstruction() {
  std::mt19937_64 rng(103);
  double exact = 0.0;
  for (int t = 0; t < 100; ++t) {
    const RealMatrix w = uniform_weights(t % 2 == 0 ? 4 : 8, 2.0, rng);
    exact = std::max(exact, reconstruct_block(w, RealVector::Zero(w.rows()), 0.5, std::nullopt).max_abs_error);
  }
  double trotter = 0.0, coarse = 0.0, fine = 0.0;
  for (int t = 0; t < 100; ++t) {
    const RealMatrix w = uniform_weights(4, 2.0, rng);
    trotter = std::max(trotter, reconstruct_block(w, RealVector::Zero(4), 0.5, TrotterSpec{2, 64}).max_abs_error);
    const ContractionPair pair = to_contractions(split_weights(w));
    for (const RealMatrix* m : {&pair.m_plus, &pair.m_minus}) {
      const ComplexMatrix u = halmos_dilate(m->cast<Complex>());
      coarse += spectral_norm(trotterize(u, TrotterSpec{2, 8}).approx - u);
      fine += spectral_norm(trotterize(u, TrotterSpec{2, 32}).approx - u);
    }
  }
  const double ratio = coarse / fine;
  return {exact < 1e-10 && trotter < 1e-3 && std::abs(ratio - 16.0) <= 8.0,
          "exact " + fmt(exact) + " (< 1e-10), order 2 r=64 " + fmt(trotter) +
              " (< 1e-3), error ratio r=8/r=32 " + fmt(ratio) + " (16 +- 8)"};
}

// 4. Shot-noise slope and hybrid disagreement versus shot count.
Outcome criterion_shots() {
  std::mt19937_64 rng(104);
  const SimplexVector p = random_simplex(4, rng);
  const std::vector<double> shots{1e3, 1e4, 1e5, 1e6};
  std::vector<double> lx, ly;
  for (std::size_t n = 0; n < shots.size(); ++n) {
    double mean = 0.0;
    for (std::uint64_t s = 0; s < 100; ++s) {
      const SimplexVector q = sample_distribution(p, static_cast<std::uint64_t>(shots[n]), derive_seed(1000 + n, s));
      mean += (q.values() - p.values()).cwiseAbs().maxCoeff() / 100.0;
    }
    lx.push_back(std::log(shots[n]));
    ly.push_back(std::log(mean));
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    mx += lx[i] / lx.size();
    my += ly[i] / ly.size();
  }
  double sxy = 0, sxx = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;

  bool monotone = true;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig cfg = shipped_config("digits_synthetic.json");
    cfg.seed = seed;
    cfg.digits.shots = {std::uint64_t{1000}, std::uint64_t{1000000}};
    cfg.output_dir = scratch("shots_" + std::to_string(seed));
    const DigitsReport r = run_digits(cfg);
    double d3 = -1, d6 = -1;
    for (const DigitsEvaluation& ev : r.evaluations) (*ev.shots == 1000 ? d3 : d6) = ev.disagreement;
    monotone = monotone && d6 <= d3;
    per_seed += (per_seed.empty() ? "" : " ") + fmt(d3) + "->" + fmt(d6);
  }
  return {std::abs(slope + 0.5) <= 0.15 && monotone,
          "slope " + fmt(slope) + " (-0.5 +- 0.15), disagreement 1e3->1e6 per seed [" + per_seed + "]"};
}

// 5. Desk-scale digits: classical error and infinite-shot agreement.
Outcome criterion_digits() {
  const auto t0 = Clock::now();
  ExperimentConfig cfg = shipped_config("digits_desk.json");
  cfg.digits.shots = {std::nullopt};
  cfg.digits.checkpoint_every = 0;
  cfg.output_dir = scratch("digits_desk");
  const DigitsReport r = run_digits(cfg);
  const double test_error = r.history.back().test_error;
  double disagreement = 1.0;
  for (const DigitsEvaluation& ev : r.evaluations)
    if (!ev.shots && ev.epoch == r.history.back().epoch) disagreement = ev.disagreement;
  const double secs = seconds_since(t0);
  return {test_error < 0.25 && disagreement < 0.01 && secs < 600.0,
          "classical test error " + fmt(test_error) + " (< 0.25), infinite-shot disagreement " +
              fmt(disagreement) + " (< 0.01), " + fmt(secs) + " s (< 600 s)"};
}

// 6. PPT label boundary and adversarial mimicry.
Outcome criterion_ppt() {
  bool ok = true;
  double worst_z = 0.0;
  const double third = 1.0 / 3.0;
  for (BellPair pair : {BellPair::kPhi, BellPair::kPsi}) {
    for (double phase : {0.0, 0.5, 2.0, 4.5}) {
      const BellSpec bell{pair, phase};
      ok = ok && !ppt_is_entangled(werner_state(third - 1e-6, bell).state);
      ok = ok && ppt_is_entangled(werner_state(third + 1e-6, bell).state);
      const LabeledState ad = adversarial_state(1.0, bell);
      ok = ok && !ppt_is_entangled(ad.state);
      const SimplexVector target = measure_z(DensityMatrix::assume_valid(bell_projector(bell)));
      worst_z = std::max(worst_z, (measure_z(ad.state).values() - target.values()).cwiseAbs().maxCoeff());
    }
  }
  return {ok && worst_z < 1e-12,
          std::string("label flip at 1/3 +- 1e-6 ") + (ok ? "ok" : "broken") +
              ", adversarial Z-statistics diff " + fmt(worst_z) + " (< 1e-12)"};
}

// 7. Entanglement classifier over five seeds at M = 0 and M = 2.
Outcome criterion_entanglement() {
  const auto t0 = Clock::now();
  int pair_wins = 0;
  bool baseline_exact = true, beats_baseline = true;
  std::string per_seed;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    ExperimentConfig cfg = shipped_config("entanglement_desk.json");
    cfg.seed = seed;
    cfg.entanglement.depths = {0, 2};
    cfg.output_dir = scratch("entangle_" + std::to_string(seed));
    const EntanglementReport r = run_entanglement(cfg);
    const DepthResult& m0 = r.depths.at(0);
    const DepthResult& m2 = r.depths.at(1);
    baseline_exact = baseline_exact && m0.pair_accuracy == 0.5;
    pair_wins += m2.pair_accuracy > 0.7;
    beats_baseline = beats_baseline && m2.accuracy > m0.accuracy;
    per_seed += (per_seed.empty() ? "" : "; ") + std::string("pair ") + fmt(m2.pair_accuracy) + " acc " +
                fmt(m2.accuracy) + " vs " + fmt(m0.accuracy);
  }
  const double secs = seconds_since(t0);
  return {baseline_exact && pair_wins >= 3 && beats_baseline && secs < 900.0,
          std::string("M=0 pair accuracy 0.5 ") + (baseline_exact ? "exact" : "NOT exact") + ", M=2 pair > 0.7 on " +
              std::to_string(pair_wins) + "/5 seeds (>= 3), overall above M=0 on every seed: " +
              (beats_baseline ? "yes" : "no") + " [" + per_seed + "], " + fmt(secs) + " s (< 900 s)"};
}

// 8. Analytic cascade gradients against central differences.
Outcome criterion_gradients() {
  std::mt19937_64 rng(108);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int t = 0; t < 20; ++t) {
    const bool bce = t % 2 == 1;
    CascadeInit init;
    init.block_bias = 0.3;
    const CascadeNetwork net = init_cascade(std::nullopt, 4, 3, bce ? 1 : 4, 0.5,
                                            t % 4 < 2 ? Activation::kReLU : Activation::kSigmoid,
                                            derive_seed(108, t), init);
    std::vector<Example> batch;
    for (int i = 0; i < 8; ++i) {
      RealVector x(4);
      for (Index k = 0; k < 4; ++k) x[k] = u(rng);
      batch.push_back({x / x.sum(), static_cast<int>(rng() % (bce ? 2 : 4))});
    }
    const LossOptions loss{bce ? LossKind::kWeightedBce : LossKind::kCrossEntropy, 1.5};
    std::vector<double> g;
    loss_and_gradient(net, batch, loss, &g);
    const std::vector<double> x = net.flatten();
    const double h = 1e-5;
    for (std::size_t i = 0; i < x.size(); ++i) {
      std::vector<double> xp = x, xm = x;
      xp[i] += h;
      xm[i] -= h;
      CascadeNetwork a = net, b = net;
      a.unflatten(xp);
      b.unflatten(xm);
      const double fd =
          (loss_and_gradient(a, batch, loss, nullptr) - loss_and_gradient(b, batch, loss, nullptr)) / (2 * h);
      worst = std::max(worst, std::abs(fd - g[i]) / std::max({std::abs(fd), std::abs(g[i]), 1e-6}));
    }
  }
  return {worst < 1e-4, "max relative error " + fmt(worst) + " (< 1e-4) over 20 points"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "classical-quantum equivalence", criterion_equivalence},
      {2, "closed-form cascade", criterion_closed_form},
      {3, "reconstruction round trip", criterion_reconstruction},
      {4, "shot scaling", criterion_shots},
      {5, "desk-scale digits", criterion_digits},
      {6, "PPT boundary", criterion_ppt},
      {7, "entanglement classifier", criterion_entanglement},
      {8, "gradient correctness", criterion_gradients},
  };
  std::set<int> selected;
  for (int i = 1; i < argc; ++i) selected.insert(std::stoi(argv[i]));

  int failures = 0;
  for (const Criterion& c : criteria) {
    if (!selected.empty() && !selected.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): " << o.measured
              << std::endl;
  }
  fs::remove_all(fs::temp_directory_path() / ("hqrn_acceptance_" + std::to_string(::getpid())));
  return failures == 0 ? 0 : 1;
}
