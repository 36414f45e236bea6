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

#include "hqrn/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>

#include "hqrn/error.hpp"
#include "hqrn/greedy.hpp"
#include "hqrn/mnist.hpp"

namespace hqrn {
namespace {

using nlohmann::json;

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string shots_label(const ShotSetting& s) { return s ? std::to_string(*s) : "inf"; }

json shots_json(const ShotSetting& s) { return s ? json(*s) : json("infinite"); }

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

void write_json(const std::filesystem::path& path, const json& j) {
  std::ofstream out = open_output(path);
  out << j.dump(2) << "\n";
}

std::string timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

json cascade_to_json(const CascadeNetwork& net) {
  json j{{"activation", to_string(net.activation)},
         {"blocks", json::array()},
         {"head", {{"weight", matrix_to_json(net.head_weight)}, {"bias", vector_to_json(net.head_bias)}}}};
  if (net.projection) {
    j["projection"] = {{"weight", matrix_to_json(net.projection->weight)},
                       {"bias", vector_to_json(net.projection->bias)}};
  }
  for (const CrbParams& b : net.blocks) j["blocks"].push_back(to_json(b));
  return j;
}

json confusion_json(const ConfusionFractions& c) {
  return {{"both_correct", c.both_correct},
          {"a_only", c.a_only},
          {"b_only", c.b_only},
          {"both_wrong", c.both_wrong}};
}

std::vector<int> classical_predictions(const CascadeNetwork& net, std::span<const Example> data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const Example& e : data) out.push_back(net.predict(e.x));
  return out;
}

std::vector<int> truth_of(std::span<const Example> data) {
  std::vector<int> out;
  out.reserve(data.size());
  for (const Example& e : data) out.push_back(e.label);
  return out;
}

double accuracy(std::span<const int> pred, std::span<const int> truth) {
  return 1.0 - disagreement_rate(pred, truth);
}

}  // namespace

// ---------------------------------------------------------------------------
// Digits

std::vector<Example> synthetic_simplex_blobs(std::size_t count, Index dim, double noise,
                                             std::uint64_t seed) {
  if (dim < 2) throw PreconditionError("synthetic_simplex_blobs: dim must be >= 2");
  RealVector down(dim), up(dim);
  for (Index i = 0; i < dim; ++i) {
    down[i] = static_cast<double>(dim - i);
    up[i] = static_cast<double>(i + 1);
  }
  down /= down.sum();
  up /= up.sum();
  std::vector<Example> out;
  out.reserve(count);
  for (std::size_t n = 0; n < count; ++n) {
    std::mt19937_64 rng(derive_seed(seed, n));
    std::normal_distribution<double> gauss;
    const int label = static_cast<int>(n % 2);
    RealVector x = label == 0 ? down : up;
    for (Index i = 0; i < dim; ++i) x[i] = std::max(x[i] + noise * gauss(rng), 1e-3);
    out.push_back({x / x.sum(), label});
  }
  return out;
}

DigitsData load_digits_data(const DigitsConfig& cfg, std::uint64_t seed) {
  DigitsData data;
  if (cfg.synthetic) {
    data.train = synthetic_simplex_blobs(cfg.train_count, cfg.synthetic->dim, cfg.synthetic->noise,
                                         derive_seed(seed, 0));
    data.test = synthetic_simplex_blobs(cfg.test_count, cfg.synthetic->dim, cfg.synthetic->noise,
                                        derive_seed(seed, 1));
    data.num_classes = 2;
    return data;
  }
  if (!cfg.mnist) throw ConfigError("digits: no data source configured");
  auto convert = [](const std::vector<MnistRecord>& records, std::size_t count,
                    const std::string& which) {
    if (records.size() < count) {
      throw DataError(which + " set has " + std::to_string(records.size()) + " records, " +
                      std::to_string(count) + " requested");
    }
    std::vector<Example> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
      const RealVector& px = records[i].pixels;
      out.push_back({image_to_simplex(std::span<const double>(px.data(), px.size())).values(),
                     records[i].digit});
    }
    return out;
  };
  data.train = convert(ingest_mnist(cfg.mnist->train_images, cfg.mnist->train_labels),
                       cfg.train_count, "training");
  data.test = convert(ingest_mnist(cfg.mnist->test_images, cfg.mnist->test_labels),
                      cfg.test_count, "test");
  data.num_classes = 10;
  return data;
}

std::vector<ReconstructedBlock> reconstruct_cascade(const CascadeNetwork& net,
                                                    const std::optional<TrotterSpec>& trotter) {
  std::vector<ReconstructedBlock> out;
  out.reserve(net.blocks.size());
  for (const CrbParams& b : net.blocks) {
    out.push_back(reconstruct_block(b.weight, b.bias, b.alpha, trotter));
  }
  return out;
}

std::vector<int> hqrn_predictions(const CascadeNetwork& net,
                                  const std::vector<ReconstructedBlock>& blocks,
                                  std::span<const Example> data, ShotSetting shots,
                                  std::uint64_t seed, EnsembleLedger* ledger) {
  const Index d = net.hidden_dim();
  std::vector<int> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    DensityMatrix rho = embed_classical_input(net.embed(data[i].x), d);
    const std::uint64_t item_seed = derive_seed(seed, i);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      const ShotConfig sc =
          shots ? ShotConfig::finite(*shots, derive_seed(item_seed, b)) : ShotConfig::infinite();
      rho = qrb_forward_sampled(rho, blocks[b].params, net.activation, sc,
                                i == 0 ? ledger : nullptr)
                .rho;
    }
    const RealVector pop = top_block_populations(rho, d);
    out.push_back(net.head_label(SimplexVector::assume_valid(pop / pop.sum())));
  }
  return out;
}

DigitsReport run_digits(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kDigits) throw ConfigError("run_digits: config task is not digits");
  cfg.validate();
  const DigitsConfig& dc = cfg.digits;
  const std::filesystem::path out_dir = cfg.output_dir;
  std::filesystem::create_directories(out_dir);
  if (dc.checkpoint_every > 0) std::filesystem::create_directories(out_dir / "checkpoints");

  const DigitsData data = load_digits_data(dc, derive_seed(cfg.seed, 1));
  const Index input_dim = data.train.front().x.size();
  const std::optional<Index> projection =
      input_dim == dc.hidden_dim ? std::nullopt : std::optional<Index>(input_dim);
  CascadeNetwork net = init_cascade(projection, dc.hidden_dim, dc.num_blocks, data.num_classes,
                                    dc.alpha, dc.activation, derive_seed(cfg.seed, 2), dc.init);

  DigitsReport report;
  json reconstructions = json::array();
  json ledgers = json::array();
  const std::vector<int> truth = truth_of(data.test);

  std::ofstream metrics = open_output(out_dir / "metrics.csv");
  metrics << "epoch,n_shots,error_rate,disagreement,both_correct,a_only,b_only,both_wrong\n";
  std::ofstream training = open_output(out_dir / "training.csv");
  training << "epoch,loss,train_error,test_error\n";

  auto evaluate = [&](const CascadeNetwork& current, int epoch) {
    if (dc.shots.empty()) return;
    const std::vector<int> classical = classical_predictions(current, data.test);
    const std::vector<ReconstructedBlock> blocks = reconstruct_cascade(current, dc.trotter);
    double max_err = 0.0;
    json blocks_json = json::array();
    for (const ReconstructedBlock& b : blocks) {
      max_err = std::max(max_err, b.max_abs_error);
      blocks_json.push_back(reconstruction_report(b));
    }
    report.max_reconstruction_error = std::max(report.max_reconstruction_error, max_err);
    reconstructions.push_back({{"epoch", epoch}, {"max_abs_error", max_err}, {"blocks", blocks_json}});

    for (std::size_t s = 0; s < dc.shots.size(); ++s) {
      const int repeats = dc.shots[s] ? dc.shot_repeats : 1;
      for (int r = 0; r < repeats; ++r) {
        const std::uint64_t eval_seed =
            derive_seed(derive_seed(cfg.seed, 1000 + s), static_cast<std::uint64_t>(r));
        EnsembleLedger ledger;
        const std::vector<int> hybrid =
            hqrn_predictions(current, blocks, data.test, dc.shots[s], eval_seed, &ledger);
        DigitsEvaluation ev{epoch,
                            dc.shots[s],
                            r,
                            1.0 - accuracy(hybrid, truth),
                            disagreement_rate(classical, hybrid),
                            confusion_decomposition(classical, hybrid, truth)};
        metrics << epoch << ',' << shots_label(ev.shots) << ',' << num(ev.error_rate) << ','
                << num(ev.disagreement) << ',' << num(ev.confusion.both_correct) << ','
                << num(ev.confusion.a_only) << ',' << num(ev.confusion.b_only) << ','
                << num(ev.confusion.both_wrong) << '\n';
        if (dc.shots[s] && r == 0 && ledgers.size() < dc.shots.size()) {
          ledgers.push_back({{"n_shots", *dc.shots[s]},
                             {"per_block_copies", ledger.per_block_copies()},
                             {"total_initial_copies", ledger.total_initial_copies()}});
        }
        report.evaluations.push_back(ev);
      }
    }
    metrics.flush();
  };

  const int last_epoch = dc.optimizer.epochs;
  EpochCallback on_epoch = [&](const EpochMetrics& m, const CascadeNetwork& current) {
    training << m.epoch << ',' << num(m.loss) << ',' << num(m.train_error) << ','
             << num(m.test_error) << '\n';
    if (dc.checkpoint_every > 0 && m.epoch % dc.checkpoint_every == 0) {
      char name[32];
      std::snprintf(name, sizeof name, "epoch_%04d.json", m.epoch);
      json ck = cascade_to_json(current);
      ck["epoch"] = m.epoch;
      write_json(out_dir / "checkpoints" / name, ck);
    }
    if (dc.reconstruct_every > 0 && m.epoch % dc.reconstruct_every == 0 && m.epoch != last_epoch) {
      evaluate(current, m.epoch);
    }
  };

  TrainingResult trained = train_crb_cascade(std::move(net), data.train, data.test, dc.optimizer,
                                             LossOptions{}, derive_seed(cfg.seed, 3), on_epoch);
  evaluate(trained.network, last_epoch);
  report.history = trained.history;

  json evals = json::array();
  for (const DigitsEvaluation& ev : report.evaluations) {
    evals.push_back({{"epoch", ev.epoch},
                     {"n_shots", shots_json(ev.shots)},
                     {"repeat", ev.repeat},
                     {"error_rate", ev.error_rate},
                     {"disagreement", ev.disagreement},
                     {"confusion", confusion_json(ev.confusion)}});
  }
  const double final_train = report.history.empty() ? error_rate(trained.network, data.train)
                                                     : report.history.back().train_error;
  const double final_test = report.history.empty() ? error_rate(trained.network, data.test)
                                                    : report.history.back().test_error;
  report.json = {{"task", "digits"},
                 {"generated_at", timestamp()},
                 {"seed", cfg.seed},
                 {"rng_algorithm", kRngAlgorithm},
                 {"config", to_json(cfg)},
                 {"train_size", data.train.size()},
                 {"test_size", data.test.size()},
                 {"classical", {{"final_train_error", final_train}, {"final_test_error", final_test}}},
                 {"reconstructions", reconstructions},
                 {"evaluations", evals},
                 {"ensemble", ledgers}};
  write_json(out_dir / "report.json", report.json);
  return report;
}

// ---------------------------------------------------------------------------
// Entanglement

namespace {

std::vector<std::vector<RealVector>> features_by_depth(std::span<const LabeledState> data,
                                                       std::span<const QrbParams> blocks,
                                                       Activation kind) {
  std::vector<DensityMatrix> states;
  states.reserve(data.size());
  for (const LabeledState& s : data) states.push_back(s.state);
  std::vector<std::vector<RealVector>> out;
  for (std::size_t k = 0;; ++k) {
    std::vector<RealVector> f;
    f.reserve(states.size());
    for (const DensityMatrix& s : states) f.push_back(measure_z(s).values());
    out.push_back(std::move(f));
    if (k == blocks.size()) break;
    for (DensityMatrix& s : states) s = qrb_forward(s, blocks[k], kind).rho;
  }
  return out;
}

std::vector<Example> to_examples(std::span<const LabeledState> data,
                                 const std::vector<RealVector>& features) {
  std::vector<Example> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back({features[i], data[i].label == EntanglementLabel::kEntangled ? 1 : 0});
  }
  return out;
}

double family_accuracy(std::span<const LabeledState> data, std::span<const int> pred,
                       std::span<const int> truth, StateFamily family) {
  std::size_t n = 0, ok = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (data[i].family != family) continue;
    ++n;
    ok += pred[i] == truth[i];
  }
  return n == 0 ? std::numeric_limits<double>::quiet_NaN()
                : static_cast<double>(ok) / static_cast<double>(n);
}

json nullable(double v) { return std::isnan(v) ? json(nullptr) : json(v); }

std::string optional_num(const std::optional<double>& v) { return v ? num(*v) : ""; }

}  // namespace

EntanglementReport run_entanglement(const ExperimentConfig& cfg) {
  if (cfg.task != Task::kEntanglement) {
    throw ConfigError("run_entanglement: config task is not entanglement");
  }
  cfg.validate();
  const EntanglementConfig& ec = cfg.entanglement;
  const std::filesystem::path out_dir = cfg.output_dir;
  std::filesystem::create_directories(out_dir);

  const std::vector<LabeledState> train = build_dataset(ec.train, derive_seed(cfg.seed, 1));
  const std::vector<LabeledState> test = build_dataset(ec.test, derive_seed(cfg.seed, 2));
  const std::vector<LabeledState> pairs = build_mimic_pairs(ec.mimic_pairs, derive_seed(cfg.seed, 3));

  const int max_depth = *std::max_element(ec.depths.begin(), ec.depths.end());
  const GreedyResult greedy =
      greedy_train_qrb_stack(train, max_depth, ec.greedy, derive_seed(cfg.seed, 4));

  const auto train_features = features_by_depth(train, greedy.blocks, ec.activation);
  const auto test_features = features_by_depth(test, greedy.blocks, ec.activation);
  const auto pair_features = features_by_depth(pairs, greedy.blocks, ec.activation);

  {
    std::ofstream traj = open_output(out_dir / "trajectories.csv");
    traj << "depth,set,index,family,label,p00,p01,p10\n";
    auto emit = [&](const char* set, std::span<const LabeledState> data,
                    const std::vector<std::vector<RealVector>>& features) {
      for (std::size_t k = 0; k < features.size(); ++k) {
        for (std::size_t i = 0; i < data.size(); ++i) {
          const RealVector& f = features[k][i];
          traj << k << ',' << set << ',' << i << ',' << to_string(data[i].family) << ','
               << static_cast<int>(data[i].label) << ',' << num(f[0]) << ',' << num(f[1]) << ','
               << num(f[2]) << '\n';
        }
      }
    };
    emit("test", test, test_features);
    emit("pairs", pairs, pair_features);
  }

  EntanglementReport report;
  json heads = json::object();
  std::ofstream metrics = open_output(out_dir / "metrics.csv");
  metrics << "depth,train_contrastive_loss,accuracy,werner,random_separable,adversarial,"
             "pair_accuracy,hqrn_accuracy,hqrn_agreement\n";

  for (int depth : ec.depths) {
    const auto k = static_cast<std::size_t>(depth);
    const std::vector<Example> train_ex = to_examples(train, train_features[k]);
    const std::vector<Example> test_ex = to_examples(test, test_features[k]);
    const std::vector<Example> pair_ex = to_examples(pairs, pair_features[k]);

    CascadeNetwork head = init_cascade(std::nullopt, 4, ec.head_blocks, 1, ec.alpha, ec.activation,
                                       derive_seed(cfg.seed, 100 + k), ec.head_init);
    const LossOptions loss{LossKind::kWeightedBce, positive_class_weight(train_ex)};
    TrainingResult trained = train_crb_cascade(std::move(head), train_ex, test_ex,
                                               ec.head_optimizer, loss, derive_seed(cfg.seed, 200 + k));
    const CascadeNetwork& net = trained.best_network;

    DepthResult r;
    r.depth = depth;
    r.head_best_epoch = trained.best_epoch;
    r.train_contrastive_loss =
        contrastive_loss(train_features[k], [&] {
          std::vector<int> l;
          for (const LabeledState& s : train) l.push_back(static_cast<int>(s.label));
          return l;
        }(), ec.greedy.loss).total;
    const std::vector<int> truth = truth_of(test_ex);
    const std::vector<int> pred = classical_predictions(net, test_ex);
    r.accuracy = accuracy(pred, truth);
    r.per_family = {family_accuracy(test, pred, truth, StateFamily::kWerner),
                    family_accuracy(test, pred, truth, StateFamily::kRandomSeparable),
                    family_accuracy(test, pred, truth, StateFamily::kAdversarial)};
    r.pair_accuracy =
        pairs.empty() ? std::numeric_limits<double>::quiet_NaN()
                      : accuracy(classical_predictions(net, pair_ex), truth_of(pair_ex));
    if (ec.reconstruct_head) {
      const std::vector<ReconstructedBlock> blocks = reconstruct_cascade(net, ec.trotter);
      const std::vector<int> hybrid = hqrn_predictions(net, blocks, test_ex, std::nullopt, 0);
      r.hqrn_accuracy = accuracy(hybrid, truth);
      r.hqrn_agreement = 1.0 - disagreement_rate(pred, hybrid);
    }
    metrics << depth << ',' << num(r.train_contrastive_loss) << ',' << num(r.accuracy) << ','
            << num(r.per_family.werner) << ',' << num(r.per_family.random_separable) << ','
            << num(r.per_family.adversarial) << ',' << num(r.pair_accuracy) << ','
            << optional_num(r.hqrn_accuracy) << ',' << optional_num(r.hqrn_agreement) << '\n';
    heads[std::to_string(depth)] = cascade_to_json(net);
    report.depths.push_back(r);
  }

  json qrbs = json::array();
  for (const QrbParams& b : greedy.blocks) qrbs.push_back(to_json(b));
  write_json(out_dir / "blocks.json", {{"qrbs", qrbs}, {"heads", heads}});

  json layers = json::array();
  for (std::size_t i = 0; i < greedy.layers.size(); ++i) {
    const GreedyLayerReport& l = greedy.layers[i];
    layers.push_back({{"layer", i + 1},
                      {"identity_start_loss", l.identity_start_loss},
                      {"best_loss", l.best_loss},
                      {"best_restart", l.best_restart},
                      {"discarded_restarts", l.discarded_restarts},
                      {"accepted_steps", l.accepted_losses.size() - 1}});
  }
  json depths = json::array();
  for (const DepthResult& r : report.depths) {
    json dj{{"depth", r.depth},
            {"train_contrastive_loss", r.train_contrastive_loss},
            {"accuracy", r.accuracy},
            {"per_family",
             {{"werner", nullable(r.per_family.werner)},
              {"random_separable", nullable(r.per_family.random_separable)},
              {"adversarial", nullable(r.per_family.adversarial)}}},
            {"pair_accuracy", nullable(r.pair_accuracy)},
            {"head_best_epoch", r.head_best_epoch}};
    dj["hqrn_accuracy"] = r.hqrn_accuracy ? json(*r.hqrn_accuracy) : json(nullptr);
    dj["hqrn_agreement"] = r.hqrn_agreement ? json(*r.hqrn_agreement) : json(nullptr);
    depths.push_back(dj);
  }
  report.json = {{"task", "entanglement"},
                 {"generated_at", timestamp()},
                 {"seed", cfg.seed},
                 {"rng_algorithm", kRngAlgorithm},
                 {"config", to_json(cfg)},
                 {"train_size", train.size()},
                 {"test_size", test.size()},
                 {"pair_count", ec.mimic_pairs},
                 {"greedy_layers", layers},
                 {"depths", depths}};
  write_json(out_dir / "report.json", report.json);
  return report;
}

}  // namespace hqrn
