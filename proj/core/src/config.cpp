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

#include "hqrn/config.hpp"

#include <fstream>
#include <limits>
#include <set>

#include <nlohmann/json.hpp>

#include "hqrn/error.hpp"

namespace hqrn {
namespace {

using nlohmann::json;

// Reads fields of one JSON object and rejects any it was not asked about.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(where() + ": expected an object");
  }

  bool contains(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key);
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return j_.contains(key) && !j_.at(key).is_null();
  }

  const json& at(const std::string& key) {
    if (!has(key)) throw ConfigError(field(key) + ": required field missing");
    return j_.at(key);
  }

  std::string field(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  template <typename T>
  void read(const std::string& key, T& out) {
    if (!has(key)) return;
    out = convert<T>(j_.at(key), field(key));
  }

  void finish() const {
    for (const auto& item : j_.items()) {
      if (!seen_.count(item.key())) throw ConfigError(field(item.key()) + ": unknown field");
    }
  }

  template <typename T>
  static T convert(const json& v, const std::string& where) {
    if constexpr (std::is_same_v<T, bool>) {
      if (!v.is_boolean()) throw ConfigError(where + ": expected a boolean");
      return v.get<bool>();
    } else if constexpr (std::is_same_v<T, double>) {
      if (!v.is_number()) throw ConfigError(where + ": expected a number");
      return v.get<double>();
    } else if constexpr (std::is_same_v<T, std::string>) {
      if (!v.is_string()) throw ConfigError(where + ": expected a string");
      return v.get<std::string>();
    } else if constexpr (std::is_unsigned_v<T>) {
      const bool nonnegative =
          v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
      if (!nonnegative) throw ConfigError(where + ": expected a nonnegative integer");
      return v.get<T>();
    } else if constexpr (std::is_integral_v<T>) {
      if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
      if (v.is_number_unsigned() ? v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<T>::max())
                                 : (v.get<std::int64_t>() < std::numeric_limits<T>::min() ||
                                    v.get<std::int64_t>() > std::numeric_limits<T>::max())) {
        throw ConfigError(where + ": integer out of range");
      }
      return v.get<T>();
    } else {
      static_assert(sizeof(T) == 0, "unsupported config type");
    }
  }

 private:
  std::string where() const { return path_.empty() ? "config" : path_; }

  const json& j_;
  std::string path_;
  std::set<std::string> seen_;
};

Activation read_activation(ObjectReader& r, const std::string& key, Activation fallback) {
  if (!r.has(key)) return fallback;
  try {
    return activation_from_string(ObjectReader::convert<std::string>(r.at(key), r.field(key)));
  } catch (const ConfigError& e) {
    throw ConfigError(r.field(key) + ": " + e.what());
  }
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
  const std::filesystem::path path(p);
  return path.is_absolute() || base.empty() ? path : base / path;
}

OptimizerConfig read_optimizer(const json& j, const std::string& path, OptimizerConfig out) {
  ObjectReader r(j, path);
  if (r.has("algorithm")) {
    const auto name = ObjectReader::convert<std::string>(r.at("algorithm"), r.field("algorithm"));
    if (name == "rmsprop") {
      out.algorithm = OptimizerConfig::Algorithm::kRmsProp;
    } else if (name == "adam") {
      out.algorithm = OptimizerConfig::Algorithm::kAdam;
    } else {
      throw ConfigError(r.field("algorithm") + ": expected \"rmsprop\" or \"adam\"");
    }
  }
  r.read("learning_rate", out.learning_rate);
  r.read("weight_decay", out.weight_decay);
  r.read("epochs", out.epochs);
  r.read("batch_size", out.batch_size);
  r.read("gradient_clip", out.gradient_clip);
  r.finish();
  return out;
}

CascadeInit read_init(const json& j, const std::string& path, CascadeInit out) {
  ObjectReader r(j, path);
  r.read("projection_scale", out.projection_scale);
  r.read("block_weight_scale", out.block_weight_scale);
  r.read("block_bias", out.block_bias);
  r.read("head_scale", out.head_scale);
  r.finish();
  return out;
}

std::optional<TrotterSpec> read_trotter(ObjectReader& parent, const std::string& key,
                                        std::optional<TrotterSpec> fallback) {
  if (!parent.contains(key)) return fallback;
  // An explicit null selects the exact dilation.
  if (!parent.has(key)) return std::nullopt;
  ObjectReader r(parent.at(key), parent.field(key));
  TrotterSpec spec = fallback.value_or(TrotterSpec{});
  r.read("order", spec.order);
  r.read("steps", spec.steps);
  r.finish();
  return spec;
}

DatasetCounts read_counts(const json& j, const std::string& path, DatasetCounts out) {
  ObjectReader r(j, path);
  r.read("werner", out.werner);
  r.read("random_separable", out.random_separable);
  r.read("adversarial", out.adversarial);
  r.finish();
  return out;
}

ContrastiveLossConfig read_loss(const json& j, const std::string& path, ContrastiveLossConfig out) {
  ObjectReader r(j, path);
  r.read("beta", out.beta);
  r.read("d_min", out.d_min);
  r.read("close_threshold", out.close_threshold);
  r.read("close_penalty_scale", out.close_penalty_scale);
  r.finish();
  return out;
}

GreedyConfig read_greedy(const json& j, const std::string& path, GreedyConfig out) {
  ObjectReader r(j, path);
  r.read("restarts", out.restarts);
  r.read("max_steps", out.max_steps);
  r.read("learning_rate", out.learning_rate);
  r.read("momentum", out.momentum);
  r.read("fd_step", out.fd_step);
  r.read("gradient_clip", out.gradient_clip);
  r.read("min_learning_rate", out.min_learning_rate);
  r.read("max_learning_rate", out.max_learning_rate);
  r.read("lr_growth", out.lr_growth);
  if (r.has("loss")) out.loss = read_loss(r.at("loss"), r.field("loss"), out.loss);
  r.finish();
  return out;
}

std::vector<ShotSetting> read_shots(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<ShotSetting> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const json& v = j[i];
    const std::string where = path + "[" + std::to_string(i) + "]";
    if (v.is_string() && v.get<std::string>() == "infinite") {
      out.emplace_back(std::nullopt);
    } else if (v.is_number_integer() && !v.is_number_float() && v.get<std::int64_t>() >= 1) {
      out.emplace_back(v.get<std::uint64_t>());
    } else {
      throw ConfigError(where + ": expected a positive integer or \"infinite\"");
    }
  }
  return out;
}

template <typename T>
std::vector<T> read_list(const json& j, const std::string& path) {
  if (!j.is_array()) throw ConfigError(path + ": expected an array");
  std::vector<T> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(ObjectReader::convert<T>(j[i], path + "[" + std::to_string(i) + "]"));
  }
  return out;
}

DigitsConfig read_digits(const json& j, const std::filesystem::path& base) {
  DigitsConfig out;
  ObjectReader r(j, "digits");
  if (r.has("mnist")) {
    ObjectReader m(r.at("mnist"), "digits.mnist");
    MnistPaths paths;
    paths.train_images = resolve(base, ObjectReader::convert<std::string>(
                                           m.at("train_images"), m.field("train_images")));
    paths.train_labels = resolve(base, ObjectReader::convert<std::string>(
                                           m.at("train_labels"), m.field("train_labels")));
    paths.test_images = resolve(base, ObjectReader::convert<std::string>(
                                          m.at("test_images"), m.field("test_images")));
    paths.test_labels = resolve(base, ObjectReader::convert<std::string>(
                                          m.at("test_labels"), m.field("test_labels")));
    m.finish();
    out.mnist = paths;
  }
  if (r.has("synthetic")) {
    ObjectReader s(r.at("synthetic"), "digits.synthetic");
    SyntheticSpec spec;
    s.read("dim", spec.dim);
    s.read("noise", spec.noise);
    s.finish();
    out.synthetic = spec;
  }
  r.read("train_count", out.train_count);
  r.read("test_count", out.test_count);
  r.read("hidden_dim", out.hidden_dim);
  r.read("num_blocks", out.num_blocks);
  r.read("alpha", out.alpha);
  out.activation = read_activation(r, "activation", out.activation);
  if (r.has("init")) out.init = read_init(r.at("init"), r.field("init"), out.init);
  if (r.has("optimizer")) {
    out.optimizer = read_optimizer(r.at("optimizer"), r.field("optimizer"), out.optimizer);
  }
  if (r.has("shots")) out.shots = read_shots(r.at("shots"), r.field("shots"));
  r.read("shot_repeats", out.shot_repeats);
  r.read("reconstruct_every", out.reconstruct_every);
  r.read("checkpoint_every", out.checkpoint_every);
  out.trotter = read_trotter(r, "trotter", out.trotter);
  r.finish();
  return out;
}

EntanglementConfig read_entanglement(const json& j) {
  EntanglementConfig out;
  ObjectReader r(j, "entanglement");
  if (r.has("train")) out.train = read_counts(r.at("train"), r.field("train"), out.train);
  if (r.has("test")) out.test = read_counts(r.at("test"), r.field("test"), out.test);
  r.read("mimic_pairs", out.mimic_pairs);
  if (r.has("depths")) out.depths = read_list<int>(r.at("depths"), r.field("depths"));
  r.read("alpha", out.alpha);
  out.activation = read_activation(r, "activation", out.activation);
  if (r.has("greedy")) out.greedy = read_greedy(r.at("greedy"), r.field("greedy"), out.greedy);
  r.read("head_blocks", out.head_blocks);
  if (r.has("head_init")) out.head_init = read_init(r.at("head_init"), r.field("head_init"), out.head_init);
  if (r.has("head_optimizer")) {
    out.head_optimizer =
        read_optimizer(r.at("head_optimizer"), r.field("head_optimizer"), out.head_optimizer);
  }
  r.read("reconstruct_head", out.reconstruct_head);
  out.trotter = read_trotter(r, "trotter", out.trotter);
  r.finish();
  out.greedy.alpha = out.alpha;
  out.greedy.activation = out.activation;
  return out;
}

EquivalenceConfig read_equivalence(const json& j) {
  EquivalenceConfig out;
  ObjectReader r(j, "equivalence");
  r.read("equivalence_trials", out.equivalence_trials);
  if (r.has("dims")) out.dims = read_list<Index>(r.at("dims"), r.field("dims"));
  r.read("closed_form_trials", out.closed_form_trials);
  r.read("max_depth", out.max_depth);
  r.read("reconstruction_trials", out.reconstruction_trials);
  if (auto t = read_trotter(r, "trotter", out.trotter)) out.trotter = *t;
  r.read("shot_seeds", out.shot_seeds);
  if (r.has("shot_list")) {
    out.shot_list = read_list<std::uint64_t>(r.at("shot_list"), r.field("shot_list"));
  }
  r.finish();
  return out;
}

json trotter_json(const std::optional<TrotterSpec>& t) {
  return t ? json{{"order", t->order}, {"steps", t->steps}} : json(nullptr);
}

json optimizer_json(const OptimizerConfig& o) {
  return {{"algorithm", to_string(o.algorithm)}, {"learning_rate", o.learning_rate},
          {"weight_decay", o.weight_decay},      {"epochs", o.epochs},
          {"batch_size", o.batch_size},          {"gradient_clip", o.gradient_clip}};
}

json init_json(const CascadeInit& i) {
  return {{"projection_scale", i.projection_scale},
          {"block_weight_scale", i.block_weight_scale},
          {"block_bias", i.block_bias},
          {"head_scale", i.head_scale}};
}

json counts_json(const DatasetCounts& c) {
  return {{"werner", c.werner}, {"random_separable", c.random_separable},
          {"adversarial", c.adversarial}};
}

}  // namespace

std::string_view to_string(Task t) {
  switch (t) {
    case Task::kDigits:
      return "digits";
    case Task::kEntanglement:
      return "entanglement";
    case Task::kEquivalenceSuite:
      return "equivalence-suite";
  }
  return "unknown";
}

Task task_from_string(std::string_view name) {
  if (name == "digits") return Task::kDigits;
  if (name == "entanglement") return Task::kEntanglement;
  if (name == "equivalence-suite") return Task::kEquivalenceSuite;
  throw ConfigError("unknown task \"" + std::string(name) +
                    "\" (expected digits, entanglement or equivalence-suite)");
}

void DigitsConfig::validate() const {
  if (mnist.has_value() == synthetic.has_value()) {
    throw ConfigError("digits: exactly one of \"mnist\" and \"synthetic\" must be given");
  }
  if (synthetic && synthetic->dim < 2) throw ConfigError("digits.synthetic.dim must be >= 2");
  if (synthetic && !(synthetic->noise >= 0.0)) throw ConfigError("digits.synthetic.noise must be >= 0");
  if (train_count == 0 || test_count == 0) throw ConfigError("digits: counts must be positive");
  if (hidden_dim < 2 || hidden_dim > kMaxDenseDim / 2) {
    throw ConfigError("digits.hidden_dim must lie in [2, " + std::to_string(kMaxDenseDim / 2) + "]");
  }
  if (!shots.empty() && !is_power_of_two(hidden_dim)) {
    throw ConfigError("digits.hidden_dim must be a power of two when shots are evaluated");
  }
  if (num_blocks < 0) throw ConfigError("digits.num_blocks must be >= 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("digits.alpha must lie in (0, 1)");
  if (shot_repeats < 1) throw ConfigError("digits.shot_repeats must be >= 1");
  if (reconstruct_every < 0 || checkpoint_every < 0) {
    throw ConfigError("digits: reconstruct_every and checkpoint_every must be >= 0");
  }
  optimizer.validate();
  if (trotter) {
    try {
      trotter->validate();
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("digits.trotter: ") + e.what());
    }
  }
}

void EntanglementConfig::validate() const {
  if (train.total() == 0 || test.total() == 0) {
    throw ConfigError("entanglement: train and test counts must be positive");
  }
  if (depths.empty()) throw ConfigError("entanglement.depths must not be empty");
  for (int d : depths) {
    if (d < 0) throw ConfigError("entanglement.depths entries must be >= 0");
  }
  if (!(alpha > 0.0 && alpha < 1.0)) throw ConfigError("entanglement.alpha must lie in (0, 1)");
  if (head_blocks < 0) throw ConfigError("entanglement.head_blocks must be >= 0");
  head_optimizer.validate();
  try {
    greedy.validate();
    if (trotter) trotter->validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("entanglement: ") + e.what());
  }
}

void EquivalenceConfig::validate() const {
  if (equivalence_trials < 0 || closed_form_trials < 0 || reconstruction_trials < 0) {
    throw ConfigError("equivalence: trial counts must be >= 0");
  }
  if (dims.empty()) throw ConfigError("equivalence.dims must not be empty");
  for (Index d : dims) {
    if (d < 2 || d > kMaxDenseDim / 2) throw ConfigError("equivalence.dims entries out of range");
  }
  if (max_depth < 1) throw ConfigError("equivalence.max_depth must be >= 1");
  if (shot_seeds < 1) throw ConfigError("equivalence.shot_seeds must be >= 1");
  if (shot_list.size() < 2) throw ConfigError("equivalence.shot_list needs at least two entries");
  for (std::uint64_t n : shot_list) {
    if (n == 0) throw ConfigError("equivalence.shot_list entries must be positive");
  }
  try {
    trotter.validate();
  } catch (const PreconditionError& e) {
    throw ConfigError(std::string("equivalence.trotter: ") + e.what());
  }
}

void ExperimentConfig::validate() const {
  switch (task) {
    case Task::kDigits:
      digits.validate();
      break;
    case Task::kEntanglement:
      entanglement.validate();
      break;
    case Task::kEquivalenceSuite:
      equivalence.validate();
      break;
  }
}

ExperimentConfig parse_config(const json& j, const std::filesystem::path& base_dir) {
  ExperimentConfig cfg;
  ObjectReader r(j, "");
  cfg.task = task_from_string(ObjectReader::convert<std::string>(r.at("task"), "task"));
  r.read("seed", cfg.seed);
  if (r.has("output_dir")) {
    cfg.output_dir = ObjectReader::convert<std::string>(r.at("output_dir"), "output_dir");
    if (cfg.output_dir.is_relative() && !base_dir.empty()) cfg.output_dir = base_dir / cfg.output_dir;
  }
  const bool need_digits = cfg.task == Task::kDigits;
  if (r.has("digits")) {
    cfg.digits = read_digits(r.at("digits"), base_dir);
  } else if (need_digits) {
    throw ConfigError("digits: required section missing for task digits");
  }
  if (r.has("entanglement")) cfg.entanglement = read_entanglement(r.at("entanglement"));
  if (r.has("equivalence")) cfg.equivalence = read_equivalence(r.at("equivalence"));
  r.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
  return parse_config(j, path.parent_path());
}

json to_json(const ExperimentConfig& cfg) {
  json j{{"task", to_string(cfg.task)},
         {"seed", cfg.seed},
         {"output_dir", cfg.output_dir.string()}};
  switch (cfg.task) {
    case Task::kDigits: {
      const DigitsConfig& d = cfg.digits;
      json shots = json::array();
      for (const ShotSetting& s : d.shots) shots.push_back(s ? json(*s) : json("infinite"));
      json dj{{"train_count", d.train_count},
              {"test_count", d.test_count},
              {"hidden_dim", d.hidden_dim},
              {"num_blocks", d.num_blocks},
              {"alpha", d.alpha},
              {"activation", to_string(d.activation)},
              {"init", init_json(d.init)},
              {"optimizer", optimizer_json(d.optimizer)},
              {"shots", shots},
              {"shot_repeats", d.shot_repeats},
              {"reconstruct_every", d.reconstruct_every},
              {"checkpoint_every", d.checkpoint_every},
              {"trotter", trotter_json(d.trotter)}};
      if (d.mnist) {
        dj["mnist"] = {{"train_images", d.mnist->train_images.string()},
                       {"train_labels", d.mnist->train_labels.string()},
                       {"test_images", d.mnist->test_images.string()},
                       {"test_labels", d.mnist->test_labels.string()}};
      }
      if (d.synthetic) dj["synthetic"] = {{"dim", d.synthetic->dim}, {"noise", d.synthetic->noise}};
      j["digits"] = std::move(dj);
      break;
    }
    case Task::kEntanglement: {
      const EntanglementConfig& e = cfg.entanglement;
      const GreedyConfig& g = e.greedy;
      j["entanglement"] = {
          {"train", counts_json(e.train)},
          {"test", counts_json(e.test)},
          {"mimic_pairs", e.mimic_pairs},
          {"depths", e.depths},
          {"alpha", e.alpha},
          {"activation", to_string(e.activation)},
          {"greedy",
           {{"restarts", g.restarts},
            {"max_steps", g.max_steps},
            {"learning_rate", g.learning_rate},
            {"momentum", g.momentum},
            {"fd_step", g.fd_step},
            {"gradient_clip", g.gradient_clip},
            {"min_learning_rate", g.min_learning_rate},
            {"max_learning_rate", g.max_learning_rate},
            {"lr_growth", g.lr_growth},
            {"loss",
             {{"beta", g.loss.beta},
              {"d_min", g.loss.d_min},
              {"close_threshold", g.loss.close_threshold},
              {"close_penalty_scale", g.loss.close_penalty_scale}}}}},
          {"head_blocks", e.head_blocks},
          {"head_init", init_json(e.head_init)},
          {"head_optimizer", optimizer_json(e.head_optimizer)},
          {"reconstruct_head", e.reconstruct_head},
          {"trotter", trotter_json(e.trotter)}};
      break;
    }
    case Task::kEquivalenceSuite: {
      const EquivalenceConfig& q = cfg.equivalence;
      j["equivalence"] = {{"equivalence_trials", q.equivalence_trials},
                          {"dims", q.dims},
                          {"closed_form_trials", q.closed_form_trials},
                          {"max_depth", q.max_depth},
                          {"reconstruction_trials", q.reconstruction_trials},
                          {"trotter", trotter_json(q.trotter)},
                          {"shot_seeds", q.shot_seeds},
                          {"shot_list", q.shot_list}};
      break;
    }
  }
  return j;
}

}  // namespace hqrn
