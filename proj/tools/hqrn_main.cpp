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

// hqrn digits|entangle|verify --config <path> [--seed N] [--out DIR]
//
// Exit codes: 0 success, 1 failed verification or internal error, 2 config
// error, 3 data error.

#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "hqrn/error.hpp"
#include "hqrn/experiments.hpp"

namespace {

constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;
constexpr int kExitData = 3;

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
};

hqrn::ExperimentConfig prepare(const Options& opt, hqrn::Task expected) {
  hqrn::ExperimentConfig cfg = hqrn::load_config(opt.config);
  if (cfg.task != expected) {
    throw hqrn::ConfigError("config task is \"" + std::string(hqrn::to_string(cfg.task)) +
                            "\" but the command expects \"" +
                            std::string(hqrn::to_string(expected)) + "\"");
  }
  if (opt.seed) cfg.seed = *opt.seed;
  if (opt.out) cfg.output_dir = *opt.out;
  return cfg;
}

int digits(const Options& opt) {
  const hqrn::DigitsReport r = hqrn::run_digits(prepare(opt, hqrn::Task::kDigits));
  const auto& classical = r.json.at("classical");
  std::cout << "classical test error " << classical.at("final_test_error").get<double>() << "\n";
  for (const hqrn::DigitsEvaluation& ev : r.evaluations) {
    std::cout << "epoch " << ev.epoch << " shots "
              << (ev.shots ? std::to_string(*ev.shots) : std::string("inf")) << " error "
              << ev.error_rate << " disagreement " << ev.disagreement << "\n";
  }
  return 0;
}

int entangle(const Options& opt) {
  const hqrn::EntanglementReport r = hqrn::run_entanglement(prepare(opt, hqrn::Task::kEntanglement));
  for (const hqrn::DepthResult& d : r.depths) {
    std::cout << "M=" << d.depth << " accuracy " << d.accuracy << " pair accuracy "
              << d.pair_accuracy;
    if (d.hqrn_accuracy) std::cout << " hqrn accuracy " << *d.hqrn_accuracy;
    std::cout << "\n";
  }
  return 0;
}

int verify(const Options& opt) {
  const hqrn::EquivalenceReport r =
      hqrn::run_equivalence_suite(prepare(opt, hqrn::Task::kEquivalenceSuite));
  for (const hqrn::SuiteResult& s : r.suites) {
    std::cout << (s.passed ? "PASS " : "FAIL ") << s.name << " measured " << s.measured
              << " threshold " << s.threshold << " (" << s.seconds << " s)\n";
  }
  return r.all_passed ? 0 : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hybrid quantum residual network experiments"};
  app.require_subcommand(1);
  Options opt;
  auto add_common = [&opt](CLI::App* sub) {
    sub->add_option("--config", opt.config, "JSON experiment config")->required();
    sub->add_option("--seed", opt.seed, "Override the config seed");
    sub->add_option("--out", opt.out, "Override the output directory");
  };
  CLI::App* digits_cmd = app.add_subcommand("digits", "Train and reconstruct the digit classifier");
  CLI::App* entangle_cmd = app.add_subcommand("entangle", "Run the entanglement depth sweep");
  CLI::App* verify_cmd = app.add_subcommand("verify", "Run the equivalence property suites");
  for (CLI::App* sub : {digits_cmd, entangle_cmd, verify_cmd}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (digits_cmd->parsed()) return digits(opt);
    if (entangle_cmd->parsed()) return entangle(opt);
    return verify(opt);
  } catch (const hqrn::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const hqrn::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFailure;
  }
}
