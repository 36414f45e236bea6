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

#include <sys/wait.h>
#include <unistd.h>

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "hqrn/config.hpp"
#include "hqrn/error.hpp"
#include "hqrn/experiments.hpp"
#include "hqrn/mnist.hpp"

using namespace hqrn;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("hqrn_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

void put_u32(std::string& s, std::uint32_t v) {
  for (int shift = 24; shift >= 0; shift -= 8) s.push_back(static_cast<char>((v >> shift) & 0xFF));
}

void write_file(const fs::path& p, const std::string& bytes) {
  std::ofstream out(p, std::ios::binary);
  out << bytes;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string idx_images(std::uint32_t magic, std::uint32_t count, std::uint32_t rows, std::uint32_t cols,
                       std::size_t pixel_bytes) {
  std::string s;
  put_u32(s, magic);
  put_u32(s, count);
  put_u32(s, rows);
  put_u32(s, cols);
  for (std::size_t i = 0; i < pixel_bytes; ++i) s.push_back(static_cast<char>(i % 256));
  return s;
}

std::string idx_labels(std::uint32_t magic, const std::vector<std::uint8_t>& labels) {
  std::string s;
  put_u32(s, magic);
  put_u32(s, static_cast<std::uint32_t>(labels.size()));
  for (std::uint8_t l : labels) s.push_back(static_cast<char>(l));
  return s;
}

std::string data_error_message(const fs::path& images, const fs::path& labels) {
  try {
    ingest_mnist(images, labels);
  } catch (const DataError& e) {
    return e.what();
  }
  return "";
}

json small_digits(const fs::path& out) {
  return json{{"task", "digits"},
              {"seed", 3},
              {"output_dir", out.string()},
              {"digits",
               {{"synthetic", {{"dim", 4}, {"noise", 0.1}}},
                {"train_count", 40},
                {"test_count", 40},
                {"hidden_dim", 4},
                {"num_blocks", 3},
                {"init", {{"block_weight_scale", 0.5}, {"block_bias", 0.5}}},
                {"optimizer", {{"epochs", 4}, {"batch_size", 8}}},
                {"shots", {"infinite", 1000}},
                {"checkpoint_every", 2},
                {"trotter", {{"order", 2}, {"steps", 16}}}}}};
}

json small_entanglement(const fs::path& out) {
  return json{{"task", "entanglement"},
              {"seed", 2},
              {"output_dir", out.string()},
              {"entanglement",
               {{"train", {{"werner", 8}, {"random_separable", 6}, {"adversarial", 12}}},
                {"test", {{"werner", 8}, {"random_separable", 6}, {"adversarial", 12}}},
                {"mimic_pairs", 10},
                {"depths", {0, 1}},
                {"greedy", {{"restarts", 1}, {"max_steps", 5}}},
                {"head_blocks", 2},
                {"head_optimizer", {{"algorithm", "adam"}, {"learning_rate", 0.001}, {"epochs", 3}}}}}};
}

int run_cli(const std::vector<std::string>& args) {
  std::string cmd = HQRN_CLI_PATH;
  for (const std::string& a : args) cmd += " '" + a + "'";
  cmd += " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

fs::path write_config(const fs::path& dir, const json& j) {
  const fs::path p = dir / "config.json";
  std::ofstream(p) << j.dump(2);
  return p;
}

}  // namespace

TEST_SUITE("config") {
  TEST_CASE("defaults and task names") {
    const ExperimentConfig cfg = parse_config(json{{"task", "equivalence-suite"}});
    CHECK(cfg.task == Task::kEquivalenceSuite);
    CHECK(cfg.equivalence.equivalence_trials == 500);
    CHECK(task_from_string("digits") == Task::kDigits);
    CHECK(to_string(Task::kEntanglement) == "entanglement");
    CHECK_THROWS_AS(task_from_string("mnist"), ConfigError);
  }

  TEST_CASE("unknown fields are rejected at every level") {
    CHECK_THROWS_AS(parse_config(json{{"task", "digits"}, {"sede", 1}}), ConfigError);
    json j = small_digits("out");
    j["digits"]["optimizer"]["lr"] = 0.1;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_entanglement("out");
    j["entanglement"]["greedy"]["restart"] = 2;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
  }

  TEST_CASE("invalid values") {
    json j = small_digits("out");
    j["digits"]["shots"] = {0};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_digits("out");
    j["digits"]["shots"] = {"lots"};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_digits("out");
    j["digits"]["alpha"] = 1.5;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_digits("out");
    j["digits"]["trotter"] = {{"order", 3}, {"steps", 8}};
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j = small_digits("out");
    j["digits"]["hidden_dim"] = 6;
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    j["digits"]["shots"] = json::array();
    CHECK_NOTHROW(parse_config(j));
    j = small_digits("out");
    j["digits"]["num_blocks"] = "ten";
    CHECK_THROWS_AS(parse_config(j), ConfigError);
    CHECK_THROWS_AS(parse_config(json{{"task", "digits"}}), ConfigError);
  }

  TEST_CASE("shots, trotter and paths") {
    json j = small_digits("out");
    j["digits"]["trotter"] = nullptr;
    const ExperimentConfig cfg = parse_config(j, "/base");
    CHECK_FALSE(cfg.digits.trotter.has_value());
    REQUIRE(cfg.digits.shots.size() == 2);
    CHECK_FALSE(cfg.digits.shots[0].has_value());
    CHECK(*cfg.digits.shots[1] == 1000);
    CHECK(cfg.output_dir == fs::path("/base/out"));
    const ExperimentConfig defaults = parse_config(small_entanglement("out"));
    CHECK_FALSE(defaults.entanglement.trotter.has_value());
    json m{{"task", "digits"},
           {"digits",
            {{"mnist",
              {{"train_images", "a"}, {"train_labels", "b"}, {"test_images", "c"}, {"test_labels", "/d"}}}}}};
    const ExperimentConfig mc = parse_config(m, "/data");
    CHECK(mc.digits.mnist->train_images == fs::path("/data/a"));
    CHECK(mc.digits.mnist->test_labels == fs::path("/d"));
  }

  TEST_CASE("serialized config parses back to the same document") {
    for (const json& j : {small_digits("/tmp/x"), small_entanglement("/tmp/y"),
                          json{{"task", "equivalence-suite"}, {"seed", 9}}}) {
      const json once = to_json(parse_config(j));
      CHECK(to_json(parse_config(once)) == once);
    }
  }

  TEST_CASE("shipped configs load") {
    for (const char* name : {"verify.json", "digits_desk.json", "digits_synthetic.json", "entanglement_desk.json"}) {
      CHECK_NOTHROW(load_config(fs::path(HQRN_SOURCE_DIR) / "configs" / name));
    }
    CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
  }
}

TEST_SUITE("mnist") {
  TEST_CASE("two-image fixture") {
    const fs::path dir = scratch_dir("mnist_ok");
    write_file(dir / "img", idx_images(kIdxImageMagic, 2, 28, 28, 2 * 784));
    write_file(dir / "lbl", idx_labels(kIdxLabelMagic, {3, 9}));
    const std::vector<MnistRecord> recs = ingest_mnist(dir / "img", dir / "lbl");
    REQUIRE(recs.size() == 2);
    CHECK(recs[0].digit == 3);
    CHECK(recs[1].digit == 9);
    CHECK(recs[0].pixels.size() == 784);
    CHECK(recs[0].pixels.minCoeff() >= 0.0);
    CHECK(recs[0].pixels.maxCoeff() <= 1.0);
    CHECK(recs[0].pixels[1] == doctest::Approx(1.0 / 255.0));
    CHECK(recs[1].pixels[0] == doctest::Approx((784 % 256) / 255.0));
  }

  TEST_CASE("malformed files give structured errors") {
    const fs::path dir = scratch_dir("mnist_bad");
    write_file(dir / "lbl", idx_labels(kIdxLabelMagic, {1, 2}));
    write_file(dir / "magic", idx_images(0x00000802, 2, 28, 28, 2 * 784));
    const std::string magic = data_error_message(dir / "magic", dir / "lbl");
    CHECK(magic.find("magic") != std::string::npos);
    CHECK(magic.find("offset 0") != std::string::npos);
    write_file(dir / "trunc", idx_images(kIdxImageMagic, 2, 28, 28, 784 + 10));
    CHECK(data_error_message(dir / "trunc", dir / "lbl").find("truncated") != std::string::npos);
    write_file(dir / "three", idx_images(kIdxImageMagic, 3, 28, 28, 3 * 784));
    CHECK(data_error_message(dir / "three", dir / "lbl").find("mismatch") != std::string::npos);
    write_file(dir / "shape", idx_images(kIdxImageMagic, 2, 27, 28, 2 * 27 * 28));
    CHECK_FALSE(data_error_message(dir / "shape", dir / "lbl").empty());
    write_file(dir / "img", idx_images(kIdxImageMagic, 2, 28, 28, 2 * 784));
    write_file(dir / "badlbl", idx_labels(kIdxLabelMagic, {1, 12}));
    CHECK_FALSE(data_error_message(dir / "img", dir / "badlbl").empty());
    CHECK_FALSE(data_error_message(dir / "missing", dir / "lbl").empty());
  }

  TEST_CASE("bundled test file matches its header count") {
    const fs::path dir = fs::path(HQRN_SOURCE_DIR) / "data" / "mnist";
    const std::string header = read_file(dir / "t10k-labels-idx1-ubyte").substr(4, 4);
    const std::uint32_t count = (static_cast<std::uint8_t>(header[0]) << 24) |
                                (static_cast<std::uint8_t>(header[1]) << 16) |
                                (static_cast<std::uint8_t>(header[2]) << 8) |
                                static_cast<std::uint8_t>(header[3]);
    const std::vector<MnistRecord> recs =
        ingest_mnist(dir / "t10k-images-idx3-ubyte", dir / "t10k-labels-idx1-ubyte");
    CHECK(recs.size() == count);
  }
}

TEST_SUITE("experiments") {
  TEST_CASE("synthetic digits run writes stable outputs") {
    const fs::path a = scratch_dir("digits_a"), b = scratch_dir("digits_b");
    const DigitsReport ra = run_digits(parse_config(small_digits(a)));
    run_digits(parse_config(small_digits(b)));
    for (const char* f : {"metrics.csv", "training.csv"}) {
      CHECK(fs::exists(a / f));
      CHECK(read_file(a / f) == read_file(b / f));
    }
    CHECK(fs::exists(a / "report.json"));
    CHECK(fs::exists(a / "checkpoints" / "epoch_0002.json"));
    CHECK(read_file(a / "metrics.csv").rfind("epoch,n_shots,error_rate,disagreement,both_correct,a_only,b_only,both_wrong", 0) == 0);
    CHECK(ra.history.size() == 4);
    REQUIRE(ra.evaluations.size() == 2);
    for (const DigitsEvaluation& ev : ra.evaluations) {
      if (!ev.shots) CHECK(ev.disagreement < 0.01);
      const ConfusionFractions& c = ev.confusion;
      CHECK(std::abs(c.both_correct + c.a_only + c.b_only + c.both_wrong - 1.0) < 1e-12);
    }
  }

  TEST_CASE("empty shot list gives a classical-only report") {
    const fs::path out = scratch_dir("digits_classical");
    json j = small_digits(out);
    j["digits"]["shots"] = json::array();
    const DigitsReport r = run_digits(parse_config(j));
    CHECK(r.evaluations.empty());
    CHECK(r.history.size() == 4);
  }

  TEST_CASE("entanglement sweep has one row per depth") {
    const fs::path out = scratch_dir("entangle");
    const EntanglementReport r = run_entanglement(parse_config(small_entanglement(out)));
    REQUIRE(r.depths.size() == 2);
    CHECK(r.depths[0].depth == 0);
    CHECK(r.depths[1].depth == 1);
    CHECK(r.depths[0].pair_accuracy == 0.5);
    for (const char* f : {"report.json", "metrics.csv", "trajectories.csv", "blocks.json"}) CHECK(fs::exists(out / f));
    const fs::path again = scratch_dir("entangle_again");
    run_entanglement(parse_config(small_entanglement(again)));
    CHECK(read_file(out / "metrics.csv") == read_file(again / "metrics.csv"));
    CHECK(read_file(out / "trajectories.csv") == read_file(again / "trajectories.csv"));
  }

  TEST_CASE("equivalence suite passes across seeds") {
    json eq{{"equivalence_trials", 50},
            {"closed_form_trials", 10},
            {"reconstruction_trials", 10},
            {"shot_seeds", 30}};
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      const fs::path out = scratch_dir("verify_" + std::to_string(seed));
      const EquivalenceReport r = run_equivalence_suite(
          parse_config(json{{"task", "equivalence-suite"}, {"seed", seed}, {"output_dir", out.string()}, {"equivalence", eq}}));
      for (const SuiteResult& s : r.suites) CHECK_MESSAGE(s.passed, s.name << " measured " << s.measured);
      CHECK(r.json.at("max_equivalence_error").get<double>() < 1e-9);
      CHECK(fs::exists(out / "report.json"));
    }
  }
}

TEST_SUITE("command line") {
  TEST_CASE("exit codes") {
    const fs::path dir = scratch_dir("cli");
    const fs::path good = write_config(dir, small_digits(dir / "run"));
    CHECK(run_cli({"digits", "--config", good.string()}) == 0);
    CHECK(fs::exists(dir / "run" / "metrics.csv"));
    CHECK(run_cli({"digits", "--config", good.string(), "--seed", "5", "--out", (dir / "other").string()}) == 0);
    CHECK(fs::exists(dir / "other" / "metrics.csv"));
    CHECK(run_cli({"entangle", "--config", good.string()}) == 2);
    CHECK(run_cli({"digits"}) == 2);
    CHECK(run_cli({"launch", "--config", good.string()}) == 2);
    CHECK(run_cli({"digits", "--config", (dir / "missing.json").string()}) == 2);

    const fs::path bad_dir = scratch_dir("cli_bad");
    json unknown = small_digits(bad_dir / "run");
    unknown["digits"]["epochs"] = 3;
    CHECK(run_cli({"digits", "--config", write_config(bad_dir, unknown).string()}) == 2);

    const fs::path data_dir = scratch_dir("cli_data");
    json missing{{"task", "digits"},
                 {"output_dir", (data_dir / "run").string()},
                 {"digits",
                  {{"mnist",
                    {{"train_images", "nope-images"},
                     {"train_labels", "nope-labels"},
                     {"test_images", "nope-images"},
                     {"test_labels", "nope-labels"}}}}}};
    CHECK(run_cli({"digits", "--config", write_config(data_dir, missing).string()}) == 3);
  }

  TEST_CASE("verify subcommand") {
    const fs::path dir = scratch_dir("cli_verify");
    json cfg{{"task", "equivalence-suite"},
             {"seed", 4},
             {"output_dir", (dir / "run").string()},
             {"equivalence",
              {{"equivalence_trials", 20}, {"closed_form_trials", 5}, {"reconstruction_trials", 5}, {"shot_seeds", 30}}}};
    CHECK(run_cli({"verify", "--config", write_config(dir, cfg).string()}) == 0);
    CHECK(fs::exists(dir / "run" / "metrics.csv"));
  }
}
