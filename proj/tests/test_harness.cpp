// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "doctest.h"
#include "nlohmann/json.hpp"
#include "reenet/harness.hpp"

using namespace reenet;
using nlohmann::json;

namespace {

// Small enough to train in well under a second.
ExperimentConfig tiny_config() {
  ExperimentConfig cfg = default_config();
  cfg.dataset.blobs.dim = 4;
  cfg.dataset.blobs.num_classes = 3;
  cfg.dataset.num_train = 300;
  cfg.dataset.num_validation = 100;
  cfg.dataset.num_test = 100;
  cfg.backbone.input_dim = 4;
  cfg.backbone.num_classes = 3;
  cfg.backbone.hidden_dims = {12, 12, 8, 8};
  cfg.backbone.head_dim = 6;
  cfg.train.epochs = 3;
  cfg.rl.train_episodes = 400;
  cfg.rl.eval_episodes = 200;
  cfg.sweep.margin_thresholds = {0.1, 0.3};
  cfg.sweep.gamma_comm = {1.0, 2.0};
  cfg.validate();
  return cfg;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  std::filesystem::path path;
  explicit TempDir(const std::string& name)
      : path(std::filesystem::temp_directory_path() / name) {
    std::filesystem::remove_all(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("default config survives a JSON round trip") {
  const ExperimentConfig cfg = default_config();
  const std::string text = config_to_json(cfg);
  const ExperimentConfig back = parse_config(text);
  CHECK(config_to_json(back) == text);
  CHECK(config_fingerprint(back) == config_fingerprint(cfg));
  CHECK(config_fingerprint(cfg).size() == 16);
  CHECK(json::parse(text)["version"] == kConfigVersion);
}

TEST_CASE("partial configs fill in defaults") {
  const ExperimentConfig cfg = parse_config(R"({"version": 1, "seed": 7, "rl": {"alpha": 0.2}})");
  CHECK(cfg.seed == 7);
  CHECK(cfg.rl.hyper.alpha == 0.2);
  CHECK(cfg.rl.train_episodes == default_config().rl.train_episodes);
  CHECK(config_fingerprint(cfg) != config_fingerprint(default_config()));
}

TEST_CASE("config errors name the offending field") {
  auto fails_with = [](const std::string& text, const std::string& needle) {
    CHECK_THROWS_WITH_AS((void)parse_config(text), doctest::Contains(needle.c_str()),
                         std::invalid_argument);
  };
  fails_with(R"({"seed": 1})", "version");
  fails_with(R"({"version": 2})", "version");
  fails_with(R"({"version": 1, "sede": 1})", "sede");
  fails_with(R"({"version": 1, "rl": {"alpah": 0.1}})", "rl.alpah");
  fails_with(R"({"version": 1, "link": {"placement": "ring"}})", "link");
  fails_with(R"({"version": 1, "rl": {"alpha": "fast"}})", "rl.alpha");
  fails_with(R"({"version": 1, "rl": {"train_episodes": -5}})", "rl.train_episodes");
  fails_with(R"({"version": 1, "sweep": {"margin_thresholds": [0.2, 1.5]}})", "margin");
  fails_with(R"({"version": 1, "sweep": {"gamma_comm": []}})", "gamma_comm");
  fails_with(R"({"version": 1, "backbone": {"input_dim": 3}})", "input_dim");
  fails_with(R"({"version": 1, "train": {"optimizer": "rmsprop"}})", "optimizer");
  fails_with(R"({"version": 1, "profile": {"embedding_bits": [1, 2]}})", "embedding_bits");
  CHECK_THROWS_AS((void)parse_config("{not json"), std::invalid_argument);
  CHECK_THROWS_AS((void)load_config("/nonexistent/reenet.json"), ConfigError);
}

TEST_CASE("sweep point seeds depend only on their own coordinates") {
  const auto a = sweep_point_seed(1, 0.2, 1.5);
  CHECK(a == sweep_point_seed(1, 0.2, 1.5));
  CHECK(a != sweep_point_seed(1, 0.2, 2.0));
  CHECK(a != sweep_point_seed(1, 0.3, 1.5));
  CHECK(a != sweep_point_seed(2, 0.2, 1.5));
}

TEST_CASE("payload sizes follow block widths") {
  const ExperimentConfig cfg = tiny_config();
  const PreparedModel model = prepare_model(cfg);
  const SystemProfile p = build_profile(cfg, model.net);
  CHECK(p.embedding_bits == std::vector<double>{96, 96, 64, 64});
  CHECK(p.flops_fractions == model.net.flops_fractions());
}

TEST_CASE("sweeps are deterministic and extra points leave others unchanged") {
  const ExperimentConfig cfg = tiny_config();
  const PreparedModel model = prepare_model(cfg);
  const SweepResult a = run_sweep(cfg, model, 1);
  const SweepResult b = run_sweep(cfg, model, 3);
  REQUIRE(a.records.size() == 4);
  CHECK(a.records == b.records);

  ExperimentConfig wider = cfg;
  wider.sweep.gamma_comm.push_back(3.0);
  const SweepResult c = run_sweep(wider, model, 2);
  REQUIRE(c.records.size() == 6);
  for (const RunRecord& r : a.records) {
    CHECK(std::find(c.records.begin(), c.records.end(), r) != c.records.end());
  }

  const RunRecord single = run_sweep_point(cfg, model, 0.3, 2.0);
  CHECK(single == a.records.back());

  for (const RunRecord& r : a.records) {
    double total = 0.0;
    for (const auto& row : r.exit_frequency) total += row[0] + row[1];
    CHECK(total == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(r.gamma_comp == 1.0);
    CHECK(r.comp_saving >= 0.0);
    CHECK(r.comm_saving <= 1.0);
  }
}

TEST_CASE("report files round-trip and re-render") {
  const ExperimentConfig cfg = tiny_config();
  const SweepResult result = run_sweep(cfg, 1);
  TempDir dir("reenet_test_report");
  emit_report(result.records, dir.path);
  CHECK(read_report(dir.path) == result.records);

  const std::string tradeoff = slurp(dir.path / "tradeoff.csv");
  CHECK(tradeoff.rfind(
            "m_th,gamma_comm,gamma_comp,comp_saving,comm_saving,goal_effectiveness,mean_delay_ms\n",
            0) == 0);
  CHECK(std::count(tradeoff.begin(), tradeoff.end(), '\n') == 5);
  CHECK(slurp(dir.path / "exit_hist.csv").rfind("m_th,gamma_comm,exit_index,offloaded,frequency\n", 0) == 0);
  for (const char* svg : {"tradeoff.svg", "exit_hist_offload.svg", "exit_hist_local.svg"}) {
    const std::string text = slurp(dir.path / svg);
    CHECK(text.find("<svg") != std::string::npos);
    CHECK(text.find("</svg>") != std::string::npos);
  }
  std::filesystem::remove(dir.path / "tradeoff.svg");
  render_plots(dir.path);
  CHECK(std::filesystem::exists(dir.path / "tradeoff.svg"));

  // A second identical run writes identical bytes.
  TempDir again("reenet_test_report_again");
  emit_report(run_sweep(cfg, 2).records, again.path);
  CHECK(slurp(again.path / "tradeoff.csv") == tradeoff);
  CHECK(slurp(again.path / "exit_hist.csv") == slurp(dir.path / "exit_hist.csv"));
}

TEST_CASE("malformed report tables are rejected") {
  std::vector<RunRecord> one(1);
  one[0].m_th = 0.2;
  one[0].gamma_comm = 1.0;
  one[0].gamma_comp = 1.0;
  one[0].exit_frequency = {{0.25, 0.0}, {0.5, 0.25}};
  std::ostringstream t;
  std::ostringstream h;
  write_tradeoff_csv(t, one);
  write_exit_hist_csv(h, one);
  {
    std::istringstream ti(t.str());
    std::istringstream hi(h.str());
    CHECK(parse_report(ti, hi) == one);
  }
  {
    std::istringstream ti(t.str() + "0.3,1,1,0.5\n");
    std::istringstream hi(h.str());
    CHECK_THROWS_AS((void)parse_report(ti, hi), std::invalid_argument);
  }
  {
    std::istringstream ti("m_th,oops\n");
    std::istringstream hi(h.str());
    CHECK_THROWS_AS((void)parse_report(ti, hi), std::invalid_argument);
  }
  {
    std::istringstream ti(t.str());
    std::istringstream hi(h.str() + "0.9,1,0,0,1\n");
    CHECK_THROWS_AS((void)parse_report(ti, hi), std::invalid_argument);
  }
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(format_double(0.1) == "0.1");
  CHECK(format_double(1.0) == "1");
  CHECK(format_double(-2.5e-7) == "-2.5e-07");
  const double x = 0.1 + 0.2;
  CHECK(std::stod(format_double(x)) == x);
}

TEST_CASE("unwritable output directories are reported") {
  CHECK_THROWS((void)emit_report({}, "/proc/reenet-cannot-write-here"));
}
