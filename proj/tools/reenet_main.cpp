// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end: network training, halting-policy comparison,
// single policy runs and full trade-off sweeps.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <thread>

#include "CLI11.hpp"
#include "reenet/checkpoint.hpp"
#include "reenet/harness.hpp"

namespace fs = std::filesystem;
using namespace reenet;

namespace {

struct CommonOptions {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out = "out";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config, "JSON experiment config (defaults when omitted)")
      ->check(CLI::ExistingFile);
  cmd->add_option("--seed", opt.seed, "override the config's global seed");
  cmd->add_option("--out", opt.out, "output directory")->capture_default_str();
}

ExperimentConfig resolve_config(const CommonOptions& opt) {
  ExperimentConfig cfg = opt.config.empty() ? default_config() : load_config(opt.config);
  if (opt.seed) {
    cfg.seed = *opt.seed;
  }
  cfg.validate();
  return cfg;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

void write_series(const fs::path& path, const std::string& header,
                  const std::vector<double>& values) {
  std::ostringstream csv;
  csv << header << '\n';
  for (std::size_t i = 0; i < values.size(); ++i) {
    csv << i << ',' << format_double(values[i]) << '\n';
  }
  write_text(path, csv.str());
}

void print_accuracy(const RecursiveEENetwork& net, const Dataset& test) {
  const auto fractions = net.flops_fractions();
  std::printf("exit  flops   accuracy\n");
  for (std::size_t k = 0; k < net.num_exits(); ++k) {
    std::printf("%4zu  %.3f   %.4f\n", k, fractions[k], exit_accuracy(net, test, k));
  }
}

int cmd_train_net(const CommonOptions& opt) {
  const ExperimentConfig cfg = resolve_config(opt);
  fs::create_directories(opt.out);
  const PreparedModel model = prepare_model(cfg);
  save_checkpoint(fs::path(opt.out) / "net.ckpt", model.net);
  write_series(fs::path(opt.out) / "train_loss.csv", "epoch,loss", model.loss_curve);
  print_accuracy(model.net, model.data.test);
  std::printf("wrote %s\n", (fs::path(opt.out) / "net.ckpt").c_str());
  return 0;
}

int cmd_fig2(const CommonOptions& opt) {
  const ExperimentConfig cfg = resolve_config(opt);
  const Fig2Result result = run_fig2_analog(cfg);
  emit_fig2(result, opt.out);
  std::printf("recursive-margin weakly dominates highest-probability at %zu of %zu matched points (%.2f)\n",
              result.dominance.dominated, result.dominance.matched, result.dominance.fraction());
  return 0;
}

struct PolicyOptions {
  double m_th = 0.2;
  double gamma_comm = 1.0;
  std::string checkpoint;
};

int cmd_train_policy(const CommonOptions& opt, const PolicyOptions& popt) {
  const ExperimentConfig cfg = resolve_config(opt);
  fs::create_directories(opt.out);
  std::optional<PreparedModel> model;
  if (popt.checkpoint.empty()) {
    model.emplace(prepare_model(cfg));
  } else {
    RecursiveEENetwork net = load_checkpoint(popt.checkpoint);
    if (net.mode() != HeadMode::recursive || net.config() != cfg.backbone.resolved()) {
      throw std::invalid_argument("checkpoint does not match the configured backbone");
    }
    model.emplace(PreparedModel{experiment_data(cfg), std::move(net), {}});
  }

  const EnvPair envs = build_envs(cfg, *model, popt.m_th, popt.gamma_comm);
  const PolicyTraining trained =
      train_policy(envs.train, cfg.rl.train_episodes, cfg.rl.exploration, cfg.rl.hyper,
                   sweep_point_seed(cfg.seed, popt.m_th, popt.gamma_comm));
  {
    std::ofstream q(fs::path(opt.out) / "qtable.txt", std::ios::binary);
    write_qtable(q, trained.table);
  }
  write_series(fs::path(opt.out) / "learning_curve.csv", "window,mean_reward",
               trained.learning_curve);

  const RunRecord record = run_sweep_point(cfg, *model, popt.m_th, popt.gamma_comm);
  emit_report({record}, opt.out);
  std::printf("comp saving %.4f  comm saving %.4f  goal effectiveness %.4f  mean delay %.2f ms\n",
              record.comp_saving, record.comm_saving, record.goal_effectiveness,
              record.mean_delay_ms);
  return 0;
}

int cmd_sweep(const CommonOptions& opt, unsigned jobs) {
  const ExperimentConfig cfg = resolve_config(opt);
  const SweepResult result = run_sweep(cfg, jobs);
  emit_report(result.records, opt.out);
  write_text(fs::path(opt.out) / "config.json", config_to_json(cfg));
  write_text(fs::path(opt.out) / "fingerprint.txt", result.fingerprint + "\n");
  std::printf("%-6s %-6s %-8s %-8s %-8s %s\n", "m_th", "g_comm", "comp", "comm", "goal", "delay_ms");
  for (const RunRecord& r : result.records) {
    std::printf("%-6.2f %-6.2f %-8.4f %-8.4f %-8.4f %.2f\n", r.m_th, r.gamma_comm, r.comp_saving,
                r.comm_saving, r.goal_effectiveness, r.mean_delay_ms);
  }
  std::printf("config %s, %zu sweep points written to %s\n", result.fingerprint.c_str(),
              result.records.size(), opt.out.c_str());
  return 0;
}

int cmd_report(const CommonOptions& opt) {
  render_plots(opt.out);
  std::printf("plots re-rendered in %s\n", opt.out.c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Recursive early-exit networks with goal-oriented offloading"};
  app.require_subcommand(1);

  CommonOptions train_net_opt, fig2_opt, policy_opt, sweep_opt, report_opt;
  PolicyOptions popt;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());

  auto* train_net = app.add_subcommand("train-net", "train and checkpoint the recursive network");
  add_common(train_net, train_net_opt);

  auto* fig2 = app.add_subcommand("fig2", "compare halting policies on accuracy vs FLOPs");
  add_common(fig2, fig2_opt);

  auto* train_policy_cmd = app.add_subcommand("train-policy", "train and evaluate one offloading policy");
  add_common(train_policy_cmd, policy_opt);
  train_policy_cmd->add_option("--m-th", popt.m_th, "margin threshold")->capture_default_str();
  train_policy_cmd->add_option("--gamma-comm", popt.gamma_comm, "communication weight")
      ->capture_default_str();
  train_policy_cmd->add_option("--checkpoint", popt.checkpoint, "use a trained network")
      ->check(CLI::ExistingFile);

  auto* sweep = app.add_subcommand("sweep", "run the full margin-threshold x weight grid");
  add_common(sweep, sweep_opt);
  sweep->add_option("--jobs", jobs, "worker threads")->check(CLI::PositiveNumber);

  auto* report = app.add_subcommand("report", "re-render plots from the CSVs in --out");
  add_common(report, report_opt);

  auto* defaults = app.add_subcommand("default-config", "print the built-in config as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*train_net) return cmd_train_net(train_net_opt);
    if (*fig2) return cmd_fig2(fig2_opt);
    if (*train_policy_cmd) return cmd_train_policy(policy_opt, popt);
    if (*sweep) return cmd_sweep(sweep_opt, jobs);
    if (*report) return cmd_report(report_opt);
    if (*defaults) {
      std::cout << config_to_json(default_config());
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "reenet: error: %s\n", e.what());
    return 1;
  }
  return 1;
}
