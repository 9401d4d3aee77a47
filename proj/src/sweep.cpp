// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "reenet/harness.hpp"
#include "reenet/rng.hpp"

namespace reenet {
namespace {

// Streams hanging off the global seed.
enum Stream : std::uint64_t {
  kDataStream = 10,
  kNetInitStream = 11,
  kNetShuffleStream = 12,
  kBaselineInitStream = 13,
  kBaselineShuffleStream = 14,
  kEvalStream = 20,
};

TrainConfig seeded(TrainConfig tc, std::uint64_t seed) {
  tc.rng_seed = seed;
  return tc;
}

}  // namespace

DataSplits experiment_data(const ExperimentConfig& cfg) {
  return make_splits(cfg.dataset, derive_seed(cfg.seed, kDataStream));
}

PreparedModel prepare_model(const ExperimentConfig& cfg) {
  cfg.validate();
  DataSplits data = experiment_data(cfg);
  RecursiveEENetwork init(cfg.backbone, HeadMode::recursive,
                          derive_seed(cfg.seed, kNetInitStream));
  TrainResult trained =
      train(std::move(init), data.train, seeded(cfg.train, derive_seed(cfg.seed, kNetShuffleStream)));
  return {std::move(data), std::move(trained.net), std::move(trained.loss_curve)};
}

TrainResult train_baseline(const ExperimentConfig& cfg, const Dataset& train_set) {
  RecursiveEENetwork init(cfg.backbone, HeadMode::independent,
                          derive_seed(cfg.seed, kBaselineInitStream));
  return train(std::move(init), train_set,
               seeded(cfg.train, derive_seed(cfg.seed, kBaselineShuffleStream)));
}

SystemProfile build_profile(const ExperimentConfig& cfg, const RecursiveEENetwork& net) {
  SystemProfile p;
  p.flops_fractions = net.flops_fractions();
  if (cfg.profile.embedding_bits.empty()) {
    for (const ExitHead& head : net.heads()) {
      p.embedding_bits.push_back(static_cast<double>(net.blocks()[head.block].out) *
                                 cfg.profile.bits_per_activation);
    }
  } else {
    p.embedding_bits = cfg.profile.embedding_bits;
  }
  p.device_full_latency_s = cfg.profile.device_full_latency_s;
  p.server_full_latency_s = cfg.profile.server_full_latency_s;
  p.deadline_s = cfg.profile.deadline_s;
  p.validate();
  return p;
}

std::vector<SampleOutcome> sample_outcomes(const RecursiveEENetwork& net, const Dataset& data) {
  std::vector<SampleOutcome> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    out.push_back(outcome_from_trace(net.forward(data.row(i)), data.labels[i]));
  }
  return out;
}

EnvPair build_envs(const ExperimentConfig& cfg, const PreparedModel& model,
                   double margin_threshold, double gamma_comm) {
  RewardConfig reward = cfg.reward;
  reward.margin_threshold = margin_threshold;
  reward.gamma_comm = gamma_comm;
  reward.validate();
  const SystemProfile profile = build_profile(cfg, model.net);
  EnvPair envs{{profile, cfg.link, reward, sample_outcomes(model.net, model.data.validation)},
               {profile, cfg.link, reward, sample_outcomes(model.net, model.data.test)}};
  envs.train.validate();
  envs.eval.validate();
  return envs;
}

std::uint64_t sweep_point_seed(std::uint64_t global_seed, double margin_threshold,
                               double gamma_comm) {
  return derive_seed(global_seed, margin_threshold, gamma_comm);
}

namespace {

RunRecord run_point(const ExperimentConfig& cfg, const EnvPair& base, double m_th, double gamma) {
  EnvPair envs = base;
  envs.train.reward.margin_threshold = m_th;
  envs.train.reward.gamma_comm = gamma;
  envs.eval.reward = envs.train.reward;
  envs.train.reward.validate();

  const std::uint64_t seed = sweep_point_seed(cfg.seed, m_th, gamma);
  const PolicyTraining trained =
      train_policy(envs.train, cfg.rl.train_episodes, cfg.rl.exploration, cfg.rl.hyper, seed);
  // Every point is scored on the same frames so that differences between
  // points come from the policies alone.
  const PolicyEvaluation eval = evaluate_policy(trained.table, envs.eval, cfg.rl.eval_episodes,
                                                derive_seed(cfg.seed, kEvalStream));
  RunRecord r;
  r.m_th = m_th;
  r.gamma_comm = gamma;
  r.gamma_comp = envs.eval.reward.gamma_comp;
  r.comp_saving = eval.mean_comp_saving;
  r.comm_saving = eval.mean_comm_saving;
  r.goal_effectiveness = eval.goal_effectiveness;
  r.mean_delay_ms = eval.mean_delay_s * 1e3;
  r.exit_frequency = eval.exit_frequency;
  return r;
}

}  // namespace

RunRecord run_sweep_point(const ExperimentConfig& cfg, const PreparedModel& model,
                          double margin_threshold, double gamma_comm) {
  return run_point(cfg, build_envs(cfg, model, margin_threshold, gamma_comm), margin_threshold,
                   gamma_comm);
}

SweepResult run_sweep(const ExperimentConfig& cfg, unsigned jobs) {
  return run_sweep(cfg, prepare_model(cfg), jobs);
}

SweepResult run_sweep(const ExperimentConfig& cfg, const PreparedModel& model, unsigned jobs) {
  cfg.validate();
  std::vector<std::pair<double, double>> points;
  for (double m : cfg.sweep.margin_thresholds) {
    for (double g : cfg.sweep.gamma_comm) {
      points.emplace_back(m, g);
    }
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());

  const EnvPair base =
      build_envs(cfg, model, cfg.sweep.margin_thresholds.front(), cfg.sweep.gamma_comm.front());
  std::vector<RunRecord> records(points.size());
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < points.size(); i = next++) {
      try {
        records[i] = run_point(cfg, base, points[i].first, points[i].second);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) {
          error = std::current_exception();
        }
      }
    }
  };

  const unsigned n = std::clamp<unsigned>(jobs, 1, static_cast<unsigned>(points.size()));
  if (n == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < n; ++t) {
      pool.emplace_back(worker);
    }
  }
  if (error) {
    std::rethrow_exception(error);
  }
  return {config_fingerprint(cfg), std::move(records)};
}

Fig2Result run_fig2_analog(const ExperimentConfig& cfg) {
  const PreparedModel model = prepare_model(cfg);
  const TrainResult baseline = train_baseline(cfg, model.data.train);
  return run_fig2_analog(cfg, model, baseline.net);
}

Fig2Result run_fig2_analog(const ExperimentConfig& cfg, const PreparedModel& model,
                           const RecursiveEENetwork& baseline) {
  auto grid = [](const auto& values, auto make) {
    std::vector<HaltingPolicy> out;
    for (const auto& v : values) {
      out.push_back(make(v));
    }
    return out;
  };
  const auto margin = grid(cfg.fig2.margin_grid, HaltingPolicy::margin);
  const auto prob = grid(cfg.fig2.probability_grid, HaltingPolicy::probability);
  const auto patience = grid(cfg.fig2.patience_grid, HaltingPolicy::patient);

  Fig2Result result;
  result.recursive_margin = evaluate_flops_accuracy(model.net, model.data.test, margin);
  result.highest_probability = evaluate_flops_accuracy(baseline, model.data.test, prob);
  result.patience = evaluate_flops_accuracy(baseline, model.data.test, patience);
  result.dominance =
      weak_dominance(result.recursive_margin, result.highest_probability, cfg.fig2.flops_tolerance);
  return result;
}

}  // namespace reenet
