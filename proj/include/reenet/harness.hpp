// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "reenet/dataset.hpp"
#include "reenet/halting.hpp"
#include "reenet/latency.hpp"
#include "reenet/network.hpp"
#include "reenet/policy.hpp"
#include "reenet/radio.hpp"
#include "reenet/training.hpp"

namespace reenet {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

inline constexpr int kConfigVersion = 1;

/// Latency constants plus optional explicit payload sizes. When
/// `embedding_bits` is empty, N_k = width of the exit's block x
/// `bits_per_activation`.
struct ProfileConfig {
  double device_full_latency_s = 0.050;
  double server_full_latency_s = 0.010;
  double deadline_s = 0.040;
  double bits_per_activation = 8.0;
  std::vector<double> embedding_bits;
};

struct RlConfig {
  QHyper hyper;
  ExplorationSchedule exploration;
  std::size_t train_episodes = 20000;
  std::size_t eval_episodes = 5000;
};

struct SweepConfig {
  std::vector<double> margin_thresholds = {0.09, 0.1, 0.2, 0.3};
  std::vector<double> gamma_comm = {1.0, 1.5, 2.0, 2.5, 3.0, 3.5};
};

struct Fig2Config {
  std::vector<double> margin_grid;
  std::vector<double> probability_grid;
  std::vector<std::size_t> patience_grid;
  double flops_tolerance = 0.02;
};

struct ExperimentConfig {
  int version = kConfigVersion;
  std::uint64_t seed = 1;
  DatasetConfig dataset;
  BackboneConfig backbone;
  TrainConfig train;
  LinkConfig link;
  ProfileConfig profile;
  RewardConfig reward;  // gamma_comm / margin_threshold are overridden per sweep point
  RlConfig rl;
  SweepConfig sweep;
  Fig2Config fig2;

  /// Throws ConfigError naming the offending field.
  void validate() const;
};

/// The bundled desk-scale experiment.
[[nodiscard]] ExperimentConfig default_config();

/// Parses a JSON document; missing keys take defaults, unknown keys are
/// rejected.
[[nodiscard]] ExperimentConfig parse_config(const std::string& json_text);
[[nodiscard]] ExperimentConfig load_config(const std::filesystem::path& path);
/// Canonical JSON with every field spelled out.
[[nodiscard]] std::string config_to_json(const ExperimentConfig& cfg);
/// 16 hex digits of FNV-1a over the canonical JSON.
[[nodiscard]] std::string config_fingerprint(const ExperimentConfig& cfg);

// ---------------------------------------------------------------------------
// Pipeline pieces

struct PreparedModel {
  DataSplits data;
  RecursiveEENetwork net;
  std::vector<double> loss_curve;
};

/// Train/validation/test splits of the configured dataset.
[[nodiscard]] DataSplits experiment_data(const ExperimentConfig& cfg);
/// Generates the data and trains the recursive network.
[[nodiscard]] PreparedModel prepare_model(const ExperimentConfig& cfg);
/// BranchyNet-style baseline: independent softmax exits, summed cross-entropy.
[[nodiscard]] TrainResult train_baseline(const ExperimentConfig& cfg, const Dataset& train_set);

[[nodiscard]] SystemProfile build_profile(const ExperimentConfig& cfg,
                                          const RecursiveEENetwork& net);
[[nodiscard]] std::vector<SampleOutcome> sample_outcomes(const RecursiveEENetwork& net,
                                                         const Dataset& data);

/// Environments for one sweep point: policies learn on validation samples
/// and are scored on test samples.
struct EnvPair {
  PolicyEnv train;
  PolicyEnv eval;
};
[[nodiscard]] EnvPair build_envs(const ExperimentConfig& cfg, const PreparedModel& model,
                                 double margin_threshold, double gamma_comm);

// ---------------------------------------------------------------------------
// Sweep

struct RunRecord {
  double m_th = 0.0;
  double gamma_comm = 0.0;
  double gamma_comp = 0.0;
  double comp_saving = 0.0;
  double comm_saving = 0.0;
  double goal_effectiveness = 0.0;
  double mean_delay_ms = 0.0;
  // exit_frequency[k] = {local, offloaded}
  std::vector<std::array<double, 2>> exit_frequency;

  bool operator==(const RunRecord&) const = default;
};

struct SweepResult {
  std::string fingerprint;
  std::vector<RunRecord> records;  // sorted by (m_th, gamma_comm)
};

/// Seed of the policy run at one sweep point; independent of which other
/// points are in the sweep.
[[nodiscard]] std::uint64_t sweep_point_seed(std::uint64_t global_seed, double margin_threshold,
                                             double gamma_comm);

[[nodiscard]] RunRecord run_sweep_point(const ExperimentConfig& cfg, const PreparedModel& model,
                                        double margin_threshold, double gamma_comm);
[[nodiscard]] SweepResult run_sweep(const ExperimentConfig& cfg, unsigned jobs = 1);
[[nodiscard]] SweepResult run_sweep(const ExperimentConfig& cfg, const PreparedModel& model,
                                    unsigned jobs = 1);

// ---------------------------------------------------------------------------
// Halting-policy comparison

struct Fig2Result {
  std::vector<TradeoffPoint> recursive_margin;
  std::vector<TradeoffPoint> highest_probability;
  std::vector<TradeoffPoint> patience;
  DominanceSummary dominance;  // recursive-margin against highest-probability
};

[[nodiscard]] Fig2Result run_fig2_analog(const ExperimentConfig& cfg);
[[nodiscard]] Fig2Result run_fig2_analog(const ExperimentConfig& cfg, const PreparedModel& model,
                                         const RecursiveEENetwork& baseline);

// ---------------------------------------------------------------------------
// Persistence

/// Writes tradeoff.csv, exit_hist.csv and their SVG plots into `dir`.
void emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& dir);
/// Reads tradeoff.csv and exit_hist.csv back into records.
[[nodiscard]] std::vector<RunRecord> read_report(const std::filesystem::path& dir);
/// Re-renders the SVG plots from the CSVs in `dir`.
void render_plots(const std::filesystem::path& dir);

void write_tradeoff_csv(std::ostream& out, const std::vector<RunRecord>& records);
void write_exit_hist_csv(std::ostream& out, const std::vector<RunRecord>& records);
[[nodiscard]] std::vector<RunRecord> parse_report(std::istream& tradeoff, std::istream& exit_hist);

void write_fig2_csv(std::ostream& out, const Fig2Result& result);
void emit_fig2(const Fig2Result& result, const std::filesystem::path& dir);

/// Shortest decimal text that reads back to the same double.
[[nodiscard]] std::string format_double(double v);

}  // namespace reenet
