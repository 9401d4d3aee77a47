// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <vector>

#include "reenet/episode.hpp"
#include "reenet/latency.hpp"
#include "reenet/network.hpp"
#include "reenet/radio.hpp"
#include "reenet/rng.hpp"

namespace reenet {

struct RewardConfig {
  double gamma_comm = 1.0;
  double gamma_comp = 1.0;
  double margin_threshold = 0.2;
  double penalty = -1.0;

  void validate() const;
};

/// Weighted savings when the proxy goal is met, the penalty otherwise.
[[nodiscard]] double reward(const KpiRecord& kpis, const RewardConfig& cfg);

/// What the network would issue for one sample at every exit k = 0..K.
/// Entry K is the final combined prediction, which is also what the server
/// returns after an offload.
struct SampleOutcome {
  std::vector<double> margins;
  std::vector<std::uint8_t> correct;
};

[[nodiscard]] SampleOutcome outcome_from_trace(const PredictionTrace& trace, std::size_t label);

/// Everything an episode needs: profile, link, reward shaping and the pool of
/// samples frames are drawn from.
struct PolicyEnv {
  SystemProfile profile;
  LinkConfig link;
  RewardConfig reward;
  std::vector<SampleOutcome> samples;

  void validate() const;
  [[nodiscard]] std::size_t last_exit() const { return profile.last_exit(); }
};

/// Per-frame context: the sample being classified and the link it sees.
struct Frame {
  std::size_t sample = 0;
  double distance_m = 0.0;
  ChannelDraw channel;
};

[[nodiscard]] Frame start_frame(const PolicyEnv& env, Rng& rng);

inline constexpr double kUnavailable = -std::numeric_limits<double>::infinity();

class QTable {
 public:
  QTable() = default;
  /// `num_exits` = K + 1. Available actions start at 0, unavailable ones at
  /// kUnavailable.
  QTable(std::size_t num_exits, std::size_t num_mcs);

  [[nodiscard]] std::size_t num_exits() const { return num_exits_; }
  [[nodiscard]] std::size_t num_mcs() const { return num_mcs_; }
  [[nodiscard]] std::size_t num_states() const { return num_exits_ * num_mcs_; }

  [[nodiscard]] bool available(const MdpState& s, ActionKind a) const;
  [[nodiscard]] double value(const MdpState& s, ActionKind a) const;
  void set_value(const MdpState& s, ActionKind a, double v);
  [[nodiscard]] std::uint64_t visits(const MdpState& s, ActionKind a) const;
  void add_visit(const MdpState& s, ActionKind a);

  /// Highest-valued available action; the lowest action index wins ties.
  [[nodiscard]] ActionKind greedy(const MdpState& s) const;
  [[nodiscard]] double max_value(const MdpState& s) const;

  [[nodiscard]] std::span<const double> values() const { return values_; }

  /// Shape and values only; visit counts are bookkeeping.
  bool operator==(const QTable& other) const {
    return num_exits_ == other.num_exits_ && num_mcs_ == other.num_mcs_ &&
           values_ == other.values_;
  }

 private:
  [[nodiscard]] std::size_t index(const MdpState& s, ActionKind a) const;

  std::size_t num_exits_ = 0;
  std::size_t num_mcs_ = 0;
  std::vector<double> values_;
  std::vector<std::uint64_t> visits_;
};

/// Result of one slot. Terminal steps carry the issued result.
struct StepResult {
  bool terminal = false;
  MdpState next;
  std::optional<double> reward;
  std::size_t exit = 0;
  bool offloaded = false;
  DelayBreakdown delay;
  double margin = 0.0;
  KpiRecord kpis;
  bool correct = false;
};

/// Applies `action` in `state`. Compute redraws the fading for the next slot
/// (updating `frame.channel`) unless it completes the network, which ends the
/// frame as a local exit at K. Throws std::invalid_argument for an
/// unavailable action.
[[nodiscard]] StepResult step(const PolicyEnv& env, Frame& frame, const MdpState& state,
                              ActionKind action, Rng& rng);

struct QHyper {
  double alpha = 0.1;
  double discount = 1.0;
  bool alpha_decay = false;  // alpha / sqrt(visits)

  void validate() const;
};

/// One temporal-difference update. `next` empty means terminal.
void q_update(QTable& table, const MdpState& s, ActionKind a, std::optional<double> reward,
              std::optional<MdpState> next, const QHyper& hyper);

/// Linear epsilon decay from `start` to `end` over the first
/// `decay_fraction` of the episodes, then constant.
struct ExplorationSchedule {
  double start = 1.0;
  double end = 0.05;
  double decay_fraction = 0.6;

  void validate() const;
  [[nodiscard]] double epsilon(std::size_t episode, std::size_t total) const;
};

struct PolicyTraining {
  QTable table;
  std::vector<double> episode_rewards;
  std::vector<double> learning_curve;  // mean reward per window
};

[[nodiscard]] PolicyTraining train_policy(const PolicyEnv& env, std::size_t episodes,
                                          const ExplorationSchedule& schedule,
                                          const QHyper& hyper, std::uint64_t seed,
                                          std::size_t window = 0);

/// Runs one greedy frame against `table`.
[[nodiscard]] EpisodeRecord run_greedy_episode(const QTable& table, const PolicyEnv& env,
                                               Rng& rng);

struct PolicyEvaluation {
  std::vector<EpisodeRecord> records;
  double mean_comm_saving = 0.0;
  double mean_comp_saving = 0.0;
  double goal_effectiveness = 0.0;   // on time and correct
  double proxy_effectiveness = 0.0;  // on time and margin above threshold
  double mean_delay_s = 0.0;         // frames without a link outage
  double mean_reward = 0.0;
  // frequency[k][offloaded]; sums to 1 over all entries.
  std::vector<std::array<double, 2>> exit_frequency;
};

[[nodiscard]] PolicyEvaluation evaluate_policy(const QTable& table, const PolicyEnv& env,
                                               std::size_t episodes, std::uint64_t seed);

/// Text serialization: a version line, a shape line, then one
/// `k,mcs,action,value` row per entry in (k, mcs, action) order.
void write_qtable(std::ostream& out, const QTable& table);
[[nodiscard]] QTable read_qtable(std::istream& in);

}  // namespace reenet
