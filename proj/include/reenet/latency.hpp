// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "reenet/episode.hpp"

namespace reenet {

/// Compute and payload profile of a split network, indexed by early exit
/// k = 0..K where K is the final classifier.
struct SystemProfile {
  std::vector<double> flops_fractions;  // F_k / F_K, strictly increasing, last = 1
  std::vector<double> embedding_bits;   // N_k
  double device_full_latency_s = 0.050;
  double server_full_latency_s = 0.010;
  double deadline_s = 0.040;

  void validate() const;
  [[nodiscard]] std::size_t num_exits() const { return flops_fractions.size(); }
  [[nodiscard]] std::size_t last_exit() const { return flops_fractions.size() - 1; }
  [[nodiscard]] double max_embedding_bits() const;
};

/// Loop delay of computing up to exit `k` and either stopping there or
/// shipping the embedding at `rate_bps` for the server to finish.
[[nodiscard]] DelayBreakdown delay(const SystemProfile& profile, std::size_t k, bool offloaded,
                                   double rate_bps);

/// (F_K - F_k) / F_K.
[[nodiscard]] double comp_saving(const SystemProfile& profile, std::size_t k);

/// 1 for a local result; (max_j N_j - N_k) / max_j N_j when offloading.
/// Throws for ActionKind::compute, which issues no result.
[[nodiscard]] double comm_saving(const SystemProfile& profile, std::size_t k, ActionKind action);

/// Deadline met and margin strictly above the threshold.
[[nodiscard]] bool proxy_goal(const DelayBreakdown& delay, double margin, double margin_threshold);

/// Savings, margin and both goal indicators for one issued result.
[[nodiscard]] KpiRecord make_kpis(const SystemProfile& profile, std::size_t k, ActionKind action,
                                  const DelayBreakdown& delay, double margin,
                                  double margin_threshold, bool correct);

/// Share of records that were both on time and correctly classified.
[[nodiscard]] double goal_effectiveness(std::span<const EpisodeRecord> records);

}  // namespace reenet
