// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

namespace reenet {

/// Per-slot decision. Exit and Offload end the frame; Compute advances to
/// the next early exit.
enum class ActionKind : std::uint8_t { exit = 0, compute = 1, offload = 2 };

inline constexpr std::size_t kNumActions = 3;

[[nodiscard]] constexpr std::string_view to_string(ActionKind a) {
  switch (a) {
    case ActionKind::exit:
      return "exit";
    case ActionKind::compute:
      return "compute";
    case ActionKind::offload:
      return "offload";
  }
  return "unknown";
}

struct MdpState {
  std::size_t exit_index = 0;
  std::size_t mcs_index = 0;
  bool operator==(const MdpState&) const = default;
};

struct DelayBreakdown {
  double local_s = 0.0;
  double tx_s = 0.0;
  double remote_s = 0.0;
  double total_s = 0.0;
  bool met_deadline = false;
  // Offloaded over a zero-rate slot: the transfer never completes. tx_s stays
  // 0 and met_deadline is false.
  bool link_outage = false;
};

struct KpiRecord {
  double comp_saving = 0.0;
  double comm_saving = 0.0;
  double margin = 0.0;
  bool proxy_goal_met = false;
  bool true_goal_met = false;
};

/// One frame: the trajectory through the exits and the issued result.
struct EpisodeRecord {
  std::vector<std::pair<MdpState, ActionKind>> trajectory;
  std::size_t final_exit = 0;
  bool offloaded = false;
  DelayBreakdown delay;
  double margin = 0.0;
  double reward = 0.0;
  KpiRecord kpis;
  bool correct = false;
};

}  // namespace reenet
