// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "reenet/dataset.hpp"
#include "reenet/network.hpp"

namespace reenet {

enum class HaltingKind { recursive_margin, highest_probability, patience };

[[nodiscard]] std::string_view to_string(HaltingKind kind);
[[nodiscard]] HaltingKind halting_kind_from_string(std::string_view name);

struct HaltingPolicy {
  HaltingKind kind = HaltingKind::recursive_margin;
  double threshold = 0.5;    // margin or probability threshold
  std::size_t patience = 2;  // patience kind only

  void validate() const;

  static HaltingPolicy margin(double t) { return {HaltingKind::recursive_margin, t, 1}; }
  static HaltingPolicy probability(double t) { return {HaltingKind::highest_probability, t, 1}; }
  static HaltingPolicy patient(std::size_t n) { return {HaltingKind::patience, 0.0, n}; }
};

/// Whether inference stops at `exit` (0-based). The last exit always halts.
///
/// `history` holds the argmax class of exits 0..exit and is required for the
/// patience policy; throws std::invalid_argument when it is too short.
[[nodiscard]] bool halt_decision(const PredictionTrace& trace, std::size_t exit,
                                 const HaltingPolicy& policy,
                                 std::span<const std::size_t> history = {});

/// Exit chosen for one sample: the first one whose halt_decision fires.
[[nodiscard]] std::size_t halting_exit(const PredictionTrace& trace, const HaltingPolicy& policy);

struct TradeoffPoint {
  HaltingPolicy policy;
  double flops_fraction = 0.0;  // mean F_k / F_K over samples
  double accuracy = 0.0;
};

[[nodiscard]] std::vector<TradeoffPoint> evaluate_flops_accuracy(
    const RecursiveEENetwork& net, const Dataset& test, std::span<const HaltingPolicy> grid);

/// Same evaluation on already computed traces.
[[nodiscard]] std::vector<TradeoffPoint> evaluate_flops_accuracy(
    std::span<const PredictionTrace> traces, std::span<const std::size_t> labels,
    std::span<const double> flops_fractions, std::span<const HaltingPolicy> grid);

struct DominanceSummary {
  std::size_t matched = 0;    // baseline points with a candidate within the FLOPs tolerance
  std::size_t dominated = 0;  // matched points where the candidate accuracy is >= baseline
  [[nodiscard]] double fraction() const {
    return matched == 0 ? 0.0 : static_cast<double>(dominated) / static_cast<double>(matched);
  }
};

/// For each baseline point, looks for candidate points whose mean FLOPs lie
/// within `flops_tolerance`; the point counts as weakly dominated when the
/// best such candidate is at least as accurate.
[[nodiscard]] DominanceSummary weak_dominance(std::span<const TradeoffPoint> candidate,
                                              std::span<const TradeoffPoint> baseline,
                                              double flops_tolerance);

}  // namespace reenet
