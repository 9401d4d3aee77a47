// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/halting.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace reenet {

std::string_view to_string(HaltingKind kind) {
  switch (kind) {
    case HaltingKind::recursive_margin:
      return "recursive-margin";
    case HaltingKind::highest_probability:
      return "highest-probability";
    case HaltingKind::patience:
      return "patience";
  }
  return "unknown";
}

HaltingKind halting_kind_from_string(std::string_view name) {
  for (HaltingKind k : {HaltingKind::recursive_margin, HaltingKind::highest_probability,
                        HaltingKind::patience}) {
    if (to_string(k) == name) {
      return k;
    }
  }
  throw std::invalid_argument("unknown halting policy \"" + std::string(name) + "\"");
}

void HaltingPolicy::validate() const {
  if (kind == HaltingKind::patience) {
    if (patience == 0) {
      throw std::invalid_argument("patience must be at least 1");
    }
  } else if (!(threshold > 0.0 && threshold <= 1.0)) {
    // 1.0 is accepted as the never-halt setting.
    throw std::invalid_argument("halting threshold must lie in (0, 1]");
  }
}

bool halt_decision(const PredictionTrace& trace, std::size_t exit, const HaltingPolicy& policy,
                   std::span<const std::size_t> history) {
  if (exit >= trace.num_exits()) {
    throw std::out_of_range("exit index out of range");
  }
  if (exit + 1 == trace.num_exits()) {
    return true;
  }
  const auto& probs = trace.per_exit_probs[exit];
  switch (policy.kind) {
    case HaltingKind::recursive_margin:
      return trace.per_exit_margin[exit] > policy.threshold;
    case HaltingKind::highest_probability:
      return *std::max_element(probs.begin(), probs.end()) > policy.threshold;
    case HaltingKind::patience: {
      if (history.size() < exit + 1) {
        throw std::invalid_argument("patience halting needs the argmax history up to the exit");
      }
      if (exit + 1 < policy.patience) {
        return false;
      }
      const std::size_t current = history[exit];
      for (std::size_t back = 1; back < policy.patience; ++back) {
        if (history[exit - back] != current) {
          return false;
        }
      }
      return true;
    }
  }
  return false;
}

std::size_t halting_exit(const PredictionTrace& trace, const HaltingPolicy& policy) {
  std::vector<std::size_t> history;
  history.reserve(trace.num_exits());
  for (std::size_t j = 0; j < trace.num_exits(); ++j) {
    history.push_back(trace.argmax(j));
    if (halt_decision(trace, j, policy, history)) {
      return j;
    }
  }
  return trace.num_exits() - 1;
}

std::vector<TradeoffPoint> evaluate_flops_accuracy(std::span<const PredictionTrace> traces,
                                                   std::span<const std::size_t> labels,
                                                   std::span<const double> flops_fractions,
                                                   std::span<const HaltingPolicy> grid) {
  if (traces.size() != labels.size()) {
    throw std::invalid_argument("traces and labels differ in length");
  }
  std::vector<TradeoffPoint> out;
  out.reserve(grid.size());
  for (const HaltingPolicy& policy : grid) {
    policy.validate();
    double flops = 0.0;
    std::size_t correct = 0;
    for (std::size_t n = 0; n < traces.size(); ++n) {
      const std::size_t exit = halting_exit(traces[n], policy);
      flops += flops_fractions[exit];
      correct += traces[n].argmax(exit) == labels[n] ? 1 : 0;
    }
    const double count = static_cast<double>(std::max<std::size_t>(traces.size(), 1));
    out.push_back({policy, flops / count, static_cast<double>(correct) / count});
  }
  return out;
}

std::vector<TradeoffPoint> evaluate_flops_accuracy(const RecursiveEENetwork& net,
                                                   const Dataset& test,
                                                   std::span<const HaltingPolicy> grid) {
  std::vector<PredictionTrace> traces;
  traces.reserve(test.size());
  for (std::size_t i = 0; i < test.size(); ++i) {
    traces.push_back(net.forward(test.row(i)));
  }
  const auto fractions = net.flops_fractions();
  return evaluate_flops_accuracy(traces, test.labels, fractions, grid);
}

DominanceSummary weak_dominance(std::span<const TradeoffPoint> candidate,
                                std::span<const TradeoffPoint> baseline,
                                double flops_tolerance) {
  DominanceSummary summary;
  for (const TradeoffPoint& b : baseline) {
    double best = -1.0;
    for (const TradeoffPoint& c : candidate) {
      if (std::abs(c.flops_fraction - b.flops_fraction) <= flops_tolerance) {
        best = std::max(best, c.accuracy);
      }
    }
    if (best < 0.0) {
      continue;
    }
    ++summary.matched;
    if (best >= b.accuracy) {
      ++summary.dominated;
    }
  }
  return summary;
}

}  // namespace reenet
