// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/latency.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace reenet {

void SystemProfile::validate() const {
  if (flops_fractions.size() < 2) {
    throw std::invalid_argument("profile needs at least two exits");
  }
  if (embedding_bits.size() != flops_fractions.size()) {
    throw std::invalid_argument("profile.embedding_bits must have one entry per exit");
  }
  for (std::size_t k = 0; k < flops_fractions.size(); ++k) {
    const double f = flops_fractions[k];
    if (!(f > 0.0 && f <= 1.0) || (k > 0 && !(f > flops_fractions[k - 1]))) {
      throw std::invalid_argument("profile.flops_fractions must be strictly increasing in (0, 1]");
    }
    if (!(embedding_bits[k] > 0.0)) {
      throw std::invalid_argument("profile.embedding_bits entries must be positive");
    }
  }
  if (flops_fractions.back() != 1.0) {
    throw std::invalid_argument("profile.flops_fractions must end at 1");
  }
  if (!(device_full_latency_s > 0.0) || !(server_full_latency_s > 0.0) || !(deadline_s > 0.0)) {
    throw std::invalid_argument("profile latencies and deadline must be positive");
  }
}

double SystemProfile::max_embedding_bits() const {
  return *std::max_element(embedding_bits.begin(), embedding_bits.end());
}

namespace {

void check_exit(const SystemProfile& profile, std::size_t k) {
  if (k >= profile.num_exits()) {
    throw std::out_of_range("exit index " + std::to_string(k) + " out of range");
  }
}

}  // namespace

DelayBreakdown delay(const SystemProfile& profile, std::size_t k, bool offloaded,
                     double rate_bps) {
  check_exit(profile, k);
  if (rate_bps < 0.0) {
    throw std::invalid_argument("rate must be nonnegative");
  }
  DelayBreakdown d;
  const double fraction = profile.flops_fractions[k];
  d.local_s = fraction * profile.device_full_latency_s;
  if (offloaded) {
    d.remote_s = (1.0 - fraction) * profile.server_full_latency_s;
    if (rate_bps > 0.0) {
      d.tx_s = profile.embedding_bits[k] / rate_bps;
    } else {
      d.link_outage = true;
    }
  }
  d.total_s = d.local_s + d.tx_s + d.remote_s;
  d.met_deadline = !d.link_outage && d.total_s <= profile.deadline_s;
  return d;
}

double comp_saving(const SystemProfile& profile, std::size_t k) {
  check_exit(profile, k);
  return 1.0 - profile.flops_fractions[k];
}

double comm_saving(const SystemProfile& profile, std::size_t k, ActionKind action) {
  check_exit(profile, k);
  switch (action) {
    case ActionKind::exit:
      return 1.0;
    case ActionKind::offload: {
      const double top = profile.max_embedding_bits();
      return (top - profile.embedding_bits[k]) / top;
    }
    case ActionKind::compute:
      break;
  }
  throw std::invalid_argument("communication saving is defined for exit and offload only");
}

bool proxy_goal(const DelayBreakdown& delay, double margin, double margin_threshold) {
  return delay.met_deadline && margin > margin_threshold;
}

KpiRecord make_kpis(const SystemProfile& profile, std::size_t k, ActionKind action,
                    const DelayBreakdown& delay, double margin, double margin_threshold,
                    bool correct) {
  KpiRecord kpi;
  kpi.comp_saving = comp_saving(profile, k);
  kpi.comm_saving = comm_saving(profile, k, action);
  kpi.margin = margin;
  kpi.proxy_goal_met = proxy_goal(delay, margin, margin_threshold);
  kpi.true_goal_met = delay.met_deadline && correct;
  return kpi;
}

double goal_effectiveness(std::span<const EpisodeRecord> records) {
  if (records.empty()) {
    return 0.0;
  }
  const auto hits = std::count_if(records.begin(), records.end(), [](const EpisodeRecord& r) {
    return r.delay.met_deadline && r.correct;
  });
  return static_cast<double>(hits) / static_cast<double>(records.size());
}

}  // namespace reenet
