// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/radio.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace reenet {

std::string_view to_string(Placement p) {
  return p == Placement::uniform_area ? "uniform-area" : "uniform-distance";
}

Placement placement_from_string(std::string_view name) {
  if (name == "uniform-area") {
    return Placement::uniform_area;
  }
  if (name == "uniform-distance") {
    return Placement::uniform_distance;
  }
  throw std::invalid_argument("unknown placement \"" + std::string(name) + "\"");
}

void LinkConfig::validate() const {
  if (!(carrier_hz > 0.0) || !(bandwidth_hz > 0.0)) {
    throw std::invalid_argument("link.carrier_hz and link.bandwidth_hz must be positive");
  }
  if (!(pathloss_exponent > 0.0)) {
    throw std::invalid_argument("link.pathloss_exponent must be positive");
  }
  if (!(tx_power_w > 0.0)) {
    throw std::invalid_argument("link.tx_power_w must be positive");
  }
  if (!(distance_min_m > 0.0) || !(distance_min_m < distance_max_m)) {
    throw std::invalid_argument("link distances must satisfy 0 < distance_min_m < distance_max_m");
  }
  if (mcs_set.empty() || mcs_set.front() != 0.0) {
    throw std::invalid_argument("link.mcs_set must start at 0");
  }
  if (!std::is_sorted(mcs_set.begin(), mcs_set.end()) ||
      std::adjacent_find(mcs_set.begin(), mcs_set.end()) != mcs_set.end()) {
    throw std::invalid_argument("link.mcs_set must be strictly ascending");
  }
}

double pathloss(const LinkConfig& cfg, double distance_m) {
  if (!(distance_m > 0.0)) {
    throw std::invalid_argument("distance must be positive");
  }
  const double reference = kSpeedOfLight / (4.0 * std::numbers::pi * cfg.carrier_hz);
  return reference * reference * std::pow(distance_m, -cfg.pathloss_exponent);
}

double noise_power_w(const LinkConfig& cfg) {
  const double dbm =
      cfg.noise_psd_dbm_hz + 10.0 * std::log10(cfg.bandwidth_hz) + cfg.noise_figure_db;
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

std::size_t select_mcs(std::span<const double> mcs_set, double capacity) {
  const auto it = std::upper_bound(mcs_set.begin(), mcs_set.end(), capacity);
  return it == mcs_set.begin() ? 0 : static_cast<std::size_t>(it - mcs_set.begin()) - 1;
}

double mean_snr(const LinkConfig& cfg, double distance_m) {
  return cfg.tx_power_w * pathloss(cfg, distance_m) / noise_power_w(cfg);
}

ChannelDraw channel_at(const LinkConfig& cfg, double distance_m, double fading_gain) {
  ChannelDraw d;
  d.distance_m = distance_m;
  d.pathloss_linear = pathloss(cfg, distance_m);
  d.fading_gain = fading_gain;
  d.snr_linear = cfg.tx_power_w * d.pathloss_linear * fading_gain / noise_power_w(cfg);
  d.capacity_bps_hz = std::log2(1.0 + d.snr_linear);
  d.mcs_index = select_mcs(cfg.mcs_set, d.capacity_bps_hz);
  d.rate_bps = cfg.mcs_set[d.mcs_index] * cfg.bandwidth_hz;
  return d;
}

double sample_distance(const LinkConfig& cfg, Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double a = cfg.distance_min_m;
  const double b = cfg.distance_max_m;
  if (cfg.placement == Placement::uniform_distance) {
    return a + (b - a) * u(rng);
  }
  // Inverse CDF of the density proportional to d on [a, b].
  return std::sqrt(a * a + (b * b - a * a) * u(rng));
}

double sample_fading(Rng& rng) {
  std::exponential_distribution<double> exp1(1.0);
  return exp1(rng);
}

ChannelDraw draw_channel(const LinkConfig& cfg, Rng& rng) {
  const double d = sample_distance(cfg, rng);
  return channel_at(cfg, d, sample_fading(rng));
}

ChannelDraw redraw_fading(const LinkConfig& cfg, double distance_m, Rng& rng) {
  return channel_at(cfg, distance_m, sample_fading(rng));
}

std::size_t mcs_transition_sample(const LinkConfig& cfg, double distance_m, Rng& rng) {
  return redraw_fading(cfg, distance_m, rng).mcs_index;
}

}  // namespace reenet
