// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include "reenet/rng.hpp"

namespace reenet {

inline constexpr double kSpeedOfLight = 299792458.0;

enum class Placement { uniform_area, uniform_distance };

[[nodiscard]] std::string_view to_string(Placement p);
[[nodiscard]] Placement placement_from_string(std::string_view name);

/// Single-cell uplink model: free-space reference loss with a
/// distance power law, Rayleigh block fading and thermal noise. SI units.
struct LinkConfig {
  double carrier_hz = 3.5e9;
  double bandwidth_hz = 20e6;
  double pathloss_exponent = 3.5;
  double tx_power_w = 0.1;
  double noise_psd_dbm_hz = -174.0;
  double noise_figure_db = 7.0;
  double distance_min_m = 10.0;
  double distance_max_m = 100.0;
  Placement placement = Placement::uniform_area;
  std::vector<double> mcs_set = {0.0, 0.5, 1.0, 1.5, 2.0, 3.0, 4.0, 5.0};  // bit/s/Hz

  void validate() const;
  [[nodiscard]] std::size_t num_mcs() const { return mcs_set.size(); }
};

/// One slot's realization of the link.
struct ChannelDraw {
  double distance_m = 0.0;
  double pathloss_linear = 0.0;
  double fading_gain = 0.0;
  double snr_linear = 0.0;
  double capacity_bps_hz = 0.0;
  std::size_t mcs_index = 0;
  double rate_bps = 0.0;
};

/// (c / (4 pi f_c))^2 d^-alpha. Throws std::invalid_argument for d <= 0.
[[nodiscard]] double pathloss(const LinkConfig& cfg, double distance_m);

/// Thermal noise power over the full bandwidth, in watts.
[[nodiscard]] double noise_power_w(const LinkConfig& cfg);

/// Largest index whose spectral efficiency does not exceed `capacity`.
[[nodiscard]] std::size_t select_mcs(std::span<const double> mcs_set, double capacity);

/// Deterministic channel for a given distance and fading power gain.
[[nodiscard]] ChannelDraw channel_at(const LinkConfig& cfg, double distance_m, double fading_gain);

[[nodiscard]] double sample_distance(const LinkConfig& cfg, Rng& rng);
[[nodiscard]] double sample_fading(Rng& rng);

/// Fresh distance and fading.
[[nodiscard]] ChannelDraw draw_channel(const LinkConfig& cfg, Rng& rng);

/// Fading redrawn for a fixed distance; the slot-to-slot channel evolution.
[[nodiscard]] ChannelDraw redraw_fading(const LinkConfig& cfg, double distance_m, Rng& rng);
[[nodiscard]] std::size_t mcs_transition_sample(const LinkConfig& cfg, double distance_m, Rng& rng);

/// Mean SNR (unit fading) at a distance.
[[nodiscard]] double mean_snr(const LinkConfig& cfg, double distance_m);

}  // namespace reenet
