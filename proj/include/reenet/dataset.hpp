// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace reenet {

/// Row-major feature matrix with integer labels.
struct Dataset {
  std::size_t dim = 0;
  std::size_t num_classes = 0;
  std::vector<double> features;
  std::vector<std::size_t> labels;

  [[nodiscard]] std::size_t size() const { return labels.size(); }
  [[nodiscard]] bool empty() const { return labels.empty(); }
  [[nodiscard]] std::span<const double> row(std::size_t i) const {
    return {features.data() + i * dim, dim};
  }
  void push_back(std::span<const double> x, std::size_t label);
};

/// Gaussian mixture: every class owns `clusters_per_class` isotropic blobs
/// with standard deviation `spread` whose centres are drawn uniformly from
/// [-1, 1]^dim. One cluster per class gives linearly separable-ish blobs.
struct BlobsSpec {
  std::size_t dim = 2;
  std::size_t num_classes = 2;
  std::size_t clusters_per_class = 1;
  double spread = 0.1;
  std::uint64_t centre_seed = 0;
};

[[nodiscard]] Dataset make_blobs(const BlobsSpec& spec, std::size_t count, std::uint64_t seed);

/// Two interleaving half circles with Gaussian noise, optionally embedded
/// in `dim` dimensions (extra coordinates are pure noise).
[[nodiscard]] Dataset make_moons(std::size_t count, double noise, std::uint64_t seed,
                                 std::size_t dim = 2);

/// Train / validation / test splits of one synthetic distribution.
struct DataSplits {
  Dataset train;
  Dataset validation;
  Dataset test;
};

struct DatasetConfig {
  std::string kind = "blobs";  // "blobs" or "moons"
  BlobsSpec blobs;
  double moons_noise = 0.2;
  std::size_t num_train = 4000;
  std::size_t num_validation = 1000;
  std::size_t num_test = 2000;

  void validate() const;
};

[[nodiscard]] DataSplits make_splits(const DatasetConfig& cfg, std::uint64_t seed);

}  // namespace reenet
