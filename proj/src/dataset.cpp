// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/dataset.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "reenet/rng.hpp"

namespace reenet {

void Dataset::push_back(std::span<const double> x, std::size_t label) {
  if (x.size() != dim) {
    throw std::invalid_argument("sample dimension mismatch");
  }
  features.insert(features.end(), x.begin(), x.end());
  labels.push_back(label);
}

Dataset make_blobs(const BlobsSpec& spec, std::size_t count, std::uint64_t seed) {
  if (spec.dim == 0 || spec.num_classes < 2 || spec.clusters_per_class == 0) {
    throw std::invalid_argument("blobs need dim > 0, >= 2 classes and >= 1 cluster per class");
  }
  std::mt19937_64 centre_rng(spec.centre_seed);
  std::uniform_real_distribution<double> box(-1.0, 1.0);
  const std::size_t clusters = spec.num_classes * spec.clusters_per_class;
  std::vector<double> centres(clusters * spec.dim);
  for (double& c : centres) {
    c = box(centre_rng);
  }

  Dataset data;
  data.dim = spec.dim;
  data.num_classes = spec.num_classes;
  data.features.reserve(count * spec.dim);
  data.labels.reserve(count);

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick(0, clusters - 1);
  std::normal_distribution<double> noise(0.0, spec.spread);
  std::vector<double> x(spec.dim);
  for (std::size_t n = 0; n < count; ++n) {
    const std::size_t cluster = pick(rng);
    for (std::size_t d = 0; d < spec.dim; ++d) {
      x[d] = centres[cluster * spec.dim + d] + noise(rng);
    }
    data.push_back(x, cluster % spec.num_classes);
  }
  return data;
}

Dataset make_moons(std::size_t count, double noise, std::uint64_t seed, std::size_t dim) {
  if (dim < 2) {
    throw std::invalid_argument("moons need at least 2 dimensions");
  }
  Dataset data;
  data.dim = dim;
  data.num_classes = 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, std::numbers::pi);
  std::normal_distribution<double> jitter(0.0, noise);
  std::bernoulli_distribution coin(0.5);
  std::vector<double> x(dim);
  for (std::size_t n = 0; n < count; ++n) {
    const bool upper = coin(rng);
    const double t = angle(rng);
    if (upper) {
      x[0] = std::cos(t);
      x[1] = std::sin(t);
    } else {
      x[0] = 1.0 - std::cos(t);
      x[1] = 0.5 - std::sin(t);
    }
    for (std::size_t d = 0; d < dim; ++d) {
      x[d] = (d < 2 ? x[d] : 0.0) + jitter(rng);
    }
    data.push_back(x, upper ? 0 : 1);
  }
  return data;
}

void DatasetConfig::validate() const {
  if (kind != "blobs" && kind != "moons") {
    throw std::invalid_argument("dataset.kind must be \"blobs\" or \"moons\"");
  }
  if (num_train == 0 || num_validation == 0 || num_test == 0) {
    throw std::invalid_argument("dataset split sizes must be positive");
  }
  if (kind == "blobs" && (blobs.dim == 0 || blobs.num_classes < 2 ||
                          blobs.clusters_per_class == 0 || !(blobs.spread > 0.0))) {
    throw std::invalid_argument("dataset.blobs fields out of range");
  }
  if (kind == "moons" && !(moons_noise >= 0.0)) {
    throw std::invalid_argument("dataset.moons_noise must be nonnegative");
  }
}

DataSplits make_splits(const DatasetConfig& cfg, std::uint64_t seed) {
  cfg.validate();
  auto make = [&](std::size_t count, std::uint64_t stream) {
    const std::uint64_t s = derive_seed(seed, stream);
    return cfg.kind == "blobs" ? make_blobs(cfg.blobs, count, s)
                               : make_moons(count, cfg.moons_noise, s, cfg.blobs.dim);
  };
  return {make(cfg.num_train, 1), make(cfg.num_validation, 2), make(cfg.num_test, 3)};
}

}  // namespace reenet
