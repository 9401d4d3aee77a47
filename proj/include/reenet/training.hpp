// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "reenet/dataset.hpp"
#include "reenet/network.hpp"

namespace reenet {

class TrainingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Optimizer { sgd, adam };

struct TrainConfig {
  std::optional<double> margin;  // defaults to 2/|C|
  Optimizer optimizer = Optimizer::adam;
  double learning_rate = 0.003;
  double momentum = 0.9;  // sgd: heavy-ball coefficient; adam: beta1
  std::size_t epochs = 20;
  std::size_t batch_size = 32;
  std::uint64_t rng_seed = 0;

  void validate() const;
  [[nodiscard]] double margin_for(std::size_t num_classes) const {
    return margin.value_or(default_margin(num_classes));
  }
};

struct TrainResult {
  RecursiveEENetwork net;
  std::vector<double> loss_curve;  // mean objective per epoch
};

/// Mini-batch gradient descent on the network's own objective, either plain
/// heavy-ball SGD or Adam (beta2 = 0.999, eps = 1e-8). Deterministic for a
/// given `cfg.rng_seed`.
[[nodiscard]] TrainResult train(RecursiveEENetwork net, const Dataset& data,
                                const TrainConfig& cfg);

/// Fraction of samples whose argmax at `exit` matches the label.
[[nodiscard]] double exit_accuracy(const RecursiveEENetwork& net, const Dataset& data,
                                   std::size_t exit);

}  // namespace reenet
