// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "reenet/rng.hpp"

namespace reenet {
namespace {

constexpr double kAdamBeta2 = 0.999;
constexpr double kAdamEps = 1e-8;

}  // namespace

void TrainConfig::validate() const {
  if (margin && !(*margin > 0.0 && *margin < 1.0)) {
    throw std::invalid_argument("train.margin must lie in (0, 1)");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("train.learning_rate must be positive");
  }
  if (!(momentum >= 0.0 && momentum < 1.0)) {
    throw std::invalid_argument("train.momentum must lie in [0, 1)");
  }
  if (batch_size == 0) {
    throw std::invalid_argument("train.batch_size must be positive");
  }
}

TrainResult train(RecursiveEENetwork net, const Dataset& data, const TrainConfig& cfg) {
  cfg.validate();
  if (data.empty()) {
    throw std::invalid_argument("training dataset is empty");
  }
  if (data.dim != net.config().input_dim) {
    throw ShapeError("dataset dimension does not match the network input");
  }
  for (std::size_t label : data.labels) {
    if (label >= net.num_classes()) {
      throw std::invalid_argument("dataset label out of range");
    }
  }

  const double margin = cfg.margin_for(net.num_classes());
  Rng rng(cfg.rng_seed);
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> velocity(net.parameter_count(), 0.0);
  std::vector<double> second(net.parameter_count(), 0.0);
  std::vector<double> batch_grad(net.parameter_count());
  std::uint64_t steps = 0;

  TrainResult result{std::move(net), {}};
  RecursiveEENetwork& model = result.net;
  for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double epoch_loss = 0.0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      std::fill(batch_grad.begin(), batch_grad.end(), 0.0);
      for (std::size_t n = start; n < stop; ++n) {
        const std::size_t idx = order[n];
        const Gradient g = loss_gradient(model, data.row(idx), data.labels[idx], margin);
        if (!std::isfinite(g.loss)) {
          std::ostringstream msg;
          msg << "non-finite loss at epoch " << epoch << ", sample " << idx;
          throw TrainingError(msg.str());
        }
        epoch_loss += g.loss;
        for (std::size_t p = 0; p < batch_grad.size(); ++p) {
          batch_grad[p] += g.values[p];
        }
      }
      const double inv_batch = 1.0 / static_cast<double>(stop - start);
      auto params = model.parameters();
      if (cfg.optimizer == Optimizer::sgd) {
        for (std::size_t p = 0; p < params.size(); ++p) {
          velocity[p] = cfg.momentum * velocity[p] - cfg.learning_rate * inv_batch * batch_grad[p];
          params[p] += velocity[p];
        }
      } else {
        ++steps;
        const double c1 = 1.0 - std::pow(cfg.momentum, static_cast<double>(steps));
        const double c2 = 1.0 - std::pow(kAdamBeta2, static_cast<double>(steps));
        for (std::size_t p = 0; p < params.size(); ++p) {
          const double g = batch_grad[p] * inv_batch;
          velocity[p] = cfg.momentum * velocity[p] + (1.0 - cfg.momentum) * g;
          second[p] = kAdamBeta2 * second[p] + (1.0 - kAdamBeta2) * g * g;
          params[p] -= cfg.learning_rate * (velocity[p] / c1) / (std::sqrt(second[p] / c2) + kAdamEps);
        }
      }
    }
    result.loss_curve.push_back(epoch_loss / static_cast<double>(data.size()));
  }
  return result;
}

double exit_accuracy(const RecursiveEENetwork& net, const Dataset& data, std::size_t exit) {
  if (data.empty()) {
    return 0.0;
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < data.size(); ++i) {
    correct += net.forward(data.row(i)).argmax(exit) == data.labels[i] ? 1 : 0;
  }
  return static_cast<double>(correct) / static_cast<double>(data.size());
}

}  // namespace reenet
