// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/network.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

namespace reenet {
namespace {

constexpr double kMassBiasInit = -2.0;

double sigmoid(double z) {
  if (z >= 0.0) {
    return 1.0 / (1.0 + std::exp(-z));
  }
  const double e = std::exp(z);
  return e / (1.0 + e);
}

std::vector<double> affine(std::span<const double> params, const Dense& layer,
                           std::span<const double> in) {
  std::vector<double> out(layer.out);
  const double* w = params.data() + layer.offset;
  const double* b = params.data() + layer.bias_offset();
  for (std::size_t r = 0; r < layer.out; ++r) {
    double acc = b[r];
    const double* row = w + r * layer.in;
    for (std::size_t c = 0; c < layer.in; ++c) {
      acc += row[c] * in[c];
    }
    out[r] = acc;
  }
  return out;
}

// Accumulates parameter gradients for `layer` and, when `din` is non-empty,
// the gradient with respect to its input.
void affine_backward(std::span<const double> params, std::span<double> grad, const Dense& layer,
                     std::span<const double> in, std::span<const double> dout,
                     std::span<double> din) {
  const double* w = params.data() + layer.offset;
  double* gw = grad.data() + layer.offset;
  double* gb = grad.data() + layer.bias_offset();
  for (std::size_t r = 0; r < layer.out; ++r) {
    const double d = dout[r];
    if (d == 0.0) {
      continue;
    }
    gb[r] += d;
    double* grow = gw + r * layer.in;
    const double* row = w + r * layer.in;
    for (std::size_t c = 0; c < layer.in; ++c) {
      grow[c] += d * in[c];
    }
    if (!din.empty()) {
      for (std::size_t c = 0; c < layer.in; ++c) {
        din[c] += d * row[c];
      }
    }
  }
}

void relu_inplace(std::vector<double>& v) {
  for (double& x : v) {
    x = std::max(x, 0.0);
  }
}

std::vector<double> sigmoid_of(const std::vector<double>& logits) {
  std::vector<double> out(logits.size());
  std::transform(logits.begin(), logits.end(), out.begin(), sigmoid);
  return out;
}

std::vector<double> softmax_of(const std::vector<double>& logits) {
  const double top = *std::max_element(logits.begin(), logits.end());
  std::vector<double> out(logits.size());
  double total = 0.0;
  for (std::size_t i = 0; i < logits.size(); ++i) {
    out[i] = std::exp(logits[i] - top);
    total += out[i];
  }
  for (double& v : out) {
    v /= total;
  }
  return out;
}

// Largest non-target entry and its index (first index on ties).
std::pair<double, std::size_t> runner_up(std::span<const double> probs, std::size_t label) {
  double best = -1.0;
  std::size_t index = 0;
  for (std::size_t j = 0; j < probs.size(); ++j) {
    if (j != label && probs[j] > best) {
      best = probs[j];
      index = j;
    }
  }
  return {best, index};
}

double cross_entropy(std::span<const double> dist, std::size_t label) {
  return -std::log(std::max(dist[label], 1e-300));
}

void check_label(const PredictionTrace& trace, std::size_t label) {
  if (trace.final_distribution.empty() || label >= trace.final_distribution.size()) {
    throw std::invalid_argument("class index " + std::to_string(label) + " out of range");
  }
}

}  // namespace

void BackboneConfig::validate() const {
  if (input_dim == 0) {
    throw std::invalid_argument("backbone.input_dim must be positive");
  }
  if (hidden_dims.size() < 2) {
    throw std::invalid_argument("backbone.hidden_dims needs at least 2 blocks");
  }
  if (std::find(hidden_dims.begin(), hidden_dims.end(), 0u) != hidden_dims.end()) {
    throw std::invalid_argument("backbone.hidden_dims entries must be positive");
  }
  if (num_classes < 2) {
    throw std::invalid_argument("backbone.num_classes must be at least 2");
  }
  if (head_dim == 0) {
    throw std::invalid_argument("backbone.head_dim must be positive");
  }
  if (!exit_indices.empty()) {
    if (exit_indices.size() < 2) {
      throw std::invalid_argument("backbone.exit_indices needs at least 2 exits");
    }
    for (std::size_t i = 0; i < exit_indices.size(); ++i) {
      if (exit_indices[i] == 0 || exit_indices[i] > hidden_dims.size()) {
        throw std::invalid_argument("backbone.exit_indices entries must lie in 1..blocks");
      }
      if (i > 0 && exit_indices[i] <= exit_indices[i - 1]) {
        throw std::invalid_argument("backbone.exit_indices must be strictly increasing");
      }
    }
    if (exit_indices.back() != hidden_dims.size()) {
      throw std::invalid_argument("backbone.exit_indices must end at the last block");
    }
  }
}

BackboneConfig BackboneConfig::resolved() const {
  BackboneConfig out = *this;
  if (out.exit_indices.empty()) {
    for (std::size_t i = 1; i <= hidden_dims.size(); ++i) {
      out.exit_indices.push_back(i);
    }
  }
  return out;
}

std::size_t PredictionTrace::argmax(std::size_t exit) const {
  const auto& p = per_exit_probs.at(exit);
  return static_cast<std::size_t>(std::max_element(p.begin(), p.end()) - p.begin());
}

RecursiveEENetwork::RecursiveEENetwork(BackboneConfig config, HeadMode mode, std::uint64_t seed)
    : config_(std::move(config)), mode_(mode) {
  config_.validate();
  config_ = config_.resolved();
  build_layout();

  std::mt19937_64 rng(seed);
  auto init = [&](const Dense& layer, double bound, double bias) {
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (std::size_t i = 0; i < layer.weight_count(); ++i) {
      params_[layer.offset + i] = dist(rng);
    }
    std::fill_n(params_.begin() + static_cast<std::ptrdiff_t>(layer.bias_offset()), layer.out,
                bias);
  };
  for (const Dense& block : blocks_) {
    init(block, std::sqrt(6.0 / static_cast<double>(block.in)), 0.0);
  }
  for (const ExitHead& head : heads_) {
    init(head.feature, std::sqrt(6.0 / static_cast<double>(head.feature.in)), 0.0);
    const double out_bound = 1.0 / std::sqrt(static_cast<double>(head.feature.out));
    if (head.predictor) {
      init(*head.predictor, out_bound, 0.0);
    }
    if (head.plus) {
      init(*head.plus, out_bound, kMassBiasInit);
    }
    if (head.minus) {
      init(*head.minus, out_bound, kMassBiasInit);
    }
  }
}

RecursiveEENetwork::RecursiveEENetwork(BackboneConfig config, HeadMode mode,
                                       std::vector<double> parameters)
    : config_(std::move(config)), mode_(mode) {
  config_.validate();
  config_ = config_.resolved();
  build_layout();
  if (parameters.size() != params_.size()) {
    std::ostringstream msg;
    msg << "parameter count " << parameters.size() << " does not match layout size "
        << params_.size();
    throw ShapeError(msg.str());
  }
  params_ = std::move(parameters);
}

void RecursiveEENetwork::build_layout() {
  std::size_t offset = 0;
  auto make = [&](std::size_t in, std::size_t out) {
    Dense d{in, out, offset};
    offset += d.size();
    return d;
  };
  blocks_.clear();
  heads_.clear();
  std::size_t width = config_.input_dim;
  for (std::size_t dim : config_.hidden_dims) {
    blocks_.push_back(make(width, dim));
    width = dim;
  }
  const std::size_t exits = config_.exit_indices.size();
  for (std::size_t j = 0; j < exits; ++j) {
    ExitHead head;
    head.block = config_.exit_indices[j] - 1;
    head.feature = make(config_.hidden_dims[head.block], config_.head_dim);
    const bool edge = j == 0 || j + 1 == exits;
    if (mode_ == HeadMode::independent || edge) {
      head.predictor = make(config_.head_dim, config_.num_classes);
    } else {
      head.plus = make(config_.head_dim, config_.num_classes);
      head.minus = make(config_.head_dim, config_.num_classes);
    }
    heads_.push_back(head);
  }
  params_.assign(offset, 0.0);
}

ForwardCache RecursiveEENetwork::forward_cached(std::span<const double> x) const {
  if (x.size() != config_.input_dim) {
    std::ostringstream msg;
    msg << "input has " << x.size() << " entries, expected " << config_.input_dim;
    throw ShapeError(msg.str());
  }
  ForwardCache cache;
  cache.activations.reserve(blocks_.size() + 1);
  cache.activations.emplace_back(x.begin(), x.end());
  for (const Dense& block : blocks_) {
    auto h = affine(params_, block, cache.activations.back());
    relu_inplace(h);
    cache.activations.push_back(std::move(h));
  }

  const std::size_t exits = heads_.size();
  cache.features.resize(exits);
  cache.plus.resize(exits);
  cache.minus.resize(exits);
  cache.softmax.resize(exits);
  PredictionTrace& trace = cache.trace;
  trace.per_exit_probs.resize(exits);
  trace.per_exit_margin.resize(exits);

  for (std::size_t j = 0; j < exits; ++j) {
    const ExitHead& head = heads_[j];
    auto feat = affine(params_, head.feature, cache.activations[head.block + 1]);
    relu_inplace(feat);
    std::vector<double> probs;
    if (mode_ == HeadMode::independent) {
      cache.softmax[j] = softmax_of(affine(params_, *head.predictor, feat));
      probs = cache.softmax[j];
    } else if (j == 0) {
      probs = sigmoid_of(affine(params_, *head.predictor, feat));
    } else if (j + 1 < exits) {
      cache.plus[j] = sigmoid_of(affine(params_, *head.plus, feat));
      cache.minus[j] = sigmoid_of(affine(params_, *head.minus, feat));
      const auto& prev = trace.per_exit_probs[j - 1];
      probs.resize(prev.size());
      for (std::size_t c = 0; c < prev.size(); ++c) {
        probs[c] = prev[c] + (1.0 - prev[c]) * cache.plus[j][c] - prev[c] * cache.minus[j][c];
      }
    } else {
      cache.softmax[j] = softmax_of(affine(params_, *head.predictor, feat));
      const auto& prev = trace.per_exit_probs[j - 1];
      probs.resize(prev.size());
      for (std::size_t c = 0; c < prev.size(); ++c) {
        probs[c] = prev[c] + (1.0 - prev[c]) * cache.softmax[j][c];
      }
    }
    trace.per_exit_margin[j] = top2_margin(probs);
    trace.per_exit_probs[j] = std::move(probs);
    cache.features[j] = std::move(feat);
  }
  trace.final_distribution = cache.softmax[exits - 1];
  return cache;
}

PredictionTrace RecursiveEENetwork::forward(std::span<const double> x) const {
  return forward_cached(x).trace;
}

std::uint64_t RecursiveEENetwork::macs_to_exit(std::size_t exit) const {
  const ExitHead& target = heads_.at(exit);
  std::uint64_t total = 0;
  for (std::size_t i = 0; i <= target.block; ++i) {
    total += blocks_[i].weight_count();
  }
  for (std::size_t j = 0; j <= exit; ++j) {
    const ExitHead& head = heads_[j];
    total += head.feature.weight_count();
    for (const auto* d : {&head.predictor, &head.plus, &head.minus}) {
      if (d->has_value()) {
        total += (*d)->weight_count();
      }
    }
  }
  return total;
}

std::vector<double> RecursiveEENetwork::flops_fractions() const {
  const double full = static_cast<double>(macs_to_exit(heads_.size() - 1));
  std::vector<double> out(heads_.size());
  for (std::size_t j = 0; j < heads_.size(); ++j) {
    out[j] = static_cast<double>(macs_to_exit(j)) / full;
  }
  out.back() = 1.0;
  return out;
}

double default_margin(std::size_t num_classes) {
  return 2.0 / static_cast<double>(num_classes);
}

double top2_margin(std::span<const double> probs) {
  if (probs.size() < 2) {
    return 0.0;
  }
  double first = -1.0;
  double second = -1.0;
  for (double p : probs) {
    if (p > first) {
      second = first;
      first = p;
    } else if (p > second) {
      second = p;
    }
  }
  return first - second;
}

double margin_loss(const PredictionTrace& trace, std::size_t label, double margin) {
  check_label(trace, label);
  const std::size_t hinges = trace.num_exits() - 1;
  double hinge_sum = 0.0;
  for (std::size_t i = 0; i < hinges; ++i) {
    const auto& f = trace.per_exit_probs[i];
    const double gap = runner_up(f, label).first - f[label] + margin;
    hinge_sum += std::max(0.0, gap);
  }
  return cross_entropy(trace.final_distribution, label) +
         hinge_sum / static_cast<double>(hinges);
}

double branch_loss(const PredictionTrace& trace, std::size_t label) {
  check_label(trace, label);
  double total = 0.0;
  for (const auto& p : trace.per_exit_probs) {
    total += cross_entropy(p, label);
  }
  return total;
}

double objective(const RecursiveEENetwork& net, std::span<const double> x, std::size_t label,
                 double margin) {
  const PredictionTrace trace = net.forward(x);
  return net.mode() == HeadMode::recursive ? margin_loss(trace, label, margin)
                                           : branch_loss(trace, label);
}

Gradient loss_gradient(const RecursiveEENetwork& net, std::span<const double> x,
                       std::size_t label, double margin) {
  const ForwardCache cache = net.forward_cached(x);
  const PredictionTrace& trace = cache.trace;
  check_label(trace, label);

  const auto params = net.parameters();
  const auto& heads = net.heads();
  const auto& blocks = net.blocks();
  const std::size_t exits = heads.size();
  const std::size_t classes = net.num_classes();

  Gradient out;
  out.values.assign(params.size(), 0.0);
  std::span<double> grad(out.values);

  std::vector<std::vector<double>> dact(cache.activations.size());
  for (std::size_t i = 0; i < dact.size(); ++i) {
    dact[i].assign(cache.activations[i].size(), 0.0);
  }

  auto backprop_head = [&](std::size_t j, const Dense& layer, const std::vector<double>& dlogits,
                           std::vector<double>& dfeat) {
    affine_backward(params, grad, layer, cache.features[j], dlogits, dfeat);
  };
  auto backprop_feature = [&](std::size_t j, std::vector<double>& dfeat) {
    const auto& feat = cache.features[j];
    for (std::size_t c = 0; c < dfeat.size(); ++c) {
      if (feat[c] <= 0.0) {
        dfeat[c] = 0.0;
      }
    }
    const ExitHead& head = heads[j];
    affine_backward(params, grad, head.feature, cache.activations[head.block + 1], dfeat,
                    dact[head.block + 1]);
  };

  if (net.mode() == HeadMode::independent) {
    for (std::size_t j = 0; j < exits; ++j) {
      const auto& q = cache.softmax[j];
      out.loss += cross_entropy(q, label);
      std::vector<double> dlogits(q);
      dlogits[label] -= 1.0;
      std::vector<double> dfeat(cache.features[j].size(), 0.0);
      backprop_head(j, *heads[j].predictor, dlogits, dfeat);
      backprop_feature(j, dfeat);
    }
  } else {
    // dL/df_j for every exit, accumulated from the hinges and from later exits.
    std::vector<std::vector<double>> gf(exits, std::vector<double>(classes, 0.0));
    const double hinge_weight = 1.0 / static_cast<double>(exits - 1);
    double hinge_sum = 0.0;
    for (std::size_t j = 0; j + 1 < exits; ++j) {
      const auto& f = trace.per_exit_probs[j];
      const auto [other, other_index] = runner_up(f, label);
      const double gap = other - f[label] + margin;
      if (gap > 0.0) {
        hinge_sum += gap;
        gf[j][label] -= hinge_weight;
        gf[j][other_index] += hinge_weight;
      }
    }
    const auto& q = cache.softmax[exits - 1];
    out.loss = cross_entropy(q, label) + hinge_sum * hinge_weight;

    for (std::size_t j = exits; j-- > 0;) {
      const ExitHead& head = heads[j];
      std::vector<double> dfeat(cache.features[j].size(), 0.0);
      const auto& g = gf[j];
      if (j + 1 == exits) {
        const auto& prev = trace.per_exit_probs[j - 1];
        std::vector<double> dq(classes);
        for (std::size_t c = 0; c < classes; ++c) {
          dq[c] = g[c] * (1.0 - prev[c]);
          gf[j - 1][c] += g[c] * (1.0 - q[c]);
        }
        double dot = 0.0;
        for (std::size_t c = 0; c < classes; ++c) {
          dot += dq[c] * q[c];
        }
        std::vector<double> dlogits(classes);
        // Softmax Jacobian applied to dq, plus the cross-entropy term q - onehot(y).
        for (std::size_t c = 0; c < classes; ++c) {
          dlogits[c] = q[c] * (dq[c] - dot) + q[c];
        }
        dlogits[label] -= 1.0;
        backprop_head(j, *head.predictor, dlogits, dfeat);
      } else if (j > 0) {
        const auto& prev = trace.per_exit_probs[j - 1];
        const auto& u = cache.plus[j];
        const auto& v = cache.minus[j];
        std::vector<double> du(classes);
        std::vector<double> dv(classes);
        for (std::size_t c = 0; c < classes; ++c) {
          gf[j - 1][c] += g[c] * (1.0 - u[c] - v[c]);
          du[c] = g[c] * (1.0 - prev[c]) * u[c] * (1.0 - u[c]);
          dv[c] = -g[c] * prev[c] * v[c] * (1.0 - v[c]);
        }
        backprop_head(j, *head.plus, du, dfeat);
        backprop_head(j, *head.minus, dv, dfeat);
      } else {
        const auto& f = trace.per_exit_probs[0];
        std::vector<double> ds(classes);
        for (std::size_t c = 0; c < classes; ++c) {
          ds[c] = g[c] * f[c] * (1.0 - f[c]);
        }
        backprop_head(j, *head.predictor, ds, dfeat);
      }
      backprop_feature(j, dfeat);
    }
  }

  for (std::size_t i = blocks.size(); i-- > 0;) {
    auto& dpre = dact[i + 1];
    const auto& h = cache.activations[i + 1];
    for (std::size_t c = 0; c < dpre.size(); ++c) {
      if (h[c] <= 0.0) {
        dpre[c] = 0.0;
      }
    }
    std::span<double> din = i == 0 ? std::span<double>{} : std::span<double>(dact[i]);
    affine_backward(params, grad, blocks[i], cache.activations[i], dpre, din);
  }
  return out;
}

}  // namespace reenet
