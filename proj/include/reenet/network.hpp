// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace reenet {

class ShapeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Layer widths and exit placement of a multilayer-perceptron backbone.
///
/// `exit_indices` are 1-based block indices; the last one must be the final
/// block. An empty list means one exit after every block.
struct BackboneConfig {
  std::size_t input_dim = 2;
  std::vector<std::size_t> hidden_dims;
  std::size_t num_classes = 2;
  std::vector<std::size_t> exit_indices;
  std::size_t head_dim = 16;

  /// Throws std::invalid_argument with a field-level message.
  void validate() const;
  /// Copy with `exit_indices` filled in when left empty.
  [[nodiscard]] BackboneConfig resolved() const;

  bool operator==(const BackboneConfig&) const = default;
};

/// How exit heads turn features into class probabilities.
///
/// `recursive` accumulates per-class probabilities through the moving-mass
/// heads. `independent` gives every exit its own softmax classifier and is
/// used for the baseline halting policies.
enum class HeadMode : std::uint8_t { recursive = 0, independent = 1 };

/// A weight matrix (out x in, row major) followed by its bias, stored
/// inside the flat parameter vector.
struct Dense {
  std::size_t in = 0;
  std::size_t out = 0;
  std::size_t offset = 0;

  [[nodiscard]] std::size_t weight_count() const { return in * out; }
  [[nodiscard]] std::size_t bias_offset() const { return offset + in * out; }
  [[nodiscard]] std::size_t size() const { return in * out + out; }
  [[nodiscard]] std::size_t end() const { return offset + size(); }
};

/// Parameters attached to one exit.
///
/// Recursive mode: exit 0 and the last exit own a `predictor`; every exit in
/// between owns `plus` and `minus` mass heads. Independent mode: every exit
/// owns a `predictor` only.
struct ExitHead {
  std::size_t block = 0;  // 0-based index of the block the exit reads from
  Dense feature;
  std::optional<Dense> predictor;
  std::optional<Dense> plus;
  std::optional<Dense> minus;
};

/// Per-exit class probabilities for one input.
struct PredictionTrace {
  std::vector<std::vector<double>> per_exit_probs;
  std::vector<double> per_exit_margin;
  std::vector<double> final_distribution;

  [[nodiscard]] std::size_t num_exits() const { return per_exit_probs.size(); }
  [[nodiscard]] std::size_t argmax(std::size_t exit) const;
};

/// Intermediate activations kept for the backward pass.
struct ForwardCache {
  std::vector<std::vector<double>> activations;  // [0] = input, [i+1] = block i
  std::vector<std::vector<double>> features;     // post-ReLU e_i output
  std::vector<std::vector<double>> plus;         // sigmoid outputs
  std::vector<std::vector<double>> minus;
  std::vector<std::vector<double>> softmax;      // per exit (independent) or final only
  PredictionTrace trace;
};

/// Gradient of a loss with respect to every entry of the flat parameter
/// vector, in the same layout.
struct Gradient {
  double loss = 0.0;
  std::vector<double> values;
};

class RecursiveEENetwork {
 public:
  RecursiveEENetwork(BackboneConfig config, HeadMode mode, std::uint64_t seed);
  /// Rebuilds a network around existing parameters (checkpoint loading).
  RecursiveEENetwork(BackboneConfig config, HeadMode mode, std::vector<double> parameters);

  [[nodiscard]] const BackboneConfig& config() const { return config_; }
  [[nodiscard]] HeadMode mode() const { return mode_; }
  [[nodiscard]] std::size_t num_exits() const { return heads_.size(); }
  [[nodiscard]] std::size_t num_classes() const { return config_.num_classes; }
  [[nodiscard]] std::size_t parameter_count() const { return params_.size(); }

  [[nodiscard]] std::span<const double> parameters() const { return params_; }
  [[nodiscard]] std::span<double> parameters() { return params_; }

  [[nodiscard]] const std::vector<Dense>& blocks() const { return blocks_; }
  [[nodiscard]] const std::vector<ExitHead>& heads() const { return heads_; }

  [[nodiscard]] PredictionTrace forward(std::span<const double> x) const;
  [[nodiscard]] ForwardCache forward_cached(std::span<const double> x) const;

  /// Multiply-accumulate count of every affine map evaluated up to and
  /// including the heads of `exit`.
  [[nodiscard]] std::uint64_t macs_to_exit(std::size_t exit) const;
  /// macs_to_exit(k) / macs_to_exit(last) for every exit.
  [[nodiscard]] std::vector<double> flops_fractions() const;

  bool operator==(const RecursiveEENetwork& other) const {
    return mode_ == other.mode_ && config_ == other.config_ && params_ == other.params_;
  }

 private:
  void build_layout();

  BackboneConfig config_;
  HeadMode mode_;
  std::vector<Dense> blocks_;
  std::vector<ExitHead> heads_;
  std::vector<double> params_;
};

/// Default hinge margin 2/|C|.
[[nodiscard]] double default_margin(std::size_t num_classes);

/// Top-1 minus top-2 probability; 0 for a single-entry vector.
[[nodiscard]] double top2_margin(std::span<const double> probs);

/// Cross-entropy of the raw final distribution plus the mean hinge
/// max(0, H_i - f_i^y + m) over every exit but the last.
[[nodiscard]] double margin_loss(const PredictionTrace& trace, std::size_t label, double margin);

/// Sum of per-exit cross-entropies (independent-head baseline).
[[nodiscard]] double branch_loss(const PredictionTrace& trace, std::size_t label);

/// Loss of the network's own training objective and its gradient.
/// Recursive nets use margin_loss; independent nets use branch_loss and
/// ignore `margin`. Hinges at the kink take the zero subgradient.
[[nodiscard]] Gradient loss_gradient(const RecursiveEENetwork& net, std::span<const double> x,
                                     std::size_t label, double margin);

/// Objective value without the backward pass.
[[nodiscard]] double objective(const RecursiveEENetwork& net, std::span<const double> x,
                               std::size_t label, double margin);

}  // namespace reenet
