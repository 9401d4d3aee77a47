// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Reference implementations used as test oracles. They read the same flat
// parameter vector as the library but evaluate everything with plain loops.

#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "reenet/network.hpp"

namespace reenet::testing {

inline std::vector<double> dense(std::span<const double> p, const Dense& d,
                                 const std::vector<double>& x) {
  std::vector<double> y(d.out);
  for (std::size_t o = 0; o < d.out; ++o) {
    double acc = p[d.bias_offset() + o];
    for (std::size_t i = 0; i < d.in; ++i) {
      acc += p[d.offset + o * d.in + i] * x[i];
    }
    y[o] = acc;
  }
  return y;
}

inline std::vector<double> relu(std::vector<double> v) {
  for (double& e : v) e = e > 0.0 ? e : 0.0;
  return v;
}

inline std::vector<double> sigmoid(std::vector<double> v) {
  for (double& e : v) e = 1.0 / (1.0 + std::exp(-e));
  return v;
}

inline std::vector<double> softmax(std::vector<double> v) {
  const double top = *std::max_element(v.begin(), v.end());
  double sum = 0.0;
  for (double& e : v) {
    e = std::exp(e - top);
    sum += e;
  }
  for (double& e : v) e /= sum;
  return v;
}

/// Straight-line evaluation of the four-case combination rule.
inline std::vector<std::vector<double>> reference_probs(const RecursiveEENetwork& net,
                                                        const std::vector<double>& x) {
  const auto p = net.parameters();
  std::vector<std::vector<double>> acts{x};
  for (const Dense& b : net.blocks()) {
    acts.push_back(relu(dense(p, b, acts.back())));
  }
  std::vector<std::vector<double>> f;
  const std::size_t n = net.num_exits();
  for (std::size_t j = 0; j < n; ++j) {
    const ExitHead& h = net.heads()[j];
    const auto e = relu(dense(p, h.feature, acts[h.block + 1]));
    if (net.mode() == HeadMode::independent) {
      f.push_back(softmax(dense(p, *h.predictor, e)));
    } else if (j == 0) {
      f.push_back(sigmoid(dense(p, *h.predictor, e)));
    } else if (j + 1 < n) {
      const auto up = sigmoid(dense(p, *h.plus, e));
      const auto down = sigmoid(dense(p, *h.minus, e));
      std::vector<double> cur(up.size());
      for (std::size_t c = 0; c < cur.size(); ++c) {
        const double prev = f.back()[c];
        cur[c] = prev + (1.0 - prev) * up[c] - prev * down[c];
      }
      f.push_back(cur);
    } else {
      const auto dist = softmax(dense(p, *h.predictor, e));
      std::vector<double> cur(dist.size());
      for (std::size_t c = 0; c < cur.size(); ++c) {
        const double prev = f.back()[c];
        cur[c] = prev + (1.0 - prev) * dist[c];
      }
      f.push_back(cur);
    }
  }
  return f;
}

}  // namespace reenet::testing
