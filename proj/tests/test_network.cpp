// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "reenet/network.hpp"
#include "reenet/rng.hpp"
#include "support.hpp"

using namespace reenet;

namespace {

BackboneConfig small_config(std::size_t blocks = 3, std::size_t classes = 3) {
  BackboneConfig c;
  c.input_dim = 4;
  c.hidden_dims.assign(blocks, 6);
  c.num_classes = classes;
  c.head_dim = 5;
  return c;
}

std::vector<double> random_input(std::size_t dim, Rng& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  std::vector<double> x(dim);
  for (double& v : x) v = u(rng);
  return x;
}

void set_dense(RecursiveEENetwork& net, const Dense& d, double weight, double bias) {
  auto p = net.parameters();
  for (std::size_t i = 0; i < d.weight_count(); ++i) p[d.offset + i] = weight;
  for (std::size_t o = 0; o < d.out; ++o) p[d.bias_offset() + o] = bias;
}

}  // namespace

TEST_CASE("config validation names the field") {
  BackboneConfig c = small_config();
  c.hidden_dims = {8};
  CHECK_THROWS_WITH_AS((void)c.validate(), doctest::Contains("hidden_dims"), std::invalid_argument);
  c = small_config();
  c.num_classes = 1;
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c = small_config();
  c.exit_indices = {2, 1, 3};
  CHECK_THROWS_AS(c.validate(), std::invalid_argument);
  c.exit_indices = {1, 2};
  CHECK_THROWS_WITH(c.validate(), doctest::Contains("last block"));
  c.exit_indices = {1, 3};
  CHECK_NOTHROW(c.validate());
  CHECK(small_config().resolved().exit_indices == std::vector<std::size_t>{1, 2, 3});
}

TEST_CASE("head layout follows the mode") {
  const RecursiveEENetwork rec(small_config(4), HeadMode::recursive, 1);
  REQUIRE(rec.num_exits() == 4);
  CHECK(rec.heads()[0].predictor.has_value());
  CHECK_FALSE(rec.heads()[0].plus.has_value());
  for (std::size_t j = 1; j + 1 < 4; ++j) {
    CHECK(rec.heads()[j].plus.has_value());
    CHECK(rec.heads()[j].minus.has_value());
    CHECK_FALSE(rec.heads()[j].predictor.has_value());
  }
  CHECK(rec.heads()[3].predictor.has_value());
  CHECK_FALSE(rec.heads()[3].plus.has_value());

  const RecursiveEENetwork ind(small_config(4), HeadMode::independent, 1);
  for (const auto& h : ind.heads()) {
    CHECK(h.predictor.has_value());
    CHECK_FALSE(h.plus.has_value());
  }
}

TEST_CASE("forward matches a straight-line evaluation") {
  for (HeadMode mode : {HeadMode::recursive, HeadMode::independent}) {
    for (std::size_t blocks : {2u, 3u, 5u}) {
      const RecursiveEENetwork net(small_config(blocks), mode, 7 + blocks);
      Rng rng(blocks);
      for (int trial = 0; trial < 20; ++trial) {
        const auto x = random_input(4, rng);
        const auto trace = net.forward(x);
        const auto ref = testing::reference_probs(net, x);
        REQUIRE(trace.per_exit_probs.size() == ref.size());
        for (std::size_t j = 0; j < ref.size(); ++j) {
          for (std::size_t c = 0; c < ref[j].size(); ++c) {
            CHECK(trace.per_exit_probs[j][c] == doctest::Approx(ref[j][c]).epsilon(1e-12));
          }
          CHECK(trace.per_exit_margin[j] == doctest::Approx(top2_margin(ref[j])).epsilon(1e-12));
        }
      }
    }
  }
}

TEST_CASE("input of the wrong size is a shape error") {
  const RecursiveEENetwork net(small_config(), HeadMode::recursive, 1);
  const std::vector<double> x(3, 0.0);
  CHECK_THROWS_AS((void)net.forward(x), ShapeError);
}

TEST_CASE("silent mass heads leave the prediction unchanged") {
  RecursiveEENetwork net(small_config(4), HeadMode::recursive, 3);
  for (std::size_t j = 1; j + 1 < net.num_exits(); ++j) {
    set_dense(net, *net.heads()[j].plus, 0.0, -1000.0);
    set_dense(net, *net.heads()[j].minus, 0.0, -1000.0);
  }
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto trace = net.forward(random_input(4, rng));
    CHECK(trace.per_exit_probs[1] == trace.per_exit_probs[0]);
    CHECK(trace.per_exit_probs[2] == trace.per_exit_probs[1]);
  }
}

TEST_CASE("saturated predictions only lose the negative mass") {
  RecursiveEENetwork net(small_config(3), HeadMode::recursive, 4);
  set_dense(net, *net.heads()[0].predictor, 0.0, 1000.0);
  Rng rng(6);
  const auto x = random_input(4, rng);
  const auto trace = net.forward(x);
  for (double v : trace.per_exit_probs[0]) CHECK(v == 1.0);

  // Reference value of the negative mass head at exit 1.
  const auto p = net.parameters();
  std::vector<double> a = x;
  for (std::size_t b = 0; b <= net.heads()[1].block; ++b) {
    a = testing::relu(testing::dense(p, net.blocks()[b], a));
  }
  const auto e = testing::relu(testing::dense(p, net.heads()[1].feature, a));
  const auto minus = testing::sigmoid(testing::dense(p, *net.heads()[1].minus, e));
  for (std::size_t c = 0; c < minus.size(); ++c) {
    CHECK(trace.per_exit_probs[1][c] == doctest::Approx(1.0 - minus[c]).epsilon(1e-15));
  }
}

TEST_CASE("probabilities stay in the unit interval and the final rule only adds mass") {
  Rng rng(11);
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    const RecursiveEENetwork net(small_config(4, 5), HeadMode::recursive, seed);
    for (int trial = 0; trial < 100; ++trial) {
      const auto trace = net.forward(random_input(4, rng, 10.0));
      for (const auto& f : trace.per_exit_probs) {
        for (double v : f) {
          CHECK(v >= 0.0);
          CHECK(v <= 1.0);
        }
      }
      const auto& last = trace.per_exit_probs.back();
      const auto& prev = trace.per_exit_probs[trace.num_exits() - 2];
      for (std::size_t c = 0; c < last.size(); ++c) CHECK(last[c] >= prev[c]);
    }
  }
}

TEST_CASE("top-two margin") {
  CHECK(top2_margin(std::vector<double>{0.9, 0.1, 0.0}) == doctest::Approx(0.8));
  CHECK(top2_margin(std::vector<double>{0.5, 0.5, 0.0}) == 0.0);
  CHECK(top2_margin(std::vector<double>{0.2, 0.7, 0.4}) == doctest::Approx(0.3));
}

TEST_CASE("margin loss on hand-set numbers") {
  CHECK(default_margin(10) == doctest::Approx(0.2));

  PredictionTrace t;
  t.per_exit_probs = {{0.6, 0.3, 0.1}, {0.2, 0.5, 0.4}, {0.9, 0.8, 0.3}};
  t.final_distribution = {0.7, 0.2, 0.1};
  // CE = -ln 0.7; hinges (0.3 - 0.6 + 0.5) = 0.2 and (0.5 - 0.2 + 0.5) = 0.8.
  CHECK(margin_loss(t, 0, 0.5) == doctest::Approx(-std::log(0.7) + 0.5).epsilon(1e-12));
  // Label 1: hinges (0.6 - 0.3 + 0.1) = 0.4 and (0.4 - 0.5 + 0.1) = 0.
  CHECK(margin_loss(t, 1, 0.1) == doctest::Approx(-std::log(0.2) + 0.2).epsilon(1e-12));
  CHECK(branch_loss(t, 0) == doctest::Approx(-std::log(0.6) - std::log(0.2) - std::log(0.9)));
  CHECK_THROWS_AS((void)margin_loss(t, 3, 0.1), std::invalid_argument);

  PredictionTrace perfect;
  perfect.per_exit_probs = {{1, 0, 0}, {1, 0, 0}, {1, 0, 0}};
  perfect.final_distribution = {1, 0, 0};
  CHECK(margin_loss(perfect, 0, 0.2) == doctest::Approx(0.0));
}

TEST_CASE("analytic gradients agree with central differences") {
  for (HeadMode mode : {HeadMode::recursive, HeadMode::independent}) {
    for (std::uint64_t seed = 0; seed < 4; ++seed) {
      const RecursiveEENetwork net(small_config(3), mode, seed);
      Rng rng(seed + 100);
      const auto x = random_input(4, rng);
      const std::size_t y = seed % 3;
      const double m = 0.3;
      const Gradient g = loss_gradient(net, x, y, m);
      CHECK(g.loss == doctest::Approx(objective(net, x, y, m)).epsilon(1e-12));

      RecursiveEENetwork probe = net;
      const double h = 1e-5;
      for (std::size_t i = 0; i < probe.parameter_count(); ++i) {
        const double saved = probe.parameters()[i];
        probe.parameters()[i] = saved + h;
        const double up = objective(probe, x, y, m);
        probe.parameters()[i] = saved - h;
        const double down = objective(probe, x, y, m);
        probe.parameters()[i] = saved;
        const double fd = (up - down) / (2 * h);
        const double err = std::abs(fd - g.values[i]) / std::max(1e-7, std::abs(fd) + std::abs(g.values[i]));
        CHECK(err < 1e-4);
      }
    }
  }
}

TEST_CASE("mass heads get no gradient while every hinge is inactive") {
  RecursiveEENetwork net(small_config(4), HeadMode::recursive, 9);
  const std::size_t y = 1;
  // Exit 0 is certain of the label and the mass heads barely move it.
  auto p = net.parameters();
  const Dense& pred = *net.heads()[0].predictor;
  for (std::size_t i = 0; i < pred.weight_count(); ++i) p[pred.offset + i] = 0.0;
  for (std::size_t c = 0; c < pred.out; ++c) p[pred.bias_offset() + c] = c == y ? 50.0 : -50.0;
  for (std::size_t j = 1; j + 1 < net.num_exits(); ++j) {
    set_dense(net, *net.heads()[j].plus, 0.0, -50.0);
    set_dense(net, *net.heads()[j].minus, 0.0, -50.0);
  }
  Rng rng(2);
  const auto g = loss_gradient(net, random_input(4, rng), y, 0.2);
  for (std::size_t j = 1; j + 1 < net.num_exits(); ++j) {
    for (const Dense* d : {&*net.heads()[j].plus, &*net.heads()[j].minus}) {
      for (std::size_t i = d->offset; i < d->end(); ++i) CHECK(g.values[i] == 0.0);
    }
  }
}

TEST_CASE("hinge at the kink takes the zero subgradient") {
  // Two exits; a flat exit-0 predictor gives f_y = H, so the hinge argument
  // is exactly zero with m = 0 and only the kink convention decides.
  RecursiveEENetwork net(small_config(2), HeadMode::recursive, 12);
  set_dense(net, *net.heads()[0].predictor, 0.0, 0.0);
  Rng rng(3);
  const auto g = loss_gradient(net, random_input(4, rng), 0, 0.0);
  const Dense& pred = *net.heads()[0].predictor;
  for (std::size_t i = pred.offset; i < pred.end(); ++i) CHECK(g.values[i] == 0.0);
}

TEST_CASE("flops fractions are increasing and end at one") {
  const RecursiveEENetwork net(small_config(4), HeadMode::recursive, 1);
  const auto f = net.flops_fractions();
  REQUIRE(f.size() == 4);
  for (std::size_t k = 1; k < f.size(); ++k) CHECK(f[k] > f[k - 1]);
  CHECK(f.back() == 1.0);
  // Block 0 (4x6), its feature map (6x5) and predictor (5x3).
  CHECK(net.macs_to_exit(0) == 24u + 30u + 15u);
}

TEST_CASE("same seed gives the same network") {
  const RecursiveEENetwork a(small_config(), HeadMode::recursive, 42);
  const RecursiveEENetwork b(small_config(), HeadMode::recursive, 42);
  const RecursiveEENetwork c(small_config(), HeadMode::recursive, 43);
  CHECK(a == b);
  CHECK_FALSE(a == c);
}
