// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "reenet/halting.hpp"
#include "reenet/rng.hpp"

using namespace reenet;

namespace {

PredictionTrace trace_of(std::vector<std::vector<double>> probs) {
  PredictionTrace t;
  for (const auto& p : probs) t.per_exit_margin.push_back(top2_margin(p));
  t.final_distribution = probs.back();
  t.per_exit_probs = std::move(probs);
  return t;
}

}  // namespace

TEST_CASE("halting rule on hand-set traces") {
  const auto t = trace_of({{0.9, 0.1, 0.0}, {0.5, 0.5, 0.0}, {0.2, 0.7, 0.1}});
  CHECK(halt_decision(t, 0, HaltingPolicy::margin(0.3)));
  CHECK_FALSE(halt_decision(t, 0, HaltingPolicy::margin(0.8)));  // strict inequality
  for (double th : {1e-9, 0.1, 0.5}) CHECK_FALSE(halt_decision(t, 1, HaltingPolicy::margin(th)));
  CHECK(halt_decision(t, 2, HaltingPolicy::margin(1.0)));  // final exit always halts
  CHECK(halt_decision(t, 0, HaltingPolicy::probability(0.85)));
  CHECK_FALSE(halt_decision(t, 1, HaltingPolicy::probability(0.5)));
  CHECK_THROWS_AS((void)halt_decision(t, 3, HaltingPolicy::margin(0.5)), std::out_of_range);
}

TEST_CASE("patience counts consecutive agreeing exits") {
  const auto t = trace_of({{0.6, 0.4}, {0.7, 0.3}, {0.8, 0.2}, {0.1, 0.9}});
  const std::vector<std::size_t> agree{1, 1};
  const std::vector<std::size_t> differ{0, 1};
  CHECK(halt_decision(t, 1, HaltingPolicy::patient(2), agree));
  CHECK_FALSE(halt_decision(t, 1, HaltingPolicy::patient(2), differ));
  CHECK_FALSE(halt_decision(t, 0, HaltingPolicy::patient(2), std::vector<std::size_t>{0}));
  CHECK_THROWS_AS((void)halt_decision(t, 1, HaltingPolicy::patient(2)), std::invalid_argument);
  CHECK(halting_exit(t, HaltingPolicy::patient(3)) == 2);
  CHECK(halting_exit(t, HaltingPolicy::patient(1)) == 0);
}

TEST_CASE("policy validation") {
  CHECK_THROWS_AS(HaltingPolicy::margin(0.0).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HaltingPolicy::probability(1.5).validate(), std::invalid_argument);
  CHECK_THROWS_AS(HaltingPolicy::patient(0).validate(), std::invalid_argument);
  CHECK(halting_kind_from_string("patience") == HaltingKind::patience);
  CHECK(to_string(HaltingKind::recursive_margin) == "recursive-margin");
  CHECK_THROWS_AS((void)halting_kind_from_string("oracle"), std::invalid_argument);
}

TEST_CASE("threshold extremes pin the FLOPs fraction") {
  const std::vector<PredictionTrace> traces{trace_of({{0.6, 0.3}, {0.9, 0.1}, {0.2, 0.8}}),
                                            trace_of({{0.1, 0.2}, {0.5, 0.4}, {0.7, 0.3}})};
  const std::vector<std::size_t> labels{0, 1};
  const std::vector<double> fractions{0.25, 0.6, 1.0};
  const std::vector<HaltingPolicy> grid{HaltingPolicy::margin(1e-9), HaltingPolicy::margin(1.0),
                                        HaltingPolicy::margin(0.35)};
  const auto pts = evaluate_flops_accuracy(traces, labels, fractions, grid);
  CHECK(pts[0].flops_fraction == doctest::Approx(0.25));
  CHECK(pts[0].accuracy == doctest::Approx(1.0));
  CHECK(pts[1].flops_fraction == doctest::Approx(1.0));
  CHECK(pts[1].accuracy == doctest::Approx(0.0));
  // First sample halts at exit 1, second runs to the end.
  CHECK(pts[2].flops_fraction == doctest::Approx(0.8));
  CHECK(pts[2].accuracy == doctest::Approx(0.5));
}

TEST_CASE("raising the margin threshold shrinks every halting set") {
  Rng rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<PredictionTrace> traces;
  for (int n = 0; n < 500; ++n) {
    std::vector<std::vector<double>> probs(5, std::vector<double>(4));
    for (auto& p : probs) for (double& v : p) v = u(rng);
    traces.push_back(trace_of(probs));
  }
  const std::vector<double> grid{0.05, 0.1, 0.2, 0.4, 0.8};
  for (std::size_t g = 1; g < grid.size(); ++g) {
    for (const auto& t : traces) {
      const std::size_t lo = halting_exit(t, HaltingPolicy::margin(grid[g - 1]));
      const std::size_t hi = halting_exit(t, HaltingPolicy::margin(grid[g]));
      CHECK(hi >= lo);
      for (std::size_t k = 0; k < t.num_exits(); ++k) {
        if (halt_decision(t, k, HaltingPolicy::margin(grid[g]))) {
          CHECK(halt_decision(t, k, HaltingPolicy::margin(grid[g - 1])));
        }
      }
    }
  }
}

TEST_CASE("weak dominance counts matched points only") {
  const std::vector<TradeoffPoint> base{{{}, 0.30, 0.80}, {{}, 0.50, 0.85}, {{}, 0.90, 0.90}};
  const std::vector<TradeoffPoint> cand{{{}, 0.31, 0.81}, {{}, 0.51, 0.84}};
  const DominanceSummary d = weak_dominance(cand, base, 0.02);
  CHECK(d.matched == 2);
  CHECK(d.dominated == 1);
  CHECK(d.fraction() == doctest::Approx(0.5));
  CHECK(weak_dominance(cand, {}, 0.02).fraction() == 0.0);
}
