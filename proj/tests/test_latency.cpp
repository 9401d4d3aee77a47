// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <random>
#include <stdexcept>

#include "doctest.h"
#include "reenet/latency.hpp"
#include "reenet/rng.hpp"

using namespace reenet;

namespace {

SystemProfile profile_of(std::vector<double> fractions, std::vector<double> bits) {
  SystemProfile p;
  p.flops_fractions = std::move(fractions);
  p.embedding_bits = std::move(bits);
  p.validate();
  return p;
}

}  // namespace

TEST_CASE("profile validation") {
  SystemProfile p;
  p.flops_fractions = {0.5, 0.4, 1.0};
  p.embedding_bits = {1, 1, 1};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.flops_fractions = {0.4, 0.9};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.embedding_bits = {1, 1};
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
  p.flops_fractions = {0.4, 1.0};
  CHECK_NOTHROW(p.validate());
  p.deadline_s = 0.0;
  CHECK_THROWS_AS(p.validate(), std::invalid_argument);
}

TEST_CASE("delay examples with the default latencies") {
  const SystemProfile p = profile_of({0.1, 0.4, 1.0}, {40e3, 40e3, 10e3});
  const DelayBreakdown local = delay(p, 1, false, 1e7);
  CHECK(local.total_s == doctest::Approx(0.020));
  CHECK(local.tx_s == 0.0);
  CHECK(local.remote_s == 0.0);
  CHECK(local.met_deadline);

  const DelayBreakdown off = delay(p, 1, true, 10e6);
  CHECK(off.local_s == 0.4 * 0.050);
  CHECK(off.tx_s == 40e3 / 10e6);
  CHECK(off.remote_s == 0.6 * 0.010);
  CHECK(off.total_s == doctest::Approx(0.030).epsilon(1e-15));
  CHECK(off.met_deadline);

  const DelayBreakdown dead = delay(p, 0, true, 0.0);
  CHECK(dead.link_outage);
  CHECK_FALSE(dead.met_deadline);

  CHECK_THROWS_AS((void)delay(p, 3, false, 1e6), std::out_of_range);
  CHECK_THROWS_AS((void)delay(p, 0, true, -1.0), std::invalid_argument);
}

TEST_CASE("delay agrees with an independent sum") {
  Rng rng(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const SystemProfile p = profile_of({0.05, 0.2, 0.45, 0.7, 1.0}, {512, 512, 256, 128, 64});
  for (int n = 0; n < 10000; ++n) {
    const std::size_t k = static_cast<std::size_t>(u(rng) * 5.0) % 5;
    const bool off = u(rng) < 0.5;
    const double rate = 1e5 + u(rng) * 1e8;
    const double f = p.flops_fractions[k];
    const double expected =
        f * p.device_full_latency_s + (off ? p.embedding_bits[k] / rate + (1.0 - f) * p.server_full_latency_s : 0.0);
    const DelayBreakdown d = delay(p, k, off, rate);
    CHECK(std::abs(d.total_s - expected) <= 1e-12 * expected);
    CHECK(d.met_deadline == (d.total_s <= p.deadline_s));
  }
}

TEST_CASE("savings") {
  const SystemProfile p = profile_of({0.1, 0.3, 0.6, 1.0}, {8e3, 8e3, 4e3, 4e3});
  CHECK(comp_saving(p, 0) == doctest::Approx(0.9));
  CHECK(comp_saving(p, 3) == 0.0);
  for (std::size_t k = 0; k < 4; ++k) CHECK(comp_saving(p, k) == 1.0 - p.flops_fractions[k]);
  CHECK(comm_saving(p, 3, ActionKind::offload) == doctest::Approx(0.5));
  CHECK(comm_saving(p, 0, ActionKind::offload) == 0.0);
  CHECK(comm_saving(p, 2, ActionKind::exit) == 1.0);
  CHECK_THROWS_AS((void)comm_saving(p, 1, ActionKind::compute), std::invalid_argument);
}

TEST_CASE("proxy goal boundaries") {
  DelayBreakdown d;
  d.total_s = 0.039;
  d.met_deadline = true;
  CHECK(proxy_goal(d, 0.5, 0.3));
  CHECK_FALSE(proxy_goal(d, 0.3, 0.3));
  d.total_s = 0.041;
  d.met_deadline = false;
  CHECK_FALSE(proxy_goal(d, 0.99, 0.3));
}

TEST_CASE("goal effectiveness counts on-time correct frames") {
  std::vector<EpisodeRecord> records(4);
  for (auto& r : records) {
    r.delay.met_deadline = true;
    r.correct = true;
  }
  CHECK(goal_effectiveness(records) == 1.0);
  records[2].correct = false;
  CHECK(goal_effectiveness(records) == 0.75);
  for (auto& r : records) r.delay.met_deadline = false;
  CHECK(goal_effectiveness(records) == 0.0);
  CHECK(goal_effectiveness({}) == 0.0);
}

TEST_CASE("kpi record bundles savings and goals") {
  const SystemProfile p = profile_of({0.2, 1.0}, {100, 50});
  const DelayBreakdown d = delay(p, 0, true, 1e6);
  const KpiRecord k = make_kpis(p, 0, ActionKind::offload, d, 0.4, 0.3, false);
  CHECK(k.comp_saving == doctest::Approx(0.8));
  CHECK(k.comm_saving == 0.0);
  CHECK(k.proxy_goal_met);
  CHECK_FALSE(k.true_goal_met);
}
