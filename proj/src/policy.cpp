// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include "reenet/policy.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace reenet {

void RewardConfig::validate() const {
  if (!(gamma_comm >= 0.0) || !(gamma_comp >= 0.0)) {
    throw std::invalid_argument("reward weights must be nonnegative");
  }
  if (!(margin_threshold > 0.0 && margin_threshold < 1.0)) {
    throw std::invalid_argument("reward.margin_threshold must lie in (0, 1)");
  }
}

double reward(const KpiRecord& kpis, const RewardConfig& cfg) {
  if (!kpis.proxy_goal_met) {
    return cfg.penalty;
  }
  return cfg.gamma_comm * kpis.comm_saving + cfg.gamma_comp * kpis.comp_saving;
}

SampleOutcome outcome_from_trace(const PredictionTrace& trace, std::size_t label) {
  SampleOutcome out;
  out.margins = trace.per_exit_margin;
  out.correct.resize(trace.num_exits());
  for (std::size_t k = 0; k < trace.num_exits(); ++k) {
    out.correct[k] = trace.argmax(k) == label ? 1 : 0;
  }
  return out;
}

void PolicyEnv::validate() const {
  profile.validate();
  link.validate();
  reward.validate();
  if (samples.empty()) {
    throw std::invalid_argument("policy environment has no samples");
  }
  for (const SampleOutcome& s : samples) {
    if (s.margins.size() != profile.num_exits() || s.correct.size() != profile.num_exits()) {
      throw std::invalid_argument("sample outcome length does not match the profile's exits");
    }
  }
}

Frame start_frame(const PolicyEnv& env, Rng& rng) {
  std::uniform_int_distribution<std::size_t> pick(0, env.samples.size() - 1);
  Frame frame;
  frame.sample = pick(rng);
  frame.distance_m = sample_distance(env.link, rng);
  frame.channel = redraw_fading(env.link, frame.distance_m, rng);
  return frame;
}

// ---------------------------------------------------------------------------
// QTable

QTable::QTable(std::size_t num_exits, std::size_t num_mcs)
    : num_exits_(num_exits),
      num_mcs_(num_mcs),
      values_(num_exits * num_mcs * kNumActions, 0.0),
      visits_(num_exits * num_mcs * kNumActions, 0) {
  if (num_exits < 2 || num_mcs == 0) {
    throw std::invalid_argument("q-table needs at least 2 exits and 1 MCS");
  }
  for (std::size_t k = 0; k < num_exits; ++k) {
    for (std::size_t m = 0; m < num_mcs; ++m) {
      for (std::size_t a = 0; a < kNumActions; ++a) {
        const MdpState s{k, m};
        if (!available(s, static_cast<ActionKind>(a))) {
          values_[index(s, static_cast<ActionKind>(a))] = kUnavailable;
        }
      }
    }
  }
}

std::size_t QTable::index(const MdpState& s, ActionKind a) const {
  if (s.exit_index >= num_exits_ || s.mcs_index >= num_mcs_) {
    throw std::out_of_range("state outside the q-table");
  }
  return (s.exit_index * num_mcs_ + s.mcs_index) * kNumActions + static_cast<std::size_t>(a);
}

bool QTable::available(const MdpState& s, ActionKind a) const {
  return a == ActionKind::exit || s.exit_index + 1 < num_exits_;
}

double QTable::value(const MdpState& s, ActionKind a) const { return values_[index(s, a)]; }

void QTable::set_value(const MdpState& s, ActionKind a, double v) {
  if (!available(s, a)) {
    throw std::invalid_argument("cannot assign a value to an unavailable action");
  }
  values_[index(s, a)] = v;
}

std::uint64_t QTable::visits(const MdpState& s, ActionKind a) const {
  return visits_[index(s, a)];
}

void QTable::add_visit(const MdpState& s, ActionKind a) { ++visits_[index(s, a)]; }

ActionKind QTable::greedy(const MdpState& s) const {
  ActionKind best = ActionKind::exit;
  double best_value = kUnavailable;
  for (std::size_t a = 0; a < kNumActions; ++a) {
    const auto action = static_cast<ActionKind>(a);
    if (available(s, action) && value(s, action) > best_value) {
      best = action;
      best_value = value(s, action);
    }
  }
  return best;
}

double QTable::max_value(const MdpState& s) const { return value(s, greedy(s)); }

// ---------------------------------------------------------------------------
// Environment dynamics

StepResult step(const PolicyEnv& env, Frame& frame, const MdpState& state, ActionKind action,
                Rng& rng) {
  const std::size_t last = env.last_exit();
  if (state.exit_index > last) {
    throw std::out_of_range("state exit index beyond the final exit");
  }
  if (action != ActionKind::exit && state.exit_index == last) {
    throw std::invalid_argument(std::string(to_string(action)) +
                                " is unavailable at the final exit");
  }
  const SampleOutcome& sample = env.samples.at(frame.sample);

  StepResult out;
  if (action == ActionKind::compute && state.exit_index + 1 < last) {
    frame.channel = redraw_fading(env.link, frame.distance_m, rng);
    out.next = {state.exit_index + 1, frame.channel.mcs_index};
    return out;
  }

  out.terminal = true;
  out.next = state;
  ActionKind issued = action;
  if (action == ActionKind::compute) {
    // Completing the network is a local exit at K.
    out.exit = last;
    issued = ActionKind::exit;
  } else {
    out.exit = state.exit_index;
  }
  out.offloaded = issued == ActionKind::offload;
  out.delay = delay(env.profile, out.exit, out.offloaded, frame.channel.rate_bps);
  const std::size_t result_exit = out.offloaded ? last : out.exit;
  out.margin = sample.margins[result_exit];
  out.correct = sample.correct[result_exit] != 0;
  out.kpis = make_kpis(env.profile, out.exit, issued, out.delay, out.margin,
                       env.reward.margin_threshold, out.correct);
  out.reward = reward(out.kpis, env.reward);
  return out;
}

// ---------------------------------------------------------------------------
// Learning

void QHyper::validate() const {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw std::invalid_argument("rl.alpha must lie in (0, 1]");
  }
  if (!(discount >= 0.0 && discount <= 1.0)) {
    throw std::invalid_argument("rl.discount must lie in [0, 1]");
  }
}

void q_update(QTable& table, const MdpState& s, ActionKind a, std::optional<double> reward,
              std::optional<MdpState> next, const QHyper& hyper) {
  table.add_visit(s, a);
  double target = reward.value_or(0.0);
  if (next) {
    target += hyper.discount * table.max_value(*next);
  }
  double rate = hyper.alpha;
  if (hyper.alpha_decay) {
    rate /= std::sqrt(static_cast<double>(table.visits(s, a)));
  }
  const double q = table.value(s, a);
  table.set_value(s, a, q + rate * (target - q));
}

void ExplorationSchedule::validate() const {
  if (!(start >= 0.0 && start <= 1.0) || !(end >= 0.0 && end <= 1.0)) {
    throw std::invalid_argument("exploration epsilons must lie in [0, 1]");
  }
  if (!(decay_fraction > 0.0 && decay_fraction <= 1.0)) {
    throw std::invalid_argument("exploration decay_fraction must lie in (0, 1]");
  }
}

double ExplorationSchedule::epsilon(std::size_t episode, std::size_t total) const {
  const double horizon = decay_fraction * static_cast<double>(total);
  if (horizon <= 0.0 || static_cast<double>(episode) >= horizon) {
    return end;
  }
  return start + (end - start) * static_cast<double>(episode) / horizon;
}

namespace {

ActionKind explore(const QTable& table, const MdpState& s, double epsilon, Rng& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  if (coin(rng) >= epsilon) {
    return table.greedy(s);
  }
  std::array<ActionKind, kNumActions> options{};
  std::size_t n = 0;
  for (std::size_t a = 0; a < kNumActions; ++a) {
    const auto action = static_cast<ActionKind>(a);
    if (table.available(s, action)) {
      options[n++] = action;
    }
  }
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  return options[pick(rng)];
}

template <typename Chooser>
EpisodeRecord run_episode(const PolicyEnv& env, Rng& rng, Chooser&& choose) {
  Frame frame = start_frame(env, rng);
  MdpState state{0, frame.channel.mcs_index};
  EpisodeRecord record;
  while (true) {
    const ActionKind action = choose(state);
    record.trajectory.emplace_back(state, action);
    const MdpState before = state;
    StepResult r = step(env, frame, state, action, rng);
    choose.observe(before, action, r);
    if (r.terminal) {
      record.final_exit = r.exit;
      record.offloaded = r.offloaded;
      record.delay = r.delay;
      record.margin = r.margin;
      record.reward = *r.reward;
      record.kpis = r.kpis;
      record.correct = r.correct;
      return record;
    }
    state = r.next;
  }
}

}  // namespace

PolicyTraining train_policy(const PolicyEnv& env, std::size_t episodes,
                            const ExplorationSchedule& schedule, const QHyper& hyper,
                            std::uint64_t seed, std::size_t window) {
  env.validate();
  schedule.validate();
  hyper.validate();
  PolicyTraining out{QTable(env.profile.num_exits(), env.link.num_mcs()), {}, {}};
  out.episode_rewards.reserve(episodes);
  Rng rng(seed);

  struct Learner {
    QTable& table;
    const QHyper& hyper;
    double epsilon;
    Rng& rng;
    ActionKind operator()(const MdpState& s) { return explore(table, s, epsilon, rng); }
    void observe(const MdpState& s, ActionKind a, const StepResult& r) {
      q_update(table, s, a, r.reward,
               r.terminal ? std::nullopt : std::optional<MdpState>(r.next), hyper);
    }
  };

  for (std::size_t e = 0; e < episodes; ++e) {
    Learner learner{out.table, hyper, schedule.epsilon(e, episodes), rng};
    out.episode_rewards.push_back(run_episode(env, rng, learner).reward);
  }

  if (window == 0) {
    window = std::max<std::size_t>(1, episodes / 50);
  }
  for (std::size_t start = 0; start < episodes; start += window) {
    const std::size_t stop = std::min(episodes, start + window);
    double total = 0.0;
    for (std::size_t e = start; e < stop; ++e) {
      total += out.episode_rewards[e];
    }
    out.learning_curve.push_back(total / static_cast<double>(stop - start));
  }
  return out;
}

EpisodeRecord run_greedy_episode(const QTable& table, const PolicyEnv& env, Rng& rng) {
  struct Greedy {
    const QTable& table;
    ActionKind operator()(const MdpState& s) const { return table.greedy(s); }
    void observe(const MdpState&, ActionKind, const StepResult&) const {}
  };
  return run_episode(env, rng, Greedy{table});
}

PolicyEvaluation evaluate_policy(const QTable& table, const PolicyEnv& env, std::size_t episodes,
                                 std::uint64_t seed) {
  env.validate();
  if (table.num_exits() != env.profile.num_exits() || table.num_mcs() != env.link.num_mcs()) {
    throw std::invalid_argument("q-table shape does not match the environment");
  }
  PolicyEvaluation eval;
  eval.exit_frequency.assign(env.profile.num_exits(), {0.0, 0.0});
  Rng rng(seed);
  eval.records.reserve(episodes);
  double delay_sum = 0.0;
  std::size_t delay_count = 0;
  std::size_t proxy_hits = 0;
  for (std::size_t e = 0; e < episodes; ++e) {
    EpisodeRecord r = run_greedy_episode(table, env, rng);
    eval.mean_comm_saving += r.kpis.comm_saving;
    eval.mean_comp_saving += r.kpis.comp_saving;
    eval.mean_reward += r.reward;
    proxy_hits += r.kpis.proxy_goal_met ? 1 : 0;
    if (!r.delay.link_outage) {
      delay_sum += r.delay.total_s;
      ++delay_count;
    }
    eval.exit_frequency[r.final_exit][r.offloaded ? 1 : 0] += 1.0;
    eval.records.push_back(std::move(r));
  }
  if (episodes > 0) {
    const double n = static_cast<double>(episodes);
    eval.mean_comm_saving /= n;
    eval.mean_comp_saving /= n;
    eval.mean_reward /= n;
    eval.proxy_effectiveness = static_cast<double>(proxy_hits) / n;
    for (auto& row : eval.exit_frequency) {
      row[0] /= n;
      row[1] /= n;
    }
  }
  eval.goal_effectiveness = goal_effectiveness(eval.records);
  eval.mean_delay_s = delay_count == 0 ? 0.0 : delay_sum / static_cast<double>(delay_count);
  return eval;
}

}  // namespace reenet
