// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <cmath>
#include <concepts>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "reenet/harness.hpp"

namespace reenet {
namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& what) {
  throw ConfigError("config: " + path + ": " + what);
}

// One JSON object being read. Every key looked up is recorded so that
// finish() can reject the ones nobody asked for.
class Section {
 public:
  Section(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) {
      fail(path_.empty() ? "<root>" : path_, "expected an object");
    }
  }

  [[nodiscard]] std::string child_path(const std::string& key) const {
    return path_.empty() ? key : path_ + "." + key;
  }

  const json* find(const std::string& key) {
    seen_.insert(key);
    const auto it = node_.find(key);
    return it == node_.end() ? nullptr : &*it;
  }

  void read(const std::string& key, double& out) {
    if (const json* v = find(key)) {
      if (!v->is_number()) {
        fail(child_path(key), "expected a number");
      }
      out = v->get<double>();
    }
  }

  template <std::unsigned_integral T>
  void read(const std::string& key, T& out) {
    if (const json* v = find(key)) {
      out = static_cast<T>(as_count(*v, child_path(key)));
    }
  }

  void read(const std::string& key, bool& out) {
    if (const json* v = find(key)) {
      if (!v->is_boolean()) {
        fail(child_path(key), "expected true or false");
      }
      out = v->get<bool>();
    }
  }

  void read(const std::string& key, std::string& out) {
    if (const json* v = find(key)) {
      if (!v->is_string()) {
        fail(child_path(key), "expected a string");
      }
      out = v->get<std::string>();
    }
  }

  void read(const std::string& key, std::vector<double>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) {
        fail(child_path(key), "expected an array of numbers");
      }
      out.clear();
      for (const auto& e : *v) {
        if (!e.is_number()) {
          fail(child_path(key), "expected an array of numbers");
        }
        out.push_back(e.get<double>());
      }
    }
  }

  void read(const std::string& key, std::vector<std::size_t>& out) {
    if (const json* v = find(key)) {
      if (!v->is_array()) {
        fail(child_path(key), "expected an array of non-negative integers");
      }
      out.clear();
      for (const auto& e : *v) {
        out.push_back(as_count(e, child_path(key)));
      }
    }
  }

  /// Nested object; `fn` receives a Section for it.
  template <typename Fn>
  void nested(const std::string& key, Fn&& fn) {
    if (const json* v = find(key)) {
      Section sub(*v, child_path(key));
      fn(sub);
      sub.finish();
    }
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) {
        fail(child_path(key), "unknown key");
      }
    }
  }

 private:
  static std::uint64_t as_count(const json& v, const std::string& path) {
    if (v.is_number_unsigned()) {
      return v.get<std::uint64_t>();
    }
    if (v.is_number_integer() && v.get<std::int64_t>() >= 0) {
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    fail(path, "expected a non-negative integer");
  }

  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

// Re-throws a module's own validation error with the section prefix.
template <typename Fn>
void checked(const std::string& section, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    fail(section, e.what());
  }
}

Optimizer optimizer_from_string(const std::string& s) {
  if (s == "adam") return Optimizer::adam;
  if (s == "sgd") return Optimizer::sgd;
  fail("train.optimizer", "expected \"adam\" or \"sgd\", got \"" + s + "\"");
}

std::string to_string(Optimizer o) { return o == Optimizer::adam ? "adam" : "sgd"; }

std::vector<double> uniform_grid(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return out;
}

}  // namespace

ExperimentConfig default_config() {
  ExperimentConfig cfg;
  cfg.seed = 1;

  cfg.dataset.kind = "blobs";
  cfg.dataset.blobs = BlobsSpec{8, 10, 4, 0.3, 1};
  cfg.dataset.num_train = 8000;
  cfg.dataset.num_validation = 1000;
  cfg.dataset.num_test = 4000;

  cfg.backbone.input_dim = 8;
  cfg.backbone.hidden_dims = {32, 32, 16, 16, 8, 8};
  cfg.backbone.num_classes = 10;
  cfg.backbone.head_dim = 16;

  cfg.train.epochs = 25;

  cfg.fig2.margin_grid = uniform_grid(0.01, 1.0, 41);
  cfg.fig2.probability_grid = uniform_grid(0.01, 1.0, 41);
  cfg.fig2.patience_grid = {1, 2, 3, 4, 5};
  return cfg;
}

void ExperimentConfig::validate() const {
  if (version != kConfigVersion) {
    fail("version", "unsupported version " + std::to_string(version) + " (expected " +
                        std::to_string(kConfigVersion) + ")");
  }
  checked("dataset", [&] { dataset.validate(); });
  checked("backbone", [&] { backbone.validate(); });
  checked("train", [&] { train.validate(); });
  checked("link", [&] { link.validate(); });
  checked("rl.hyper", [&] { rl.hyper.validate(); });
  checked("rl.exploration", [&] { rl.exploration.validate(); });

  if (dataset.kind == "blobs") {
    if (dataset.blobs.dim != backbone.input_dim) {
      fail("backbone.input_dim", "must equal dataset.blobs.dim");
    }
    if (dataset.blobs.num_classes != backbone.num_classes) {
      fail("backbone.num_classes", "must equal dataset.blobs.num_classes");
    }
  } else if (backbone.num_classes != 2) {
    fail("backbone.num_classes", "moons data has 2 classes");
  }

  const std::size_t exits = backbone.resolved().exit_indices.size();
  if (!profile.embedding_bits.empty()) {
    if (profile.embedding_bits.size() != exits) {
      fail("profile.embedding_bits",
           "needs one entry per exit (" + std::to_string(exits) + ")");
    }
    for (double b : profile.embedding_bits) {
      if (!(b > 0.0) || !std::isfinite(b)) {
        fail("profile.embedding_bits", "entries must be positive");
      }
    }
  }
  if (!(profile.bits_per_activation > 0.0)) {
    fail("profile.bits_per_activation", "must be positive");
  }
  if (!(profile.device_full_latency_s > 0.0)) {
    fail("profile.device_full_latency_s", "must be positive");
  }
  if (!(profile.server_full_latency_s > 0.0)) {
    fail("profile.server_full_latency_s", "must be positive");
  }
  if (!(profile.deadline_s > 0.0)) {
    fail("profile.deadline_s", "must be positive");
  }

  if (!(reward.gamma_comp >= 0.0)) {
    fail("reward.gamma_comp", "must be non-negative");
  }
  if (!std::isfinite(reward.penalty)) {
    fail("reward.penalty", "must be finite");
  }

  if (rl.train_episodes == 0) {
    fail("rl.train_episodes", "must be positive");
  }
  if (rl.eval_episodes == 0) {
    fail("rl.eval_episodes", "must be positive");
  }

  if (sweep.margin_thresholds.empty()) {
    fail("sweep.margin_thresholds", "must not be empty");
  }
  for (double m : sweep.margin_thresholds) {
    if (!(m > 0.0 && m < 1.0)) {
      fail("sweep.margin_thresholds", "entries must lie in (0, 1)");
    }
  }
  if (sweep.gamma_comm.empty()) {
    fail("sweep.gamma_comm", "must not be empty");
  }
  for (double g : sweep.gamma_comm) {
    if (!(g >= 0.0) || !std::isfinite(g)) {
      fail("sweep.gamma_comm", "entries must be non-negative");
    }
  }

  if (fig2.margin_grid.empty() || fig2.probability_grid.empty() || fig2.patience_grid.empty()) {
    fail("fig2", "threshold grids must not be empty");
  }
  for (double t : fig2.margin_grid) {
    if (!(t > 0.0 && t <= 1.0)) fail("fig2.margin_grid", "entries must lie in (0, 1]");
  }
  for (double t : fig2.probability_grid) {
    if (!(t > 0.0 && t <= 1.0)) fail("fig2.probability_grid", "entries must lie in (0, 1]");
  }
  for (std::size_t p : fig2.patience_grid) {
    if (p == 0) fail("fig2.patience_grid", "entries must be positive");
  }
  if (!(fig2.flops_tolerance > 0.0)) {
    fail("fig2.flops_tolerance", "must be positive");
  }
}

ExperimentConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: malformed JSON: ") + e.what());
  }

  ExperimentConfig cfg = default_config();
  Section root(doc, "");
  const json* version = root.find("version");
  if (version == nullptr) {
    fail("version", "missing");
  }
  if (!version->is_number_integer()) {
    fail("version", "expected an integer");
  }
  cfg.version = version->get<int>();
  if (cfg.version != kConfigVersion) {
    fail("version", "unsupported version " + std::to_string(cfg.version));
  }
  root.read("seed", cfg.seed);

  root.nested("dataset", [&](Section& s) {
    s.read("kind", cfg.dataset.kind);
    s.read("num_train", cfg.dataset.num_train);
    s.read("num_validation", cfg.dataset.num_validation);
    s.read("num_test", cfg.dataset.num_test);
    s.read("moons_noise", cfg.dataset.moons_noise);
    s.nested("blobs", [&](Section& b) {
      b.read("dim", cfg.dataset.blobs.dim);
      b.read("num_classes", cfg.dataset.blobs.num_classes);
      b.read("clusters_per_class", cfg.dataset.blobs.clusters_per_class);
      b.read("spread", cfg.dataset.blobs.spread);
      b.read("centre_seed", cfg.dataset.blobs.centre_seed);
    });
  });

  root.nested("backbone", [&](Section& s) {
    s.read("input_dim", cfg.backbone.input_dim);
    s.read("hidden_dims", cfg.backbone.hidden_dims);
    s.read("num_classes", cfg.backbone.num_classes);
    s.read("exit_indices", cfg.backbone.exit_indices);
    s.read("head_dim", cfg.backbone.head_dim);
  });

  root.nested("train", [&](Section& s) {
    if (const json* m = s.find("margin")) {
      if (m->is_null()) {
        cfg.train.margin.reset();
      } else if (m->is_number()) {
        cfg.train.margin = m->get<double>();
      } else {
        fail("train.margin", "expected a number or null");
      }
    }
    std::string opt = to_string(cfg.train.optimizer);
    s.read("optimizer", opt);
    cfg.train.optimizer = optimizer_from_string(opt);
    s.read("learning_rate", cfg.train.learning_rate);
    s.read("momentum", cfg.train.momentum);
    s.read("epochs", cfg.train.epochs);
    s.read("batch_size", cfg.train.batch_size);
  });

  root.nested("link", [&](Section& s) {
    s.read("carrier_hz", cfg.link.carrier_hz);
    s.read("bandwidth_hz", cfg.link.bandwidth_hz);
    s.read("pathloss_exponent", cfg.link.pathloss_exponent);
    s.read("tx_power_w", cfg.link.tx_power_w);
    s.read("noise_psd_dbm_hz", cfg.link.noise_psd_dbm_hz);
    s.read("noise_figure_db", cfg.link.noise_figure_db);
    s.read("distance_min_m", cfg.link.distance_min_m);
    s.read("distance_max_m", cfg.link.distance_max_m);
    std::string placement(to_string(cfg.link.placement));
    s.read("placement", placement);
    checked("link.placement", [&] { cfg.link.placement = placement_from_string(placement); });
    s.read("mcs_set", cfg.link.mcs_set);
  });

  root.nested("profile", [&](Section& s) {
    s.read("device_full_latency_s", cfg.profile.device_full_latency_s);
    s.read("server_full_latency_s", cfg.profile.server_full_latency_s);
    s.read("deadline_s", cfg.profile.deadline_s);
    s.read("bits_per_activation", cfg.profile.bits_per_activation);
    s.read("embedding_bits", cfg.profile.embedding_bits);
  });

  root.nested("reward", [&](Section& s) {
    s.read("gamma_comp", cfg.reward.gamma_comp);
    s.read("penalty", cfg.reward.penalty);
  });

  root.nested("rl", [&](Section& s) {
    s.read("alpha", cfg.rl.hyper.alpha);
    s.read("discount", cfg.rl.hyper.discount);
    s.read("alpha_decay", cfg.rl.hyper.alpha_decay);
    s.read("epsilon_start", cfg.rl.exploration.start);
    s.read("epsilon_end", cfg.rl.exploration.end);
    s.read("epsilon_decay_fraction", cfg.rl.exploration.decay_fraction);
    s.read("train_episodes", cfg.rl.train_episodes);
    s.read("eval_episodes", cfg.rl.eval_episodes);
  });

  root.nested("sweep", [&](Section& s) {
    s.read("margin_thresholds", cfg.sweep.margin_thresholds);
    s.read("gamma_comm", cfg.sweep.gamma_comm);
  });

  root.nested("fig2", [&](Section& s) {
    s.read("margin_grid", cfg.fig2.margin_grid);
    s.read("probability_grid", cfg.fig2.probability_grid);
    s.read("patience_grid", cfg.fig2.patience_grid);
    s.read("flops_tolerance", cfg.fig2.flops_tolerance);
  });

  root.finish();
  cfg.validate();
  return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("config: cannot open " + path.string());
  }
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str());
}

std::string config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["version"] = cfg.version;
  j["seed"] = cfg.seed;
  j["dataset"] = {
      {"kind", cfg.dataset.kind},
      {"num_train", cfg.dataset.num_train},
      {"num_validation", cfg.dataset.num_validation},
      {"num_test", cfg.dataset.num_test},
      {"moons_noise", cfg.dataset.moons_noise},
      {"blobs",
       {{"dim", cfg.dataset.blobs.dim},
        {"num_classes", cfg.dataset.blobs.num_classes},
        {"clusters_per_class", cfg.dataset.blobs.clusters_per_class},
        {"spread", cfg.dataset.blobs.spread},
        {"centre_seed", cfg.dataset.blobs.centre_seed}}},
  };
  j["backbone"] = {
      {"input_dim", cfg.backbone.input_dim},
      {"hidden_dims", cfg.backbone.hidden_dims},
      {"num_classes", cfg.backbone.num_classes},
      {"exit_indices", cfg.backbone.exit_indices},
      {"head_dim", cfg.backbone.head_dim},
  };
  j["train"] = {
      {"margin", cfg.train.margin ? json(*cfg.train.margin) : json(nullptr)},
      {"optimizer", to_string(cfg.train.optimizer)},
      {"learning_rate", cfg.train.learning_rate},
      {"momentum", cfg.train.momentum},
      {"epochs", cfg.train.epochs},
      {"batch_size", cfg.train.batch_size},
  };
  j["link"] = {
      {"carrier_hz", cfg.link.carrier_hz},
      {"bandwidth_hz", cfg.link.bandwidth_hz},
      {"pathloss_exponent", cfg.link.pathloss_exponent},
      {"tx_power_w", cfg.link.tx_power_w},
      {"noise_psd_dbm_hz", cfg.link.noise_psd_dbm_hz},
      {"noise_figure_db", cfg.link.noise_figure_db},
      {"distance_min_m", cfg.link.distance_min_m},
      {"distance_max_m", cfg.link.distance_max_m},
      {"placement", std::string(to_string(cfg.link.placement))},
      {"mcs_set", cfg.link.mcs_set},
  };
  j["profile"] = {
      {"device_full_latency_s", cfg.profile.device_full_latency_s},
      {"server_full_latency_s", cfg.profile.server_full_latency_s},
      {"deadline_s", cfg.profile.deadline_s},
      {"bits_per_activation", cfg.profile.bits_per_activation},
      {"embedding_bits", cfg.profile.embedding_bits},
  };
  j["reward"] = {{"gamma_comp", cfg.reward.gamma_comp}, {"penalty", cfg.reward.penalty}};
  j["rl"] = {
      {"alpha", cfg.rl.hyper.alpha},
      {"discount", cfg.rl.hyper.discount},
      {"alpha_decay", cfg.rl.hyper.alpha_decay},
      {"epsilon_start", cfg.rl.exploration.start},
      {"epsilon_end", cfg.rl.exploration.end},
      {"epsilon_decay_fraction", cfg.rl.exploration.decay_fraction},
      {"train_episodes", cfg.rl.train_episodes},
      {"eval_episodes", cfg.rl.eval_episodes},
  };
  j["sweep"] = {{"margin_thresholds", cfg.sweep.margin_thresholds},
                {"gamma_comm", cfg.sweep.gamma_comm}};
  j["fig2"] = {
      {"margin_grid", cfg.fig2.margin_grid},
      {"probability_grid", cfg.fig2.probability_grid},
      {"patience_grid", cfg.fig2.patience_grid},
      {"flops_tolerance", cfg.fig2.flops_tolerance},
  };
  return j.dump(2) + "\n";
}

std::string config_fingerprint(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : config_to_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace reenet
