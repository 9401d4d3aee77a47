// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//
// Python bindings for the core library. Heavy work runs with the GIL released.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include <sstream>

#include "reenet/checkpoint.hpp"
#include "reenet/harness.hpp"
#include "reenet/latency.hpp"
#include "reenet/radio.hpp"

namespace py = pybind11;
using namespace reenet;

namespace {

std::vector<py::dict> records_to_dicts(const std::vector<RunRecord>& records) {
  std::vector<py::dict> out;
  out.reserve(records.size());
  for (const RunRecord& r : records) {
    py::dict d;
    d["m_th"] = r.m_th;
    d["gamma_comm"] = r.gamma_comm;
    d["gamma_comp"] = r.gamma_comp;
    d["comp_saving"] = r.comp_saving;
    d["comm_saving"] = r.comm_saving;
    d["goal_effectiveness"] = r.goal_effectiveness;
    d["mean_delay_ms"] = r.mean_delay_ms;
    d["exit_frequency"] = r.exit_frequency;
    out.push_back(std::move(d));
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_reenet, m) {
  m.doc() = "Recursive early-exit networks with learned offloading";

  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<ShapeError>(m, "ShapeError", PyExc_ValueError);

  m.attr("CONFIG_VERSION") = kConfigVersion;

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def("validate", &ExperimentConfig::validate)
      .def("to_json", [](const ExperimentConfig& c) { return config_to_json(c); })
      .def("fingerprint", [](const ExperimentConfig& c) { return config_fingerprint(c); });

  m.def("default_config", &default_config);
  m.def("parse_config", &parse_config, py::arg("text"));
  m.def("load_config", &load_config, py::arg("path"));

  py::class_<BackboneConfig>(m, "BackboneConfig")
      .def(py::init<>())
      .def_readwrite("input_dim", &BackboneConfig::input_dim)
      .def_readwrite("hidden_dims", &BackboneConfig::hidden_dims)
      .def_readwrite("num_classes", &BackboneConfig::num_classes)
      .def_readwrite("exit_indices", &BackboneConfig::exit_indices)
      .def_readwrite("head_dim", &BackboneConfig::head_dim);

  py::enum_<HeadMode>(m, "HeadMode")
      .value("recursive", HeadMode::recursive)
      .value("independent", HeadMode::independent);

  py::class_<PredictionTrace>(m, "PredictionTrace")
      .def_readonly("per_exit_probs", &PredictionTrace::per_exit_probs)
      .def_readonly("per_exit_margin", &PredictionTrace::per_exit_margin)
      .def_readonly("final_distribution", &PredictionTrace::final_distribution)
      .def("argmax", &PredictionTrace::argmax, py::arg("exit"));

  py::class_<RecursiveEENetwork>(m, "Network")
      .def(py::init<BackboneConfig, HeadMode, std::uint64_t>(), py::arg("config"),
           py::arg("mode") = HeadMode::recursive, py::arg("seed") = 1)
      .def_property_readonly("num_exits", &RecursiveEENetwork::num_exits)
      .def_property_readonly("num_classes", &RecursiveEENetwork::num_classes)
      .def_property_readonly("parameter_count", &RecursiveEENetwork::parameter_count)
      .def("forward",
           [](const RecursiveEENetwork& net, const std::vector<double>& x) {
             return net.forward(x);
           },
           py::arg("x"))
      .def("flops_fractions", &RecursiveEENetwork::flops_fractions)
      .def("save", [](const RecursiveEENetwork& net,
                      const std::filesystem::path& p) { save_checkpoint(p, net); })
      .def_static("load", &load_checkpoint, py::arg("path"));

  py::class_<LinkConfig>(m, "LinkConfig")
      .def(py::init<>())
      .def_readwrite("carrier_hz", &LinkConfig::carrier_hz)
      .def_readwrite("bandwidth_hz", &LinkConfig::bandwidth_hz)
      .def_readwrite("pathloss_exponent", &LinkConfig::pathloss_exponent)
      .def_readwrite("tx_power_w", &LinkConfig::tx_power_w)
      .def_readwrite("distance_min_m", &LinkConfig::distance_min_m)
      .def_readwrite("distance_max_m", &LinkConfig::distance_max_m)
      .def_readwrite("mcs_set", &LinkConfig::mcs_set);

  py::class_<ChannelDraw>(m, "ChannelDraw")
      .def_readonly("distance_m", &ChannelDraw::distance_m)
      .def_readonly("snr_linear", &ChannelDraw::snr_linear)
      .def_readonly("capacity_bps_hz", &ChannelDraw::capacity_bps_hz)
      .def_readonly("mcs_index", &ChannelDraw::mcs_index)
      .def_readonly("rate_bps", &ChannelDraw::rate_bps);

  m.def("pathloss", &pathloss, py::arg("link"), py::arg("distance_m"));
  m.def("noise_power_w", &noise_power_w, py::arg("link"));
  m.def("select_mcs",
        [](const std::vector<double>& set, double capacity) { return select_mcs(set, capacity); },
        py::arg("mcs_set"), py::arg("capacity"));
  m.def("channel_at", &channel_at, py::arg("link"), py::arg("distance_m"),
        py::arg("fading_gain"));

  py::class_<SystemProfile>(m, "SystemProfile")
      .def(py::init<>())
      .def_readwrite("flops_fractions", &SystemProfile::flops_fractions)
      .def_readwrite("embedding_bits", &SystemProfile::embedding_bits)
      .def_readwrite("device_full_latency_s", &SystemProfile::device_full_latency_s)
      .def_readwrite("server_full_latency_s", &SystemProfile::server_full_latency_s)
      .def_readwrite("deadline_s", &SystemProfile::deadline_s)
      .def("validate", &SystemProfile::validate);

  py::class_<DelayBreakdown>(m, "DelayBreakdown")
      .def_readonly("local_s", &DelayBreakdown::local_s)
      .def_readonly("tx_s", &DelayBreakdown::tx_s)
      .def_readonly("remote_s", &DelayBreakdown::remote_s)
      .def_readonly("total_s", &DelayBreakdown::total_s)
      .def_readonly("met_deadline", &DelayBreakdown::met_deadline)
      .def_readonly("link_outage", &DelayBreakdown::link_outage);

  m.def("delay", &delay, py::arg("profile"), py::arg("exit"), py::arg("offloaded"),
        py::arg("rate_bps"));

  m.def(
      "run_sweep",
      [](const ExperimentConfig& cfg, unsigned jobs) {
        SweepResult result;
        {
          py::gil_scoped_release release;
          result = run_sweep(cfg, jobs);
        }
        return records_to_dicts(result.records);
      },
      py::arg("config"), py::arg("jobs") = 1);
  m.def(
      "sweep_to_dir",
      [](const ExperimentConfig& cfg, const std::filesystem::path& out, unsigned jobs) {
        py::gil_scoped_release release;
        emit_report(run_sweep(cfg, jobs).records, out);
      },
      py::arg("config"), py::arg("out"), py::arg("jobs") = 1);
  m.def("read_report", [](const std::filesystem::path& dir) {
    return records_to_dicts(read_report(dir));
  });
}
