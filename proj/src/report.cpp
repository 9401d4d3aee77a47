// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "reenet/harness.hpp"
#include "reenet/svg.hpp"

namespace reenet {
namespace {

constexpr std::string_view kTradeoffHeader =
    "m_th,gamma_comm,gamma_comp,comp_saving,comm_saving,goal_effectiveness,mean_delay_ms";
constexpr std::string_view kExitHistHeader = "m_th,gamma_comm,exit_index,offloaded,frequency";
constexpr std::string_view kFig2Header = "policy,setting,flops_fraction,accuracy";

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(field);
  }
  if (!line.empty() && line.back() == ',') {
    out.emplace_back();
  }
  return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad number \"" + s + "\"");
  }
  return v;
}

std::size_t parse_index(const std::string& s, std::size_t line_no) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("line " + std::to_string(line_no) + ": bad integer \"" + s + "\"");
  }
  return v;
}

// Reads the header and all non-empty data rows with the expected width.
std::vector<std::vector<std::string>> read_rows(std::istream& in, std::string_view header,
                                                const std::string& name) {
  std::string line;
  if (!std::getline(in, line) || line != header) {
    throw std::invalid_argument(name + ": unexpected header");
  }
  const std::size_t width = split_csv(std::string(header)).size();
  std::vector<std::vector<std::string>> rows;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) {
      continue;
    }
    auto fields = split_csv(line);
    if (fields.size() != width) {
      throw std::invalid_argument(name + " line " + std::to_string(line_no) + ": expected " +
                                  std::to_string(width) + " fields");
    }
    rows.push_back(std::move(fields));
  }
  return rows;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
}

std::string percent(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.0f%%", 100.0 * v);
  return buf;
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

// Comp-vs-comm saving, one curve per margin threshold, each point tagged
// with its goal effectiveness.
std::string tradeoff_plot(const std::vector<RunRecord>& records) {
  std::map<double, std::vector<const RunRecord*>> by_threshold;
  for (const RunRecord& r : records) {
    by_threshold[r.m_th].push_back(&r);
  }
  svg::LineChart chart{"Computation vs communication saving", "communication saving",
                       "computation saving", {}};
  for (auto& [m_th, rows] : by_threshold) {
    std::sort(rows.begin(), rows.end(),
              [](const RunRecord* a, const RunRecord* b) { return a->comm_saving < b->comm_saving; });
    svg::Series s{"m_th = " + fixed(m_th, 2), {}, {}, {}};
    for (const RunRecord* r : rows) {
      s.x.push_back(r->comm_saving);
      s.y.push_back(r->comp_saving);
      s.annotations.push_back(fixed(r->goal_effectiveness, 3));
    }
    chart.series.push_back(std::move(s));
  }
  return chart.render();
}

// Exit selection histograms for the threshold holding the lowest
// communication saving, one bar series per sweep point.
std::string exit_hist_plot(const std::vector<RunRecord>& records, bool offloaded) {
  const auto lowest = std::min_element(
      records.begin(), records.end(),
      [](const RunRecord& a, const RunRecord& b) { return a.comm_saving < b.comm_saving; });
  std::vector<const RunRecord*> rows;
  for (const RunRecord& r : records) {
    if (r.m_th == lowest->m_th) {
      rows.push_back(&r);
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const RunRecord* a, const RunRecord* b) { return a->comm_saving < b->comm_saving; });
  svg::BarChart chart{std::string(offloaded ? "Exit then offload" : "Local exit") +
                          " frequency, m_th = " + fixed(lowest->m_th, 2),
                      "exit", "frequency", {}, {}};
  for (std::size_t k = 0; k < lowest->exit_frequency.size(); ++k) {
    chart.categories.push_back("EE " + std::to_string(k));
  }
  for (const RunRecord* r : rows) {
    svg::BarSeries s{"comm saving " + percent(r->comm_saving), {}};
    for (const auto& f : r->exit_frequency) {
      s.values.push_back(f[offloaded ? 1 : 0]);
    }
    chart.series.push_back(std::move(s));
  }
  return chart.render();
}

void write_plots(const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
  write_file(dir / "tradeoff.svg", tradeoff_plot(records));
  write_file(dir / "exit_hist_offload.svg", exit_hist_plot(records, true));
  write_file(dir / "exit_hist_local.svg", exit_hist_plot(records, false));
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

void write_tradeoff_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kTradeoffHeader << '\n';
  for (const RunRecord& r : records) {
    out << format_double(r.m_th) << ',' << format_double(r.gamma_comm) << ','
        << format_double(r.gamma_comp) << ',' << format_double(r.comp_saving) << ','
        << format_double(r.comm_saving) << ',' << format_double(r.goal_effectiveness) << ','
        << format_double(r.mean_delay_ms) << '\n';
  }
}

void write_exit_hist_csv(std::ostream& out, const std::vector<RunRecord>& records) {
  out << kExitHistHeader << '\n';
  for (const RunRecord& r : records) {
    for (std::size_t k = 0; k < r.exit_frequency.size(); ++k) {
      for (int off = 0; off < 2; ++off) {
        out << format_double(r.m_th) << ',' << format_double(r.gamma_comm) << ',' << k << ','
            << off << ',' << format_double(r.exit_frequency[k][off]) << '\n';
      }
    }
  }
}

std::vector<RunRecord> parse_report(std::istream& tradeoff, std::istream& exit_hist) {
  std::vector<RunRecord> records;
  std::map<std::pair<double, double>, std::size_t> index;
  std::size_t line_no = 1;
  for (const auto& f : read_rows(tradeoff, kTradeoffHeader, "tradeoff.csv")) {
    ++line_no;
    RunRecord r;
    r.m_th = parse_double(f[0], line_no);
    r.gamma_comm = parse_double(f[1], line_no);
    r.gamma_comp = parse_double(f[2], line_no);
    r.comp_saving = parse_double(f[3], line_no);
    r.comm_saving = parse_double(f[4], line_no);
    r.goal_effectiveness = parse_double(f[5], line_no);
    r.mean_delay_ms = parse_double(f[6], line_no);
    if (!index.emplace(std::pair{r.m_th, r.gamma_comm}, records.size()).second) {
      throw std::invalid_argument("tradeoff.csv: duplicate sweep point");
    }
    records.push_back(r);
  }

  line_no = 1;
  for (const auto& f : read_rows(exit_hist, kExitHistHeader, "exit_hist.csv")) {
    ++line_no;
    const auto key = std::pair{parse_double(f[0], line_no), parse_double(f[1], line_no)};
    const auto it = index.find(key);
    if (it == index.end()) {
      throw std::invalid_argument("exit_hist.csv line " + std::to_string(line_no) +
                                  ": sweep point missing from tradeoff.csv");
    }
    const std::size_t k = parse_index(f[2], line_no);
    const std::size_t off = parse_index(f[3], line_no);
    if (off > 1) {
      throw std::invalid_argument("exit_hist.csv line " + std::to_string(line_no) +
                                  ": offloaded must be 0 or 1");
    }
    auto& hist = records[it->second].exit_frequency;
    if (hist.size() <= k) {
      hist.resize(k + 1, {0.0, 0.0});
    }
    hist[k][off] = parse_double(f[4], line_no);
  }
  return records;
}

void emit_report(const std::vector<RunRecord>& records, const std::filesystem::path& dir) {
  if (records.empty()) {
    throw std::invalid_argument("no records to report");
  }
  std::filesystem::create_directories(dir);
  std::ostringstream tradeoff, hist;
  write_tradeoff_csv(tradeoff, records);
  write_exit_hist_csv(hist, records);
  write_file(dir / "tradeoff.csv", tradeoff.str());
  write_file(dir / "exit_hist.csv", hist.str());
  write_plots(records, dir);
}

std::vector<RunRecord> read_report(const std::filesystem::path& dir) {
  std::ifstream tradeoff(dir / "tradeoff.csv");
  std::ifstream hist(dir / "exit_hist.csv");
  if (!tradeoff || !hist) {
    throw std::runtime_error("missing tradeoff.csv or exit_hist.csv in " + dir.string());
  }
  return parse_report(tradeoff, hist);
}

void render_plots(const std::filesystem::path& dir) {
  const auto records = read_report(dir);
  if (records.empty()) {
    throw std::invalid_argument("tradeoff.csv has no data rows");
  }
  write_plots(records, dir);
}

void write_fig2_csv(std::ostream& out, const Fig2Result& result) {
  out << kFig2Header << '\n';
  auto rows = [&](const std::vector<TradeoffPoint>& points) {
    for (const TradeoffPoint& p : points) {
      out << to_string(p.policy.kind) << ','
          << (p.policy.kind == HaltingKind::patience ? std::to_string(p.policy.patience)
                                                     : format_double(p.policy.threshold))
          << ',' << format_double(p.flops_fraction) << ',' << format_double(p.accuracy) << '\n';
    }
  };
  rows(result.recursive_margin);
  rows(result.highest_probability);
  rows(result.patience);
}

void emit_fig2(const Fig2Result& result, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir);
  std::ostringstream csv;
  write_fig2_csv(csv, result);
  write_file(dir / "fig2.csv", csv.str());

  svg::LineChart chart{"Accuracy vs computation", "mean FLOPs fraction", "accuracy", {}};
  for (const auto* points : {&result.recursive_margin, &result.highest_probability, &result.patience}) {
    if (points->empty()) {
      continue;
    }
    auto sorted = *points;
    std::sort(sorted.begin(), sorted.end(), [](const TradeoffPoint& a, const TradeoffPoint& b) {
      return a.flops_fraction < b.flops_fraction;
    });
    svg::Series s{std::string(to_string(sorted.front().policy.kind)), {}, {}, {}};
    for (const TradeoffPoint& p : sorted) {
      s.x.push_back(p.flops_fraction);
      s.y.push_back(p.accuracy);
    }
    chart.series.push_back(std::move(s));
  }
  write_file(dir / "fig2.svg", chart.render());
}

}  // namespace reenet
