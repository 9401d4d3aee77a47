// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "reenet/policy.hpp"

namespace reenet {
namespace {

constexpr std::string_view kHeader = "# reenet q-table v1";

std::string format_value(double v) {
  if (std::isinf(v)) {
    return v < 0 ? "-inf" : "inf";
  }
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, sep)) {
    out.push_back(field);
  }
  return out;
}

std::size_t parse_size(const std::string& s) {
  std::size_t v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad integer \"" + s + "\" in q-table");
  }
  return v;
}

double parse_value(const std::string& s) {
  if (s == "-inf") {
    return kUnavailable;
  }
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument("bad value \"" + s + "\" in q-table");
  }
  return v;
}

ActionKind parse_action(const std::string& s) {
  for (std::size_t a = 0; a < kNumActions; ++a) {
    if (to_string(static_cast<ActionKind>(a)) == s) {
      return static_cast<ActionKind>(a);
    }
  }
  throw std::invalid_argument("unknown action \"" + s + "\" in q-table");
}

}  // namespace

void write_qtable(std::ostream& out, const QTable& table) {
  out << kHeader << '\n';
  out << "exits=" << table.num_exits() << ",mcs=" << table.num_mcs() << '\n';
  out << "k,mcs,action,value\n";
  for (std::size_t k = 0; k < table.num_exits(); ++k) {
    for (std::size_t m = 0; m < table.num_mcs(); ++m) {
      for (std::size_t a = 0; a < kNumActions; ++a) {
        const auto action = static_cast<ActionKind>(a);
        out << k << ',' << m << ',' << to_string(action) << ','
            << format_value(table.value({k, m}, action)) << '\n';
      }
    }
  }
}

QTable read_qtable(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kHeader) {
    throw std::invalid_argument("missing q-table version header");
  }
  if (!std::getline(in, line)) {
    throw std::invalid_argument("missing q-table shape line");
  }
  const auto shape = split(line, ',');
  if (shape.size() != 2 || shape[0].rfind("exits=", 0) != 0 || shape[1].rfind("mcs=", 0) != 0) {
    throw std::invalid_argument("malformed q-table shape line");
  }
  QTable table(parse_size(shape[0].substr(6)), parse_size(shape[1].substr(4)));
  if (!std::getline(in, line) || line != "k,mcs,action,value") {
    throw std::invalid_argument("missing q-table column header");
  }
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (line.empty()) {
      continue;
    }
    const auto f = split(line, ',');
    if (f.size() != 4) {
      throw std::invalid_argument("q-table row needs 4 fields: " + line);
    }
    const MdpState s{parse_size(f[0]), parse_size(f[1])};
    const ActionKind a = parse_action(f[2]);
    const double v = parse_value(f[3]);
    if (table.available(s, a)) {
      table.set_value(s, a, v);
    } else if (v != kUnavailable) {
      throw std::invalid_argument("q-table assigns a value to an unavailable action");
    }
    ++rows;
  }
  if (rows != table.num_states() * kNumActions) {
    throw std::invalid_argument("q-table row count does not match its shape");
  }
  return table;
}

}  // namespace reenet
