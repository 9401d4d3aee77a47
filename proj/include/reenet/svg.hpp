// Copyright (C) 2026 The reenet Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <string>
#include <vector>

namespace reenet::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::vector<std::string> annotations;  // optional text next to each point
};

struct LineChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;

  [[nodiscard]] std::string render() const;
};

struct BarSeries {
  std::string label;
  std::vector<double> values;  // one per category
};

/// Bars of every series side by side within each category.
struct BarChart {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<std::string> categories;
  std::vector<BarSeries> series;

  [[nodiscard]] std::string render() const;
};

}  // namespace reenet::svg
