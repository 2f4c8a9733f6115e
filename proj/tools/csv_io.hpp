// Copyright 2026 The snakegait Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "config.hpp"
#include "snakegait/analysis.hpp"
#include "snakegait/baseline.hpp"

// Delimited-text persistence. Every file starts with one '# config:' line
// holding the resolved configuration, then a header row.
namespace snakegait::cli {

inline std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const Json& config,
            const std::vector<std::string>& columns)
      : out_(path, std::ios::binary) {
    if (!out_) throw ConfigError("cannot write '" + path.string() + "'");
    out_ << "# config: " << config.dump() << '\n';
    row(columns);
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

inline std::vector<std::string> trajectory_columns(int n_links) {
  std::vector<std::string> c = {"t", "x0", "y0"};
  for (int i = 0; i < n_links; ++i) c.push_back("q" + std::to_string(i));
  c.push_back("vx0");
  c.push_back("vy0");
  for (int i = 0; i < n_links; ++i) c.push_back("qd" + std::to_string(i));
  for (int j = 1; j < n_links; ++j) c.push_back("tau" + std::to_string(j));
  return c;
}

// One row per state; the final state has no control, so its torque cells
// are empty.
inline void write_trajectory(const std::filesystem::path& path, const Json& config,
                             const Trajectory& t) {
  const int n = t.states.front().n_links();
  CsvWriter w(path, config, trajectory_columns(n));
  for (std::size_t k = 0; k < t.states.size(); ++k) {
    std::vector<std::string> cells = {fmt(t.time_at(k))};
    const Eigen::VectorXd x = t.states[k].to_vector();
    for (Eigen::Index i = 0; i < x.size(); ++i) cells.push_back(fmt(x[i]));
    for (int j = 0; j < n - 1; ++j) {
      cells.push_back(k < t.controls.size() ? fmt(t.controls[k].torques[j]) : "");
    }
    w.row(cells);
  }
}

struct LoadedTrajectory {
  Trajectory trajectory;
  std::optional<Json> config;  // embedded provenance, when present
};

inline std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::stringstream ss(line);
  std::string cell;
  while (std::getline(ss, cell, ',')) out.push_back(cell);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline LoadedTrajectory read_trajectory(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read trajectory '" + path.string() + "'");
  LoadedTrajectory out;
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  const std::string tag = "# config: ";
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line.rfind(tag, 0) == 0) {
      try {
        out.config = Json::parse(line.substr(tag.size()));
      } catch (const nlohmann::json::parse_error&) {
        throw ConfigError("malformed config line in '" + path.string() + "'");
      }
      continue;
    }
    if (line[0] == '#') continue;
    if (header.empty()) {
      header = split(line);
      continue;
    }
    std::vector<double> r;
    for (const std::string& c : split(line)) {
      r.push_back(c.empty() ? std::nan("") : std::stod(c));
    }
    rows.push_back(std::move(r));
  }
  int n = 0;
  while (std::find(header.begin(), header.end(), "q" + std::to_string(n)) !=
         header.end()) {
    ++n;
  }
  if (n < 2 || header != trajectory_columns(n) || rows.size() < 2) {
    throw ConfigError("'" + path.string() + "' is not a trajectory file");
  }
  Trajectory& t = out.trajectory;
  t.dt = rows[1][0] - rows[0][0];
  if (out.config && out.config->contains("snake")) {
    t.dt = out.config->at("snake").value("dt", t.dt);
  }
  const int dim = 2 * n + 4;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (static_cast<int>(rows[k].size()) != 1 + dim + n - 1) {
      throw ConfigError("row " + std::to_string(k) + " has the wrong width");
    }
    t.states.push_back(SnakeState::from_vector(
        Eigen::Map<const Eigen::VectorXd>(rows[k].data() + 1, dim)));
    if (k + 1 < rows.size()) {
      t.controls.push_back(
          {Eigen::Map<const Eigen::VectorXd>(rows[k].data() + 1 + dim, n - 1)});
    }
  }
  return out;
}

inline std::vector<std::string> point_columns() {
  return {"speed", "power", "frequency", "amplitude", "phase_offset", "bias",
          "kp", "kd", "alpha", "beta", "goal_x", "goal_y", "label"};
}

inline std::vector<std::string> point_row(const ParetoPoint& p) {
  std::vector<std::string> r = {fmt(p.speed), fmt(p.power)};
  if (const auto* g = std::get_if<SerpenoidParams>(&p.params)) {
    for (double v : {g->frequency, g->amplitude, g->phase_offset, g->bias, g->kp, g->kd}) {
      r.push_back(fmt(v));
    }
    for (int i = 0; i < 4; ++i) r.emplace_back();
  } else {
    const auto& m = std::get<MpcCostParams>(p.params);
    for (int i = 0; i < 6; ++i) r.emplace_back();
    for (double v : {m.alpha, m.beta, m.goal.x(), m.goal.y()}) r.push_back(fmt(v));
  }
  r.push_back(p.label);
  return r;
}

inline void write_points(const std::filesystem::path& path, const Json& config,
                         const std::vector<ParetoPoint>& points) {
  CsvWriter w(path, config, point_columns());
  for (const ParetoPoint& p : points) w.row(point_row(p));
}

inline void write_metrics(const std::filesystem::path& path, const Json& config,
                          const std::string& label, const GaitMetrics& m) {
  CsvWriter w(path, config, {"label", "speed", "power", "window_start", "window_end"});
  w.row({label, fmt(m.mean_speed), fmt(m.mean_power), fmt(m.window_start),
         fmt(m.window_end)});
}

inline void write_spectrum(const std::filesystem::path& path, const Json& config,
                           const JointSpectrum& s) {
  CsvWriter w(path, config, {"joint", "frequency", "amplitude"});
  for (std::size_t j = 0; j < s.dominant_frequency.size(); ++j) {
    w.row({std::to_string(j + 1), fmt(s.dominant_frequency[j]),
           fmt(s.dominant_amplitude[j])});
  }
}

}  // namespace snakegait::cli
