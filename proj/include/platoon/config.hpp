/******************************************************************************
 * Copyright 2026 The Platoon Authors. All Rights Reserved.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *****************************************************************************/

#pragma once

// Flat sectioned key-value configuration:
//
//   # comment
//   [topology]
//   kind = PF, BD
//   n = 9
//
// Keys are stored as `section.key`. Only keys listed in known_config_keys()
// are accepted; angles are given in degrees.

#include <filesystem>
#include <istream>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "platoon/control.hpp"
#include "platoon/simulation.hpp"
#include "platoon/topology.hpp"

namespace platoon {

const std::vector<std::string>& known_config_keys();

class Config {
 public:
  static Config load(const std::filesystem::path& path);
  static Config parse(std::istream& in, const std::string& origin = "<input>");

  /// Throws InvalidArgument for unknown keys.
  void set(const std::string& key, const std::string& value);
  /// `key=value`, applied after the file.
  void apply_override(std::string_view assignment);

  bool has(const std::string& key) const;
  std::string string_or(const std::string& key, const std::string& fallback) const;
  double number_or(const std::string& key, double fallback) const;
  int integer_or(const std::string& key, int fallback) const;
  bool boolean_or(const std::string& key, bool fallback) const;
  /// Comma-separated list; empty when the key is absent.
  std::vector<std::string> list(const std::string& key) const;

  const std::map<std::string, std::string>& entries() const { return entries_; }

 private:
  std::map<std::string, std::string> entries_;
};

/// topology.kind as a list; kCustom means "read topology.file".
std::vector<TopologyKind> topology_kinds(const Config& config);
Topology topology_from_config(const Config& config, TopologyKind kind);
/// gains.preset (theorem | corollary | custom) gives the base values, any
/// gains.kappa_* key overrides them.
GainVector gains_from_config(const Config& config, TopologyKind kind);
VehicleParams vehicle_from_config(const Config& config);
SimConfig sim_config_from_config(const Config& config, TopologyKind kind);

struct MetricsOptions {
  double settle_window = 20.0;
  double settle_band = 0.02;
};
MetricsOptions metrics_options(const Config& config);

struct SweepAxis {
  std::string gain;  // kappa_s | kappa_p | kappa_v | kappa_a
  double lo = 0.0;
  double hi = 0.0;
  int points = 0;

  double value(int k) const;
};
/// sweep.x_* and, when sweep.y is set, sweep.y_*.
std::vector<SweepAxis> sweep_axes(const Config& config);
void set_gain(GainVector& gains, const std::string& name, double value);

}  // namespace platoon
