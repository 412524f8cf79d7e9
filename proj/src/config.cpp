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

#include "platoon/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>

#include <fmt/format.h>

#include "platoon/errors.hpp"

namespace platoon {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

double parse_number(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end || !std::isfinite(value)) {
    throw InvalidArgument(
        fmt::format("'{}' expects a finite number, got '{}'", key, text));
  }
  return value;
}

bool is_gain_name(const std::string& name) {
  return name == "kappa_s" || name == "kappa_p" || name == "kappa_v" ||
         name == "kappa_a";
}

}  // namespace

const std::vector<std::string>& known_config_keys() {
  static const std::vector<std::string> keys = {
      "topology.kind", "topology.n", "topology.range", "topology.file",
      "gains.preset", "gains.kappa_s", "gains.kappa_p", "gains.kappa_v",
      "gains.kappa_a",
      "vehicle.mass", "vehicle.driveline_efficiency", "vehicle.tire_radius",
      "vehicle.air_density", "vehicle.drag_coefficient", "vehicle.gravity",
      "vehicle.rolling_resistance", "vehicle.powertrain_tau", "vehicle.length",
      "mismatch.enabled", "mismatch.drag_coefficient",
      "mismatch.rolling_resistance", "mismatch.powertrain_tau",
      "policy.gap",
      "schedule.pulse.enabled", "schedule.pulse.magnitude",
      "schedule.pulse.t_start", "schedule.pulse.t_end",
      "schedule.slope.enabled", "schedule.slope.angle_deg",
      "schedule.slope.trigger_position", "schedule.slope.per_vehicle",
      "schedule.wind.enabled", "schedule.wind.speed", "schedule.wind.t_start",
      "schedule.bias",
      "sim.plant", "sim.dt", "sim.t_final", "sim.initial_speed",
      "sim.initial_gap_offsets", "sim.controller_measures_env",
      "sim.allow_uncertified", "sim.output_stride", "sim.drag_term",
      "metrics.settle_window", "metrics.settle_band",
      "sweep.x", "sweep.x_min", "sweep.x_max", "sweep.x_points",
      "sweep.y", "sweep.y_min", "sweep.y_max", "sweep.y_points",
  };
  return keys;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw InvalidArgument(fmt::format("cannot open config '{}'", path.string()));
  }
  return parse(in, path.string());
}

Config Config::parse(std::istream& in, const std::string& origin) {
  Config cfg;
  std::string section;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    const std::string text = trim(std::string_view(line).substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') {
        throw InvalidArgument(
            fmt::format("{}:{}: unterminated section header", origin, number));
      }
      section = trim(std::string_view(text).substr(1, text.size() - 2));
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) {
      throw InvalidArgument(
          fmt::format("{}:{}: expected 'key = value'", origin, number));
    }
    const std::string key = trim(std::string_view(text).substr(0, eq));
    const std::string full = section.empty() ? key : section + "." + key;
    try {
      cfg.set(full, trim(std::string_view(text).substr(eq + 1)));
    } catch (const InvalidArgument& e) {
      throw InvalidArgument(fmt::format("{}:{}: {}", origin, number, e.what()));
    }
  }
  return cfg;
}

void Config::set(const std::string& key, const std::string& value) {
  const auto& keys = known_config_keys();
  if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
    throw InvalidArgument(fmt::format("unknown config key '{}'", key));
  }
  entries_[key] = value;
}

void Config::apply_override(std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw InvalidArgument(
        fmt::format("override '{}' is not key=value", assignment));
  }
  set(trim(assignment.substr(0, eq)), trim(assignment.substr(eq + 1)));
}

bool Config::has(const std::string& key) const {
  return entries_.count(key) != 0;
}

std::string Config::string_or(const std::string& key,
                              const std::string& fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : it->second;
}

double Config::number_or(const std::string& key, double fallback) const {
  const auto it = entries_.find(key);
  return it == entries_.end() ? fallback : parse_number(key, it->second);
}

int Config::integer_or(const std::string& key, int fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  int value = 0;
  const auto& text = it->second;
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw InvalidArgument(
        fmt::format("'{}' expects an integer, got '{}'", key, text));
  }
  return value;
}

bool Config::boolean_or(const std::string& key, bool fallback) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) return fallback;
  const std::string v = lower(it->second);
  if (v == "true" || v == "yes" || v == "on" || v == "1") return true;
  if (v == "false" || v == "no" || v == "off" || v == "0") return false;
  throw InvalidArgument(
      fmt::format("'{}' expects a boolean, got '{}'", key, it->second));
}

std::vector<std::string> Config::list(const std::string& key) const {
  std::vector<std::string> out;
  const auto it = entries_.find(key);
  if (it == entries_.end()) return out;
  std::string_view rest = it->second;
  while (true) {
    const auto comma = rest.find(',');
    std::string item = trim(rest.substr(0, comma));
    if (!item.empty()) out.push_back(std::move(item));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return out;
}

std::vector<TopologyKind> topology_kinds(const Config& config) {
  std::vector<TopologyKind> kinds;
  for (const auto& label : config.list("topology.kind")) {
    kinds.push_back(parse_topology_kind(label));
  }
  if (kinds.empty()) kinds.push_back(TopologyKind::kPF);
  return kinds;
}

Topology topology_from_config(const Config& config, TopologyKind kind) {
  if (kind == TopologyKind::kCustom) {
    const std::string path = config.string_or("topology.file", "");
    if (path.empty()) {
      throw InvalidArgument("topology.kind = custom needs topology.file");
    }
    std::ifstream in(path);
    if (!in) throw InvalidArgument(fmt::format("cannot open topology '{}'", path));
    return read_topology(in);
  }
  const int n = config.integer_or("topology.n", 9);
  const int range = config.has("topology.range")
                        ? config.integer_or("topology.range", 1)
                        : std::min(reference_range(kind), std::max(n, 1));
  return build_named(kind, n, range);
}

GainVector gains_from_config(const Config& config, TopologyKind kind) {
  const std::string preset = lower(config.string_or("gains.preset", "theorem"));
  GainVector g;
  if (preset == "theorem" || preset == "corollary") {
    if (kind == TopologyKind::kCustom) {
      throw InvalidArgument(
          "gain presets are tabulated for named topologies only; use "
          "gains.preset = custom");
    }
    g = reference_gains(kind, preset == "theorem" ? GainColumn::kTheorem
                                                  : GainColumn::kCorollary);
  } else if (preset != "custom") {
    throw InvalidArgument(fmt::format(
        "gains.preset must be theorem, corollary or custom, got '{}'", preset));
  }
  g.kappa_s = config.number_or("gains.kappa_s", g.kappa_s);
  g.kappa_p = config.number_or("gains.kappa_p", g.kappa_p);
  g.kappa_v = config.number_or("gains.kappa_v", g.kappa_v);
  g.kappa_a = config.number_or("gains.kappa_a", g.kappa_a);
  return g;
}

VehicleParams vehicle_from_config(const Config& config) {
  VehicleParams p;
  p.mass = config.number_or("vehicle.mass", p.mass);
  p.driveline_efficiency =
      config.number_or("vehicle.driveline_efficiency", p.driveline_efficiency);
  p.tire_radius = config.number_or("vehicle.tire_radius", p.tire_radius);
  p.air_density = config.number_or("vehicle.air_density", p.air_density);
  p.drag_coefficient =
      config.number_or("vehicle.drag_coefficient", p.drag_coefficient);
  p.gravity = config.number_or("vehicle.gravity", p.gravity);
  p.rolling_resistance =
      config.number_or("vehicle.rolling_resistance", p.rolling_resistance);
  p.powertrain_tau = config.number_or("vehicle.powertrain_tau", p.powertrain_tau);
  p.length = config.number_or("vehicle.length", p.length);
  p.validate();
  return p;
}

SimConfig sim_config_from_config(const Config& config, TopologyKind kind) {
  SimConfig sim;
  sim.topology = topology_from_config(config, kind);
  sim.gains = gains_from_config(config, kind);
  sim.plant_params = vehicle_from_config(config);
  sim.controller_params = sim.plant_params;
  if (config.boolean_or("mismatch.enabled", true)) {
    ParamMismatch m;
    m.drag_coefficient =
        config.number_or("mismatch.drag_coefficient", m.drag_coefficient);
    m.rolling_resistance =
        config.number_or("mismatch.rolling_resistance", m.rolling_resistance);
    m.powertrain_tau = config.number_or("mismatch.powertrain_tau", m.powertrain_tau);
    sim.controller_params = apply_mismatch(sim.plant_params, m);
  }
  sim.policy.gap = config.number_or("policy.gap", sim.policy.gap);
  sim.policy.vehicle_length = sim.plant_params.length;

  auto& s = sim.schedule;
  auto& pulse = s.leader_accel_pulse;
  pulse.enabled = config.boolean_or("schedule.pulse.enabled", pulse.enabled);
  pulse.magnitude = config.number_or("schedule.pulse.magnitude", pulse.magnitude);
  pulse.t_start = config.number_or("schedule.pulse.t_start", pulse.t_start);
  pulse.t_end = config.number_or("schedule.pulse.t_end", pulse.t_end);
  auto& slope = s.slope_step;
  slope.enabled = config.boolean_or("schedule.slope.enabled", slope.enabled);
  slope.angle = config.number_or("schedule.slope.angle_deg",
                                 slope.angle * 180.0 / std::numbers::pi) *
                std::numbers::pi / 180.0;
  slope.trigger_position =
      config.number_or("schedule.slope.trigger_position", slope.trigger_position);
  slope.per_vehicle = config.boolean_or("schedule.slope.per_vehicle", slope.per_vehicle);
  auto& wind = s.wind_step;
  wind.enabled = config.boolean_or("schedule.wind.enabled", wind.enabled);
  wind.speed = config.number_or("schedule.wind.speed", wind.speed);
  wind.t_start = config.number_or("schedule.wind.t_start", wind.t_start);
  // follower:magnitude:t_start, comma separated
  for (const auto& item : config.list("schedule.bias")) {
    const auto a = item.find(':');
    const auto b = item.find(':', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw InvalidArgument(fmt::format(
          "schedule.bias entries are follower:magnitude:t_start, got '{}'", item));
    }
    InputBiasStep step;
    const double follower = parse_number("schedule.bias", trim(item.substr(0, a)));
    if (follower != std::floor(follower)) {
      throw InvalidArgument("schedule.bias follower must be an integer");
    }
    step.follower = static_cast<int>(follower);
    step.magnitude = parse_number("schedule.bias", trim(item.substr(a + 1, b - a - 1)));
    step.t_start = parse_number("schedule.bias", trim(item.substr(b + 1)));
    s.input_bias_steps.push_back(step);
  }

  const std::string plant = lower(config.string_or("sim.plant", "nonlinear"));
  if (plant == "nonlinear") {
    sim.plant_mode = PlantMode::kNonlinear;
  } else if (plant == "linear") {
    sim.plant_mode = PlantMode::kLinear;
  } else {
    throw InvalidArgument(
        fmt::format("sim.plant must be nonlinear or linear, got '{}'", plant));
  }
  const std::string drag = lower(config.string_or("sim.drag_term", "derived"));
  if (drag == "derived") {
    sim.drag_term = DragRateTerm::kDerived;
  } else if (drag == "as_printed") {
    sim.drag_term = DragRateTerm::kAsPrinted;
  } else {
    throw InvalidArgument(fmt::format(
        "sim.drag_term must be derived or as_printed, got '{}'", drag));
  }
  sim.dt = config.number_or("sim.dt", sim.dt);
  sim.t_final = config.number_or("sim.t_final", sim.t_final);
  sim.initial_speed = config.number_or("sim.initial_speed", sim.initial_speed);
  for (const auto& item : config.list("sim.initial_gap_offsets")) {
    sim.initial_gap_offsets.push_back(
        parse_number("sim.initial_gap_offsets", item));
  }
  sim.controller_measures_env =
      config.boolean_or("sim.controller_measures_env", sim.controller_measures_env);
  sim.allow_uncertified =
      config.boolean_or("sim.allow_uncertified", sim.allow_uncertified);
  sim.output_stride = config.integer_or("sim.output_stride", sim.output_stride);
  sim.validate();
  return sim;
}

MetricsOptions metrics_options(const Config& config) {
  MetricsOptions m;
  m.settle_window = config.number_or("metrics.settle_window", m.settle_window);
  m.settle_band = config.number_or("metrics.settle_band", m.settle_band);
  if (!(m.settle_window > 0.0) || !(m.settle_band > 0.0)) {
    throw InvalidArgument("metrics window and band must be > 0");
  }
  return m;
}

double SweepAxis::value(int k) const {
  if (points == 1) return lo;
  return lo + (hi - lo) * static_cast<double>(k) / static_cast<double>(points - 1);
}

std::vector<SweepAxis> sweep_axes(const Config& config) {
  std::vector<SweepAxis> axes;
  for (const char* axis : {"x", "y"}) {
    const std::string prefix = std::string("sweep.") + axis;
    if (!config.has(prefix)) {
      if (std::string(axis) == "x") {
        throw InvalidArgument("sweep needs sweep.x (a gain name)");
      }
      break;
    }
    SweepAxis a;
    a.gain = config.string_or(prefix, "");
    if (!is_gain_name(a.gain)) {
      throw InvalidArgument(fmt::format(
          "{} must name a gain (kappa_s/p/v/a), got '{}'", prefix, a.gain));
    }
    a.lo = config.number_or(prefix + "_min", 0.0);
    a.hi = config.number_or(prefix + "_max", 0.0);
    a.points = config.integer_or(prefix + "_points", 0);
    if (a.points < 1) throw InvalidArgument(prefix + "_points must be >= 1 (empty grid)");
    if (a.points > 1 && !(a.hi > a.lo)) {
      throw InvalidArgument(prefix + "_max must exceed " + prefix + "_min");
    }
    axes.push_back(a);
  }
  if (axes.size() == 2 && axes[0].gain == axes[1].gain) {
    throw InvalidArgument("sweep.x and sweep.y must name different gains");
  }
  return axes;
}

void set_gain(GainVector& gains, const std::string& name, double value) {
  if (name == "kappa_s") {
    gains.kappa_s = value;
  } else if (name == "kappa_p") {
    gains.kappa_p = value;
  } else if (name == "kappa_v") {
    gains.kappa_v = value;
  } else if (name == "kappa_a") {
    gains.kappa_a = value;
  } else {
    throw InvalidArgument(fmt::format("unknown gain '{}'", name));
  }
}

}  // namespace platoon
