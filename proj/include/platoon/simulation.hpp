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

// Closed-loop platoon runs: nonlinear (or linear) follower plants behind a
// feedback-linearizing torque law, a lag-driven leader, and a schedule of
// step disturbances. Also the per-epoch metrics computed from a run.

#include <numbers>
#include <ostream>
#include <string>
#include <vector>

#include "platoon/control.hpp"
#include "platoon/dynamics.hpp"
#include "platoon/topology.hpp"

namespace platoon {

struct AccelPulse {
  double magnitude = 1.0;  // m/s^2, leader input
  double t_start = 30.0;
  double t_end = 35.0;
  bool enabled = true;
};

struct SlopeStep {
  double angle = 10.0 * std::numbers::pi / 180.0;  // rad
  double trigger_position = 1680.0;                 // m
  /// Each vehicle sees the slope once its own front bumper passes the
  /// trigger; otherwise every follower gets it when the leader does.
  bool per_vehicle = true;
  bool enabled = true;
};

struct WindStep {
  double speed = 20.0;  // m/s, positive is a headwind
  double t_start = 150.0;
  bool enabled = true;
};

struct InputBiasStep {
  int follower = 1;        // 1-based
  double magnitude = 0.0;  // m/s^2
  double t_start = 0.0;
};

struct DisturbanceSchedule {
  AccelPulse leader_accel_pulse;
  SlopeStep slope_step;
  WindStep wind_step;
  std::vector<InputBiasStep> input_bias_steps;

  void validate(int n_followers) const;
  /// Schedule with every disturbance switched off.
  static DisturbanceSchedule quiet();
};

enum class PlantMode {
  kNonlinear,  // force balance + torque lag, integrated state (p, v, T)
  kLinear,     // tau da/dt = u - a, integrated state (p, v, a)
};

struct SimConfig {
  Topology topology = build_named(TopologyKind::kPF, 9);
  GainVector gains = reference_gains(TopologyKind::kPF, GainColumn::kTheorem);
  VehicleParams plant_params;
  VehicleParams controller_params;
  SpacingPolicy policy;
  DisturbanceSchedule schedule;
  /// Extra initial gap per follower (m); empty means perfect formation.
  std::vector<double> initial_gap_offsets;
  double initial_speed = 15.0;  // m/s, leader and followers
  double dt = 0.01;
  double t_final = 250.0;
  PlantMode plant_mode = PlantMode::kNonlinear;
  DragRateTerm drag_term = DragRateTerm::kDerived;
  /// Feed the true slope and wind to the linearizing torque law.
  bool controller_measures_env = false;
  /// Run even when the gains fail the stability certificate.
  bool allow_uncertified = false;
  /// Keep every k-th step of the time grid.
  int output_stride = 1;

  void validate() const;
};

struct VehicleSeries {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> acceleration;
  std::vector<double> input;   // u (leader: scheduled u_0)
  std::vector<double> torque;  // zero for the leader and in linear mode
};

struct Trajectory {
  std::vector<double> times;
  /// Index 0 is the leader.
  std::vector<VehicleSeries> vehicles;
  /// spacing_errors[i-1][k] = p_{i-1} - p_i - (gap + length) at times[k]:
  /// actual minus desired gap, negative when too close.
  std::vector<std::vector<double>> spacing_errors;
  /// Time each follower met the slope (NaN if it never did).
  std::vector<double> slope_times;
  /// Start times of the disturbance epochs; the first is 0.
  std::vector<double> epoch_starts;
  double gap = 10.0;

  int n_followers() const { return static_cast<int>(spacing_errors.size()); }
};

/// RK4 with the control law evaluated at every stage. Steps are split at
/// scheduled switching times and at slope crossings (located by bisection),
/// so the integrated right-hand side is smooth on every substep. Throws
/// InvalidArgument on a bad config or uncertified gains, NumericalFailure
/// when a state leaves [-1e9, 1e9].
Trajectory run(const SimConfig& config);

struct EpochMetrics {
  double t_start = 0.0;
  double t_end = 0.0;
  /// Per follower.
  std::vector<double> steady_state_error;  // mean over the final window
  std::vector<double> window_max_abs_error;  // max |e| over the final window
  std::vector<double> max_abs_error;
  std::vector<double> min_spacing_error;
  /// Time after t_start at which |e| last leaves the band; NaN when |e| is
  /// still outside the band at t_end.
  std::vector<double> settling_time;
};

struct Metrics {
  std::vector<EpochMetrics> epochs;
  /// Whole-run figures per follower; steady_state_error is the last epoch's.
  std::vector<double> steady_state_error;
  std::vector<double> max_abs_error;
  std::vector<double> min_spacing_error;
  bool collision = false;  // some spacing error <= -gap
};

/// Throws InvalidArgument when the trajectory is empty or settle_window is
/// not shorter than every epoch.
Metrics compute_metrics(const Trajectory& trajectory, double settle_window = 20.0,
                        double settle_band = 0.02);

/// One vehicle behind a static reference, linear lag plant, constant input
/// disturbance kappa_psi from t = 0. Returns the mean spacing error over the
/// last 10% of the run. Throws NumericalFailure if the loop is not stable.
double siso_disturbance_run(const GainVector& gains, double tau,
                            double kappa_psi, double t_final,
                            double dt = 1e-3);

/// `t,veh,p,v,a,u,e_spacing`, one row per sample and vehicle, 17 significant
/// digits. The leader row carries e_spacing = 0.
void write_trajectory_csv(std::ostream& out, const Trajectory& trajectory);

/// One row per follower per epoch.
void write_metrics_csv(std::ostream& out, const Metrics& metrics);

/// Self-contained matplotlib script: one spacing-error pane per CSV.
void write_plot_script(std::ostream& out,
                       const std::vector<std::string>& csv_files,
                       const std::vector<std::string>& titles,
                       const std::string& image_file);

}  // namespace platoon
