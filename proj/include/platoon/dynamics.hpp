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

/**
 * @file dynamics.hpp
 * @brief Longitudinal vehicle model: nonlinear force balance, first-order
 * powertrain lag, feedback-linearizing torque law and the linear integrator
 * chains obtained after cancellation.
 *
 * Sign conventions: positive slope is uphill, positive wind is a headwind
 * (it adds to the air-relative speed v + v_w).
 */

#include <Eigen/Dense>

namespace platoon {

/// Physical constants of one vehicle. Defaults are the mid-size sedan used
/// throughout the examples and tests.
struct VehicleParams {
  double mass = 1613.0;               // kg
  double driveline_efficiency = 1.0;  // (0, 1]
  double tire_radius = 0.34;          // m
  double air_density = 1.225;         // kg/m^3
  double drag_coefficient = 0.62;
  double gravity = 9.8;               // m/s^2
  double rolling_resistance = 0.01;
  double powertrain_tau = 0.15;       // s
  double length = 0.0;                // m

  /// Throws InvalidArgument unless every field is finite and strictly
  /// positive (length and rolling_resistance may be zero, efficiency <= 1).
  void validate() const;
};

/// Multiplicative errors in the controller's copy of the parameters.
struct ParamMismatch {
  double drag_coefficient = 1.10;
  double rolling_resistance = 1.20;
  double powertrain_tau = 0.90;
};

VehicleParams apply_mismatch(const VehicleParams& params,
                             const ParamMismatch& mismatch);

struct VehicleState {
  double position = 0.0;      // m
  double velocity = 0.0;      // m/s
  double acceleration = 0.0;  // m/s^2, algebraic in the nonlinear plant
  double torque = 0.0;        // N m
  double error_integral = 0.0;
};

struct EnvSample {
  double slope = 0.0;       // rad
  double slope_rate = 0.0;  // rad/s
  double wind = 0.0;        // m/s
  double wind_rate = 0.0;   // m/s^2
  double input_bias = 0.0;  // m/s^2, added to the desired acceleration
};

struct StateDerivative {
  double position = 0.0;
  double velocity = 0.0;
  double acceleration = 0.0;
  double torque = 0.0;
};

/// Sign function with sgn(0) = 0.
double sgn(double x);

/// Drag + grade + rolling resistance in newtons at ground speed `velocity`.
double resistive_force(double velocity, const EnvSample& env,
                       const VehicleParams& params);

/// Acceleration implied by the force balance for the given torque.
double nonlinear_acceleration(double velocity, double torque,
                              const EnvSample& env,
                              const VehicleParams& params);

/// Torque that holds `velocity` with zero acceleration.
double equilibrium_torque(double velocity, const EnvSample& env,
                          const VehicleParams& params);

/// Time derivative of the plant. The integrated plant state is (p, v, T);
/// state.acceleration is ignored on input and recomputed from (v, T, env).
/// The returned acceleration slot is da/dt along the model chain. The input
/// bias enters through the torque command, i.e. it is lagged like u.
StateDerivative nonlinear_derivative(const VehicleState& state,
                                     double commanded_torque,
                                     const EnvSample& env,
                                     const VehicleParams& params);

/// Which factor multiplies the air-speed rate in the drag part of the
/// linearizing torque. kDerived is 2|v̄| (what differentiating the drag force
/// gives); kAsPrinted is |v̄| + 2 sgn(v̄), kept for comparison.
enum class DragRateTerm { kDerived, kAsPrinted };

/// Desired torque that makes the lag chain behave as tau * da/dt = u - a.
/// `params_hat` is the controller's belief of the vehicle and may differ from
/// the plant's parameters. Uses state.velocity and state.acceleration.
double feedback_linearize(double u_desired, const VehicleState& state,
                          const EnvSample& env, const VehicleParams& params_hat,
                          DragRateTerm drag_term = DragRateTerm::kDerived);

/// Integrator chain x' = A x + B u. Order 3 is (p, v, a); order 4 prepends the
/// integral state s.
struct LinearModel {
  int order = 3;
  Eigen::MatrixXd A;
  Eigen::VectorXd B;
};

LinearModel linear_model(int order, double powertrain_tau);
LinearModel linear_model(int order, const VehicleParams& params);

/// Rank of [B, AB, ..., A^{n-1}B].
int controllability_rank(const LinearModel& model);

}  // namespace platoon
