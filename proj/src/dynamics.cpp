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

#include "platoon/dynamics.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "platoon/errors.hpp"

namespace platoon {
namespace {

void require_finite(double x, const char* what) {
  if (!std::isfinite(x)) {
    throw InvalidArgument(std::string("non-finite ") + what);
  }
}

void check_env(const EnvSample& env) {
  require_finite(env.slope, "slope");
  require_finite(env.slope_rate, "slope rate");
  require_finite(env.wind, "wind");
  require_finite(env.wind_rate, "wind rate");
  require_finite(env.input_bias, "input bias");
  if (std::abs(env.slope) >= std::numbers::pi / 2.0) {
    throw InvalidArgument("road slope must satisfy |theta| < pi/2");
  }
}

}  // namespace

void VehicleParams::validate() const {
  auto positive = [](double x, const char* name) {
    if (!std::isfinite(x) || x <= 0.0) {
      throw InvalidArgument(std::string("vehicle parameter '") + name +
                            "' must be finite and > 0");
    }
  };
  positive(mass, "mass");
  positive(driveline_efficiency, "driveline_efficiency");
  positive(tire_radius, "tire_radius");
  positive(air_density, "air_density");
  positive(drag_coefficient, "drag_coefficient");
  positive(gravity, "gravity");
  positive(powertrain_tau, "powertrain_tau");
  if (driveline_efficiency > 1.0) {
    throw InvalidArgument("driveline_efficiency must be <= 1");
  }
  if (!std::isfinite(rolling_resistance) || rolling_resistance < 0.0) {
    throw InvalidArgument("rolling_resistance must be finite and >= 0");
  }
  if (!std::isfinite(length) || length < 0.0) {
    throw InvalidArgument("length must be finite and >= 0");
  }
}

VehicleParams apply_mismatch(const VehicleParams& params,
                             const ParamMismatch& mismatch) {
  VehicleParams out = params;
  out.drag_coefficient *= mismatch.drag_coefficient;
  out.rolling_resistance *= mismatch.rolling_resistance;
  out.powertrain_tau *= mismatch.powertrain_tau;
  out.validate();
  return out;
}

double sgn(double x) { return static_cast<double>((x > 0.0) - (x < 0.0)); }

double resistive_force(double velocity, const EnvSample& env,
                       const VehicleParams& p) {
  const double air = velocity + env.wind;
  const double weight = p.mass * p.gravity;
  return 0.5 * p.air_density * p.drag_coefficient * air * std::abs(air) +
         weight * std::sin(env.slope) +
         weight * p.rolling_resistance * std::cos(env.slope) * sgn(air);
}

double nonlinear_acceleration(double velocity, double torque,
                              const EnvSample& env, const VehicleParams& p) {
  const double drive = p.driveline_efficiency / p.tire_radius * torque;
  return (drive - resistive_force(velocity, env, p)) / p.mass;
}

double equilibrium_torque(double velocity, const EnvSample& env,
                          const VehicleParams& p) {
  return p.tire_radius / p.driveline_efficiency *
         resistive_force(velocity, env, p);
}

StateDerivative nonlinear_derivative(const VehicleState& state,
                                     double commanded_torque,
                                     const EnvSample& env,
                                     const VehicleParams& p) {
  require_finite(state.position, "position");
  require_finite(state.velocity, "velocity");
  require_finite(state.torque, "torque");
  require_finite(commanded_torque, "commanded torque");
  check_env(env);

  const double accel = nonlinear_acceleration(state.velocity, state.torque,
                                              env, p);
  const double bias_torque =
      p.tire_radius / p.driveline_efficiency * p.mass * env.input_bias;
  const double torque_rate =
      (commanded_torque + bias_torque - state.torque) / p.powertrain_tau;

  const double air = state.velocity + env.wind;
  const double air_rate = accel + env.wind_rate;
  const double weight = p.mass * p.gravity;
  // d/dt of the force balance; the sgn term is piecewise constant.
  const double jerk =
      (p.driveline_efficiency / p.tire_radius * torque_rate -
       p.air_density * p.drag_coefficient * std::abs(air) * air_rate -
       weight * std::cos(env.slope) * env.slope_rate +
       weight * p.rolling_resistance * std::sin(env.slope) * env.slope_rate *
           sgn(air)) /
      p.mass;

  return StateDerivative{state.velocity, accel, jerk, torque_rate};
}

double feedback_linearize(double u_desired, const VehicleState& state,
                          const EnvSample& env, const VehicleParams& p,
                          DragRateTerm drag_term) {
  check_env(env);
  const double tau = p.powertrain_tau;
  const double air = state.velocity + env.wind;
  const double air_rate = state.acceleration + env.wind_rate;
  const double rate_factor = drag_term == DragRateTerm::kDerived
                                 ? 2.0 * std::abs(air)
                                 : std::abs(air) + 2.0 * sgn(air);
  const double weight = p.mass * p.gravity;
  const double c = std::cos(env.slope);
  const double s = std::sin(env.slope);

  const double force =
      0.5 * p.air_density * p.drag_coefficient *
          (air * std::abs(air) + tau * air_rate * rate_factor) +
      weight * p.rolling_resistance * (c - s * env.slope_rate * tau) *
          sgn(air) +
      weight * (c * env.slope_rate * tau + s) + p.mass * u_desired;
  const double torque = p.tire_radius / p.driveline_efficiency * force;
  if (!std::isfinite(torque)) {
    throw NumericalFailure("feedback linearization produced a non-finite "
                           "torque");
  }
  return torque;
}

LinearModel linear_model(int order, double powertrain_tau) {
  if (order != 3 && order != 4) {
    throw InvalidArgument("linear model order must be 3 or 4");
  }
  if (!std::isfinite(powertrain_tau) || powertrain_tau <= 0.0) {
    throw InvalidArgument("powertrain time constant must be > 0");
  }
  LinearModel m;
  m.order = order;
  m.A = Eigen::MatrixXd::Zero(order, order);
  for (int i = 0; i + 1 < order; ++i) m.A(i, i + 1) = 1.0;
  m.A(order - 1, order - 1) = -1.0 / powertrain_tau;
  m.B = Eigen::VectorXd::Zero(order);
  m.B(order - 1) = 1.0 / powertrain_tau;
  return m;
}

LinearModel linear_model(int order, const VehicleParams& params) {
  return linear_model(order, params.powertrain_tau);
}

int controllability_rank(const LinearModel& model) {
  const int n = model.order;
  Eigen::MatrixXd ctrb(n, n);
  Eigen::VectorXd column = model.B;
  for (int k = 0; k < n; ++k) {
    ctrb.col(k) = column;
    column = model.A * column;
  }
  return static_cast<int>(Eigen::FullPivLU<Eigen::MatrixXd>(ctrb).rank());
}

}  // namespace platoon
