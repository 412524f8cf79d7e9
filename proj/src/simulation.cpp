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

#include "platoon/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <fmt/format.h>

#include "platoon/analysis.hpp"
#include "platoon/errors.hpp"

namespace platoon {
namespace {

constexpr double kBlowUp = 1e9;
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr int kLeaderStates = 3;
constexpr int kFollowerStates = 4;  // p, v, T (or a), integral

// Scheduled signals, held constant over a substep. They are right-continuous
// in time and substeps never straddle a switching instant.
struct Piece {
  double leader_input = 0.0;
  double wind = 0.0;
  std::vector<double> bias;  // index 1..N
};

class PlatoonModel {
 public:
  explicit PlatoonModel(const SimConfig& config)
      : cfg_(config),
        n_(config.topology.n_followers()),
        on_slope_(static_cast<std::size_t>(n_) + 1, false),
        slope_times_(static_cast<std::size_t>(n_), kNaN) {}

  int n() const { return n_; }
  Eigen::Index size() const { return kLeaderStates + kFollowerStates * n_; }
  static Eigen::Index base(int follower) {
    return kLeaderStates + kFollowerStates * (follower - 1);
  }

  Piece piece_at(double t) const {
    const auto& s = cfg_.schedule;
    Piece p;
    const auto& pulse = s.leader_accel_pulse;
    if (pulse.enabled && t >= pulse.t_start && t < pulse.t_end) {
      p.leader_input = pulse.magnitude;
    }
    if (s.wind_step.enabled && t >= s.wind_step.t_start) {
      p.wind = s.wind_step.speed;
    }
    p.bias.assign(static_cast<std::size_t>(n_) + 1, 0.0);
    for (const auto& step : s.input_bias_steps) {
      if (t >= step.t_start) {
        p.bias[static_cast<std::size_t>(step.follower)] += step.magnitude;
      }
    }
    return p;
  }

  EnvSample plant_env(int i, const Piece& piece) const {
    EnvSample env;
    if (on_slope_[static_cast<std::size_t>(i)]) {
      env.slope = cfg_.schedule.slope_step.angle;
    }
    env.wind = piece.wind;
    env.input_bias = piece.bias[static_cast<std::size_t>(i)];
    return env;
  }

  EnvSample controller_env(int i, const Piece& piece) const {
    if (!cfg_.controller_measures_env) return EnvSample{};
    EnvSample env = plant_env(i, piece);
    env.input_bias = 0.0;
    return env;
  }

  std::vector<VehicleState> unpack(const Eigen::VectorXd& x,
                                   const Piece& piece) const {
    std::vector<VehicleState> states(static_cast<std::size_t>(n_) + 1);
    states[0] = VehicleState{x(0), x(1), x(2), 0.0, 0.0};
    for (int i = 1; i <= n_; ++i) {
      const Eigen::Index b = base(i);
      auto& st = states[static_cast<std::size_t>(i)];
      st.position = x(b);
      st.velocity = x(b + 1);
      st.error_integral = x(b + 3);
      if (cfg_.plant_mode == PlantMode::kNonlinear) {
        st.torque = x(b + 2);
        st.acceleration = nonlinear_acceleration(
            st.velocity, st.torque, plant_env(i, piece), cfg_.plant_params);
      } else {
        st.acceleration = x(b + 2);
      }
    }
    return states;
  }

  Eigen::VectorXd derivative(const Eigen::VectorXd& x,
                             const Piece& piece) const {
    const auto states = unpack(x, piece);
    const double tau = cfg_.plant_params.powertrain_tau;
    Eigen::VectorXd dx(size());
    dx(0) = x(1);
    dx(1) = x(2);
    dx(2) = (piece.leader_input - x(2)) / tau;
    for (int i = 1; i <= n_; ++i) {
      const auto& st = states[static_cast<std::size_t>(i)];
      const double u =
          control_input(i, states, cfg_.topology, cfg_.gains, cfg_.policy);
      const Eigen::Index b = base(i);
      dx(b + 3) =
          summed_spacing_error(i, states, cfg_.topology, cfg_.policy);
      if (cfg_.plant_mode == PlantMode::kNonlinear) {
        const double command =
            feedback_linearize(u, st, controller_env(i, piece),
                               cfg_.controller_params, cfg_.drag_term);
        const StateDerivative d = nonlinear_derivative(
            st, command, plant_env(i, piece), cfg_.plant_params);
        dx(b) = d.position;
        dx(b + 1) = d.velocity;
        dx(b + 2) = d.torque;
      } else {
        dx(b) = st.velocity;
        dx(b + 1) = st.acceleration;
        dx(b + 2) =
            (u + piece.bias[static_cast<std::size_t>(i)] - st.acceleration) /
            tau;
      }
    }
    return dx;
  }

  Eigen::VectorXd rk4(const Eigen::VectorXd& x, double h,
                      const Piece& piece) const {
    const Eigen::VectorXd k1 = derivative(x, piece);
    const Eigen::VectorXd k2 = derivative(x + 0.5 * h * k1, piece);
    const Eigen::VectorXd k3 = derivative(x + 0.5 * h * k2, piece);
    const Eigen::VectorXd k4 = derivative(x + h * k3, piece);
    return x + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }

  // Vehicles (1-based; 0 = leader when the trigger is global) still waiting
  // for the slope, and whether the given state has them past the trigger.
  double crossing_excess(const Eigen::VectorXd& x) const {
    const auto& slope = cfg_.schedule.slope_step;
    double worst = -std::numeric_limits<double>::infinity();
    if (!slope.per_vehicle) {
      if (!on_slope_[0]) worst = x(0) - slope.trigger_position;
      return worst;
    }
    for (int i = 1; i <= n_; ++i) {
      if (!on_slope_[static_cast<std::size_t>(i)]) {
        worst = std::max(worst, x(base(i)) - slope.trigger_position);
      }
    }
    return worst;
  }

  void mark_crossings(const Eigen::VectorXd& x, double t) {
    const auto& slope = cfg_.schedule.slope_step;
    if (!slope.per_vehicle) {
      if (on_slope_[0] || x(0) < slope.trigger_position) return;
      std::fill(on_slope_.begin(), on_slope_.end(), true);
      std::fill(slope_times_.begin(), slope_times_.end(), t);
      return;
    }
    for (int i = 1; i <= n_; ++i) {
      const auto idx = static_cast<std::size_t>(i);
      if (!on_slope_[idx] && x(base(i)) >= slope.trigger_position) {
        on_slope_[idx] = true;
        slope_times_[idx - 1] = t;
      }
    }
  }

  // Advances x over [ta, tb], a span free of scheduled switches, stopping at
  // each slope crossing.
  void advance(Eigen::VectorXd& x, double ta, double tb) {
    const Piece piece = piece_at(ta);
    const bool slope_active = cfg_.schedule.slope_step.enabled;
    while (tb > ta) {
      Eigen::VectorXd next = rk4(x, tb - ta, piece);
      if (!slope_active || !(crossing_excess(next) >= 0.0)) {
        x = std::move(next);
        return;
      }
      double lo = 0.0;
      double hi = tb - ta;
      for (int it = 0; it < 200 && hi - lo > 1e-13 * std::max(1.0, tb); ++it) {
        const double mid = 0.5 * (lo + hi);
        if (crossing_excess(rk4(x, mid, piece)) >= 0.0) {
          hi = mid;
        } else {
          lo = mid;
        }
      }
      x = rk4(x, hi, piece);
      ta += hi;
      mark_crossings(x, ta);
    }
  }

  const std::vector<double>& slope_times() const { return slope_times_; }

 private:
  const SimConfig& cfg_;
  int n_;
  std::vector<bool> on_slope_;  // index 0 = global trigger state
  std::vector<double> slope_times_;
};

void check_finite_bounded(const Eigen::VectorXd& x, double t) {
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (!std::isfinite(x(k)) || std::abs(x(k)) > kBlowUp) {
      const int vehicle = k < kLeaderStates
                              ? 0
                              : 1 + static_cast<int>((k - kLeaderStates) /
                                                     kFollowerStates);
      throw NumericalFailure(fmt::format(
          "numerical blow-up at t = {:.6g} s: vehicle {} state {} = {:.6g}", t,
          vehicle, k, x(k)));
    }
  }
}

void check_gains(const SimConfig& cfg) {
  const double tau = cfg.plant_params.powertrain_tau;
  bool ok = false;
  try {
    ok = certify_gains(cfg.gains, coupling_spectrum(cfg.topology), tau).holds;
  } catch (const NotApplicable&) {
    const int order = cfg.gains.has_integral_action() ? 4 : 3;
    ok = is_hurwitz(build_closed_loop(cfg.topology, cfg.gains, tau, order),
                    1e-9);
  }
  if (!ok) {
    throw InvalidArgument(
        "gains do not stabilise this topology; set sim.allow_uncertified to "
        "run anyway");
  }
}

std::vector<double> switching_times(const SimConfig& cfg) {
  const auto& s = cfg.schedule;
  std::vector<double> out;
  if (s.leader_accel_pulse.enabled) {
    out.push_back(s.leader_accel_pulse.t_start);
    out.push_back(s.leader_accel_pulse.t_end);
  }
  if (s.wind_step.enabled) out.push_back(s.wind_step.t_start);
  for (const auto& step : s.input_bias_steps) out.push_back(step.t_start);
  std::erase_if(out, [&](double t) { return t <= 0.0 || t >= cfg.t_final; });
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

}  // namespace

void DisturbanceSchedule::validate(int n_followers) const {
  const auto& p = leader_accel_pulse;
  if (!std::isfinite(p.magnitude) || !std::isfinite(p.t_start) ||
      !std::isfinite(p.t_end) || !(p.t_end > p.t_start)) {
    throw InvalidArgument("leader pulse needs finite values and t_end > t_start");
  }
  if (!std::isfinite(slope_step.angle) ||
      std::abs(slope_step.angle) >= std::numbers::pi / 2.0) {
    throw InvalidArgument("slope angle must satisfy |theta| < 90 deg");
  }
  if (!std::isfinite(slope_step.trigger_position)) {
    throw InvalidArgument("slope trigger position must be finite");
  }
  if (!std::isfinite(wind_step.speed) || !std::isfinite(wind_step.t_start)) {
    throw InvalidArgument("wind step needs finite values");
  }
  for (const auto& step : input_bias_steps) {
    if (step.follower < 1 || step.follower > n_followers) {
      throw InvalidArgument(
          fmt::format("input bias targets follower {} of {}", step.follower,
                      n_followers));
    }
    if (!std::isfinite(step.magnitude) || !std::isfinite(step.t_start)) {
      throw InvalidArgument("input bias step needs finite values");
    }
  }
}

DisturbanceSchedule DisturbanceSchedule::quiet() {
  DisturbanceSchedule s;
  s.leader_accel_pulse.enabled = false;
  s.slope_step.enabled = false;
  s.wind_step.enabled = false;
  return s;
}

void SimConfig::validate() const {
  gains.validate();
  plant_params.validate();
  controller_params.validate();
  policy.validate();
  schedule.validate(topology.n_followers());
  if (!std::isfinite(dt) || dt <= 0.0) throw InvalidArgument("dt must be > 0");
  if (!std::isfinite(t_final) || !(t_final > dt)) {
    throw InvalidArgument("t_final must exceed dt");
  }
  if (!std::isfinite(initial_speed)) {
    throw InvalidArgument("initial speed must be finite");
  }
  if (output_stride < 1) throw InvalidArgument("output stride must be >= 1");
  if (!initial_gap_offsets.empty() &&
      initial_gap_offsets.size() !=
          static_cast<std::size_t>(topology.n_followers())) {
    throw InvalidArgument(fmt::format(
        "{} initial gap offsets given for {} followers",
        initial_gap_offsets.size(), topology.n_followers()));
  }
  for (double g : initial_gap_offsets) {
    if (!std::isfinite(g)) throw InvalidArgument("gap offsets must be finite");
  }
}

Trajectory run(const SimConfig& config) {
  config.validate();
  if (!config.allow_uncertified) check_gains(config);

  PlatoonModel model(config);
  const int n = model.n();
  const double spacing = config.policy.gap + config.policy.vehicle_length;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(model.size());
  x(1) = config.initial_speed;
  double front = 0.0;
  for (int i = 1; i <= n; ++i) {
    const double extra = config.initial_gap_offsets.empty()
                             ? 0.0
                             : config.initial_gap_offsets[static_cast<std::size_t>(i - 1)];
    front -= spacing + extra;
    const Eigen::Index b = PlatoonModel::base(i);
    x(b) = front;
    x(b + 1) = config.initial_speed;
  }
  if (config.schedule.slope_step.enabled) model.mark_crossings(x, 0.0);
  const Piece start = model.piece_at(0.0);
  if (config.plant_mode == PlantMode::kNonlinear) {
    for (int i = 1; i <= n; ++i) {
      const Eigen::Index b = PlatoonModel::base(i);
      EnvSample env = model.plant_env(i, start);
      env.input_bias = 0.0;
      x(b + 2) = equilibrium_torque(config.initial_speed, env,
                                    config.plant_params);
    }
  }

  Trajectory traj;
  traj.gap = config.policy.gap;
  traj.vehicles.resize(static_cast<std::size_t>(n) + 1);
  traj.spacing_errors.resize(static_cast<std::size_t>(n));

  auto record = [&](double t) {
    const Piece piece = model.piece_at(t);
    const auto states = model.unpack(x, piece);
    traj.times.push_back(t);
    for (int i = 0; i <= n; ++i) {
      const auto& st = states[static_cast<std::size_t>(i)];
      auto& series = traj.vehicles[static_cast<std::size_t>(i)];
      series.position.push_back(st.position);
      series.velocity.push_back(st.velocity);
      series.acceleration.push_back(st.acceleration);
      series.torque.push_back(st.torque);
      series.input.push_back(
          i == 0 ? piece.leader_input
                 : control_input(i, states, config.topology, config.gains,
                                 config.policy));
      if (i > 0) {
        traj.spacing_errors[static_cast<std::size_t>(i - 1)].push_back(
            states[static_cast<std::size_t>(i - 1)].position - st.position -
            spacing);
      }
    }
  };

  const auto switches = switching_times(config);
  const auto steps = static_cast<long long>(std::llround(config.t_final / config.dt));
  record(0.0);
  for (long long k = 0; k < steps; ++k) {
    const double ta = static_cast<double>(k) * config.dt;
    const double tb = static_cast<double>(k + 1) * config.dt;
    double t = ta;
    try {
      for (double ts : switches) {
        if (ts > t && ts < tb) {
          model.advance(x, t, ts);
          t = ts;
        }
      }
      model.advance(x, t, tb);
    } catch (const InvalidArgument& e) {
      throw NumericalFailure(
          fmt::format("integration failed near t = {:.6g} s: {}", ta, e.what()));
    }
    check_finite_bounded(x, tb);
    if ((k + 1) % config.output_stride == 0) record(tb);
  }

  traj.slope_times = model.slope_times();
  traj.epoch_starts.push_back(0.0);
  const auto& s = config.schedule;
  if (s.leader_accel_pulse.enabled) {
    traj.epoch_starts.push_back(s.leader_accel_pulse.t_start);
  }
  double first_slope = std::numeric_limits<double>::infinity();
  for (double ts : traj.slope_times) {
    if (!std::isnan(ts)) first_slope = std::min(first_slope, ts);
  }
  if (std::isfinite(first_slope)) traj.epoch_starts.push_back(first_slope);
  if (s.wind_step.enabled) traj.epoch_starts.push_back(s.wind_step.t_start);
  for (const auto& step : s.input_bias_steps) {
    traj.epoch_starts.push_back(step.t_start);
  }
  const double t_end = traj.times.back();
  std::erase_if(traj.epoch_starts,
                [&](double t) { return t < 0.0 || t >= t_end; });
  std::sort(traj.epoch_starts.begin(), traj.epoch_starts.end());
  traj.epoch_starts.erase(
      std::unique(traj.epoch_starts.begin(), traj.epoch_starts.end()),
      traj.epoch_starts.end());
  if (traj.epoch_starts.empty() || traj.epoch_starts.front() > 0.0) {
    traj.epoch_starts.insert(traj.epoch_starts.begin(), 0.0);
  }
  return traj;
}

Metrics compute_metrics(const Trajectory& traj, double settle_window,
                        double settle_band) {
  if (traj.times.empty() || traj.spacing_errors.empty()) {
    throw InvalidArgument("trajectory is empty");
  }
  if (!(settle_window > 0.0) || !(settle_band > 0.0)) {
    throw InvalidArgument("settle window and band must be > 0");
  }
  std::vector<double> starts = traj.epoch_starts;
  if (starts.empty()) starts.push_back(traj.times.front());
  const auto n = traj.spacing_errors.size();
  const auto& t = traj.times;

  Metrics out;
  out.max_abs_error.assign(n, 0.0);
  out.min_spacing_error.assign(n, std::numeric_limits<double>::infinity());
  for (std::size_t e = 0; e < starts.size(); ++e) {
    EpochMetrics em;
    em.t_start = starts[e];
    em.t_end = e + 1 < starts.size() ? starts[e + 1] : t.back();
    if (!(settle_window < em.t_end - em.t_start)) {
      throw InvalidArgument(fmt::format(
          "settle window {} s is not shorter than epoch [{}, {}]",
          settle_window, em.t_start, em.t_end));
    }
    const auto first = static_cast<std::size_t>(
        std::lower_bound(t.begin(), t.end(), em.t_start) - t.begin());
    const auto last = static_cast<std::size_t>(
        std::upper_bound(t.begin(), t.end(), em.t_end) - t.begin());
    const auto window = static_cast<std::size_t>(
        std::lower_bound(t.begin(), t.end(), em.t_end - settle_window) -
        t.begin());

    for (std::size_t i = 0; i < n; ++i) {
      const auto& err = traj.spacing_errors[i];
      double sum = 0.0;
      double window_max = 0.0;
      for (std::size_t k = window; k < last; ++k) {
        sum += err[k];
        window_max = std::max(window_max, std::abs(err[k]));
      }
      em.steady_state_error.push_back(sum / static_cast<double>(last - window));
      em.window_max_abs_error.push_back(window_max);

      double max_abs = 0.0;
      double min_err = std::numeric_limits<double>::infinity();
      std::size_t exit_index = last;  // last sample outside the band
      for (std::size_t k = first; k < last; ++k) {
        max_abs = std::max(max_abs, std::abs(err[k]));
        min_err = std::min(min_err, err[k]);
        if (std::abs(err[k]) > settle_band) exit_index = k;
      }
      em.max_abs_error.push_back(max_abs);
      em.min_spacing_error.push_back(min_err);

      double settle = 0.0;
      if (exit_index + 1 == last) {
        settle = kNaN;
      } else if (exit_index != last) {
        const double a = std::abs(err[exit_index]);
        const double b = std::abs(err[exit_index + 1]);
        const double frac = (a - settle_band) / (a - b);
        settle = t[exit_index] + frac * (t[exit_index + 1] - t[exit_index]) -
                 em.t_start;
      }
      em.settling_time.push_back(settle);

      out.max_abs_error[i] = std::max(out.max_abs_error[i], max_abs);
      out.min_spacing_error[i] = std::min(out.min_spacing_error[i], min_err);
    }
    out.epochs.push_back(std::move(em));
  }
  out.steady_state_error = out.epochs.back().steady_state_error;
  for (double m : out.min_spacing_error) {
    if (m <= -traj.gap) out.collision = true;
  }
  return out;
}

double siso_disturbance_run(const GainVector& gains, double tau,
                            double kappa_psi, double t_final, double dt) {
  gains.validate();
  if (!std::isfinite(kappa_psi)) {
    throw InvalidArgument("disturbance must be finite");
  }
  if (!std::isfinite(dt) || dt <= 0.0 || !std::isfinite(t_final) ||
      !(t_final > dt)) {
    throw InvalidArgument("need 0 < dt < t_final");
  }
  const RouthVerdict verdict =
      gains.has_integral_action()
          ? routh_first_column(block_char_poly(1.0, gains, tau)).verdict
          : routh_first_column(reduced_char_poly(1.0, gains, tau)).verdict;
  if (verdict != RouthVerdict::kStable) {
    throw NumericalFailure("single-vehicle loop is not asymptotically stable");
  }

  // State (z, p, v, a) with p the offset from the desired position.
  const LinearModel model = linear_model(4, tau);
  Eigen::Vector4d k(gains.kappa_s, gains.kappa_p, gains.kappa_v,
                    gains.kappa_a);
  const Eigen::Matrix4d a_cl = model.A - model.B * k.transpose();
  const Eigen::Vector4d w = model.B * kappa_psi;
  auto f = [&](const Eigen::Vector4d& x) -> Eigen::Vector4d {
    return a_cl * x + w;
  };

  const auto steps = static_cast<long long>(std::llround(t_final / dt));
  const auto tail_start = steps - steps / 10;
  Eigen::Vector4d x = Eigen::Vector4d::Zero();
  double sum = 0.0;
  long long count = 0;
  for (long long s = 1; s <= steps; ++s) {
    const Eigen::Vector4d k1 = f(x);
    const Eigen::Vector4d k2 = f(x + 0.5 * dt * k1);
    const Eigen::Vector4d k3 = f(x + 0.5 * dt * k2);
    const Eigen::Vector4d k4 = f(x + dt * k3);
    x += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!x.allFinite() || x.cwiseAbs().maxCoeff() > kBlowUp) {
      throw NumericalFailure("single-vehicle run diverged");
    }
    if (s >= tail_start) {
      sum += -x(1);  // spacing error: gap minus desired
      ++count;
    }
  }
  return sum / static_cast<double>(count);
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  out << "t,veh,p,v,a,u,e_spacing\n";
  for (std::size_t k = 0; k < traj.times.size(); ++k) {
    for (std::size_t i = 0; i < traj.vehicles.size(); ++i) {
      const auto& s = traj.vehicles[i];
      const double e = i == 0 ? 0.0 : traj.spacing_errors[i - 1][k];
      out << fmt::format("{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n",
                         traj.times[k], i, s.position[k], s.velocity[k],
                         s.acceleration[k], s.input[k], e);
    }
  }
}

void write_metrics_csv(std::ostream& out, const Metrics& metrics) {
  out << "epoch,t_start,t_end,veh,steady_state_error,window_max_abs_error,"
         "max_abs_error,min_spacing_error,settling_time\n";
  for (std::size_t e = 0; e < metrics.epochs.size(); ++e) {
    const auto& em = metrics.epochs[e];
    for (std::size_t i = 0; i < em.steady_state_error.size(); ++i) {
      out << fmt::format(
          "{},{:.17g},{:.17g},{},{:.17g},{:.17g},{:.17g},{:.17g},{:.17g}\n", e,
          em.t_start, em.t_end, i + 1, em.steady_state_error[i],
          em.window_max_abs_error[i], em.max_abs_error[i],
                         em.min_spacing_error[i], em.settling_time[i]);
    }
  }
}

void write_plot_script(std::ostream& out,
                       const std::vector<std::string>& csv_files,
                       const std::vector<std::string>& titles,
                       const std::string& image_file) {
  if (csv_files.size() != titles.size()) {
    throw InvalidArgument("one title per CSV file is required");
  }
  auto py_str = [](const std::string& text) {
    std::string s = "\"";
    for (char c : text) {
      if (c == '\\' || c == '"') s += '\\';
      s += c;
    }
    return s + "\"";
  };
  auto quoted = [&](const std::vector<std::string>& items) {
    std::string s = "[";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i) s += ", ";
      s += py_str(items[i]);
    }
    return s + "]";
  };
  out << "#!/usr/bin/env python3\n"
         "# Spacing error against time, one pane per run.\n"
         "import csv\n"
         "import os\n\n"
         "import matplotlib\n"
         "matplotlib.use(\"Agg\")\n"
         "import matplotlib.pyplot as plt\n\n"
      << "FILES = " << quoted(csv_files) << "\n"
      << "TITLES = " << quoted(titles) << "\n"
      << "IMAGE = " << py_str(image_file) << "\n\n"
      << "here = os.path.dirname(os.path.abspath(__file__))\n"
         "fig, axes = plt.subplots(len(FILES), 1, sharex=True, squeeze=False,\n"
         "                         figsize=(8, 2.4 * len(FILES)))\n"
         "for ax, name, title in zip(axes[:, 0], FILES, TITLES):\n"
         "    series = {}\n"
         "    with open(os.path.join(here, name), newline=\"\") as f:\n"
         "        for row in csv.DictReader(f):\n"
         "            veh = int(row[\"veh\"])\n"
         "            if veh == 0:\n"
         "                continue\n"
         "            t, e = series.setdefault(veh, ([], []))\n"
         "            t.append(float(row[\"t\"]))\n"
         "            e.append(float(row[\"e_spacing\"]))\n"
         "    for veh in sorted(series):\n"
         "        ax.plot(*series[veh], lw=0.8, label=str(veh))\n"
         "    ax.set_title(title)\n"
         "    ax.set_ylabel(\"e [m]\")\n"
         "    ax.grid(True, lw=0.3)\n"
         "axes[0, 0].legend(ncol=5, fontsize=\"small\")\n"
         "axes[-1, 0].set_xlabel(\"t [s]\")\n"
         "fig.tight_layout()\n"
         "fig.savefig(os.path.join(here, IMAGE), dpi=150)\n";
}

}  // namespace platoon
