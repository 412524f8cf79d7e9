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
 * @file control.hpp
 * @brief Distributed PID-A spacing control with integral action, and the
 * closed-form stability conditions used to certify its gains.
 *
 * Per follower i with neighbour set I_i the control law is
 *
 *   u_i = -( ks * z_i + sum_{j in I_i} [ kp (p_i - p_j + d_ij)
 *                                      + kv (v_i - v_j) + ka (a_i - a_j) ] )
 *
 * where z_i is the time integral of the summed spacing error
 * sum_{j in I_i} (p_i - p_j + d_ij).
 */

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "platoon/dynamics.hpp"
#include "platoon/topology.hpp"

namespace platoon {

struct GainVector {
  double kappa_s = 0.0;  // integral, 1/s^3
  double kappa_p = 0.0;  // position, 1/s^2
  double kappa_v = 0.0;  // velocity, 1/s
  double kappa_a = 0.0;  // acceleration

  bool has_integral_action() const { return kappa_s != 0.0; }
  /// Throws InvalidArgument if any gain is not finite.
  void validate() const;
};

/// Constant-distance spacing: bumper-to-bumper gap `gap` between consecutive
/// vehicles of length `vehicle_length`, positions measured at the front bumper.
struct SpacingPolicy {
  double gap = 10.0;
  double vehicle_length = 0.0;

  void validate() const;
  /// d_ij with the sign used in the control law: (i - j) (gap + length).
  double offset(int i, int j) const;
  /// Front-to-rear bumper distance between the leader and follower i.
  double leader_distance(int i) const;
};

/// Summed spacing error sum_{j in I_i} (p_i - p_j + d_ij). `states` holds the
/// leader at index 0 followed by the N followers.
double summed_spacing_error(int follower, std::span<const VehicleState> states,
                            const Topology& topology,
                            const SpacingPolicy& policy);

/// Desired acceleration of follower i. The integral term reads
/// states[i].error_integral, which the caller accumulates.
double control_input(int follower, std::span<const VehicleState> states,
                     const Topology& topology, const GainVector& gains,
                     const SpacingPolicy& policy);

/// Monic characteristic polynomial of the block A - lambda B k^T:
/// [1, (1 + lambda ka)/tau, lambda kv/tau, lambda kp/tau, lambda ks/tau].
std::array<double, 5> block_char_poly(double lambda, const GainVector& gains,
                                      double tau);

/// Same block without the integrator state (ks = 0), divided by s.
std::array<double, 4> reduced_char_poly(double lambda, const GainVector& gains,
                                        double tau);

enum class RouthVerdict { kStable, kUnstable, kMarginal };

struct RouthResult {
  std::vector<double> first_column;
  RouthVerdict verdict = RouthVerdict::kUnstable;
};

/// First column of the Routh array for a polynomial given highest power
/// first. A zero pivot stops the array and yields kMarginal; the column then
/// ends with that zero.
RouthResult routh_first_column(std::span<const double> coeffs);

enum class StabilityFamily {
  kLookAhead,   // triangular L + P (rPFL and its special cases)
  kUndirected,  // symmetric L + P (rBDL and its special cases)
};

std::string_view to_string(StabilityFamily family);

struct ConstraintMargin {
  std::string name;
  double margin = 0.0;  // > 0 means satisfied; NaN when undefined
};

struct StabilityCertificate {
  StabilityFamily family = StabilityFamily::kLookAhead;
  bool integral_action = true;  // theorem (ks != 0) vs corollary (ks = 0)
  bool holds = false;
  /// Per-eigenvalue conditions; each margin is the minimum over all
  /// eigenvalues of L + P. holds <=> every margin > 0.
  std::vector<ConstraintMargin> binding_constraints;
  std::pair<double, double> eigen_range{0.0, 0.0};

  /// The same inequalities written with only the extremal eigenvalues
  /// (max in the numerator, min in the denominator of the kv bound). Not
  /// equivalent to the per-eigenvalue conditions for spread spectra or
  /// negative ka; reported for comparison.
  std::vector<ConstraintMargin> extremal_form;
  bool extremal_form_holds = false;

  std::vector<std::string> violated() const;
  bool extremal_form_agrees() const { return extremal_form_holds == holds; }
};

/// Certifies asymptotic stability of the formation error for a triangular or
/// symmetric coupling spectrum. Throws NotApplicable for other graphs.
StabilityCertificate certify_gains(const GainVector& gains,
                                   const CouplingSpectrum& spectrum,
                                   double tau);

/// Smallest kv the certificate accepts (exclusive) for the given ks, kp, ka.
double kappa_v_lower_bound(double kappa_s, double kappa_p, double kappa_a,
                           const CouplingSpectrum& spectrum, double tau);

/// margin * kappa_v_lower_bound. margin > 1 yields a holding certificate;
/// margin = 1 returns the boundary value itself.
double synthesize_kv(double kappa_s, double kappa_p, double kappa_a,
                     const CouplingSpectrum& spectrum, double tau,
                     double margin = 1.0);

/// Steady-state spacing error (gap minus desired gap) of the single-vehicle
/// loop under a constant input disturbance kappa_psi: -kappa_psi/kp without
/// integral action, zero with it.
double steady_state_error(double kappa_psi, const GainVector& gains);

/// Gain sets tabulated for N = 9, tau = 0.15 per named topology.
enum class GainColumn { kTheorem, kCorollary };

GainVector reference_gains(TopologyKind kind, GainColumn column);

/// Communication range the reference gains were tabulated with.
int reference_range(TopologyKind kind);

}  // namespace platoon
