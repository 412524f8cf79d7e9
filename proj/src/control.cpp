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

#include "platoon/control.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "platoon/errors.hpp"

namespace platoon {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_tau(double tau) {
  if (!std::isfinite(tau) || tau <= 0.0) {
    throw InvalidArgument("powertrain time constant must be > 0");
  }
}

std::vector<double> real_eigenvalues(const CouplingSpectrum& spectrum) {
  std::vector<double> out;
  out.reserve(spectrum.eigenvalues.size());
  for (const auto& lambda : spectrum.eigenvalues) out.push_back(lambda.real());
  return out;
}

StabilityFamily family_of(const CouplingSpectrum& spectrum) {
  if (spectrum.is_triangular) return StabilityFamily::kLookAhead;
  if (spectrum.is_symmetric) return StabilityFamily::kUndirected;
  throw NotApplicable(
      "theorem not applicable: coupling matrix is neither triangular nor "
      "symmetric");
}

// kv bound of one eigenvalue block; NaN where the expression is undefined.
double block_kv_bound(double lambda, double ks, double kp, double ka,
                      double tau) {
  const double c = 1.0 + lambda * ka;
  if (c <= 0.0) return kNaN;
  if (ks == 0.0) return tau * kp / c;
  if (kp <= 0.0) return kNaN;
  return (ks * c * c + tau * lambda * kp * kp) / (lambda * c * kp);
}

bool all_positive(const std::vector<ConstraintMargin>& margins) {
  return std::all_of(margins.begin(), margins.end(),
                     [](const ConstraintMargin& m) { return m.margin > 0.0; });
}

template <typename F>
double min_over(const std::vector<double>& lambdas, F&& f) {
  double worst = std::numeric_limits<double>::infinity();
  for (double lambda : lambdas) {
    const double value = f(lambda);
    if (std::isnan(value)) return kNaN;
    worst = std::min(worst, value);
  }
  return worst;
}

}  // namespace

void GainVector::validate() const {
  if (!std::isfinite(kappa_s) || !std::isfinite(kappa_p) ||
      !std::isfinite(kappa_v) || !std::isfinite(kappa_a)) {
    throw InvalidArgument("controller gains must be finite");
  }
}

void SpacingPolicy::validate() const {
  if (!std::isfinite(gap) || gap <= 0.0) {
    throw InvalidArgument("desired gap must be > 0");
  }
  if (!std::isfinite(vehicle_length) || vehicle_length < 0.0) {
    throw InvalidArgument("vehicle length must be >= 0");
  }
}

double SpacingPolicy::offset(int i, int j) const {
  return static_cast<double>(i - j) * (gap + vehicle_length);
}

double SpacingPolicy::leader_distance(int i) const {
  return static_cast<double>(i) * (gap + vehicle_length) - vehicle_length;
}

double summed_spacing_error(int follower, std::span<const VehicleState> states,
                            const Topology& topology,
                            const SpacingPolicy& policy) {
  if (states.size() != static_cast<std::size_t>(topology.n_followers()) + 1) {
    throw InvalidArgument("states must hold the leader and every follower");
  }
  const auto& self = states[static_cast<std::size_t>(follower)];
  double sum = 0.0;
  for (int j : topology.neighbors(follower)) {
    sum += self.position - states[static_cast<std::size_t>(j)].position +
           policy.offset(follower, j);
  }
  return sum;
}

double control_input(int follower, std::span<const VehicleState> states,
                     const Topology& topology, const GainVector& gains,
                     const SpacingPolicy& policy) {
  if (follower < 1 || follower > topology.n_followers()) {
    throw InvalidArgument("follower index out of range");
  }
  if (states.size() != static_cast<std::size_t>(topology.n_followers()) + 1) {
    throw InvalidArgument("states must hold the leader and every follower");
  }
  const auto& self = states[static_cast<std::size_t>(follower)];
  double sum = gains.kappa_s * self.error_integral;
  for (int j : topology.neighbors(follower)) {
    const auto& other = states[static_cast<std::size_t>(j)];
    sum += gains.kappa_p * (self.position - other.position +
                            policy.offset(follower, j)) +
           gains.kappa_v * (self.velocity - other.velocity) +
           gains.kappa_a * (self.acceleration - other.acceleration);
  }
  return -sum;
}

std::array<double, 5> block_char_poly(double lambda, const GainVector& gains,
                                      double tau) {
  check_tau(tau);
  if (!(lambda > 0.0)) throw InvalidArgument("eigenvalue must be > 0");
  return {1.0, (1.0 + lambda * gains.kappa_a) / tau,
          lambda * gains.kappa_v / tau, lambda * gains.kappa_p / tau,
          lambda * gains.kappa_s / tau};
}

std::array<double, 4> reduced_char_poly(double lambda, const GainVector& gains,
                                        double tau) {
  check_tau(tau);
  if (!(lambda > 0.0)) throw InvalidArgument("eigenvalue must be > 0");
  return {1.0, (1.0 + lambda * gains.kappa_a) / tau,
          lambda * gains.kappa_v / tau, lambda * gains.kappa_p / tau};
}

RouthResult routh_first_column(std::span<const double> coeffs) {
  if (coeffs.size() < 2) {
    throw InvalidArgument("Routh array needs a polynomial of degree >= 1");
  }
  if (coeffs.front() == 0.0 || !std::isfinite(coeffs.front())) {
    throw InvalidArgument("leading coefficient must be non-zero");
  }
  double scale = 0.0;
  for (double c : coeffs) {
    if (!std::isfinite(c)) throw InvalidArgument("non-finite coefficient");
    scale = std::max(scale, std::abs(c));
  }
  const double zero_tol = 1e-12 * scale;

  const std::size_t n = coeffs.size();
  const std::size_t width = (n + 1) / 2;
  std::vector<double> upper(width, 0.0);
  std::vector<double> lower(width, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    (k % 2 == 0 ? upper : lower)[k / 2] = coeffs[k] / coeffs.front();
  }

  RouthResult result;
  result.first_column.push_back(upper[0]);
  for (std::size_t row = 1; row < n; ++row) {
    const double pivot = lower[0];
    result.first_column.push_back(pivot);
    if (std::abs(pivot) <= zero_tol) {
      result.first_column.back() = 0.0;
      result.verdict = RouthVerdict::kMarginal;
      return result;
    }
    std::vector<double> next(width, 0.0);
    for (std::size_t k = 0; k + 1 < width; ++k) {
      next[k] = (pivot * upper[k + 1] - upper[0] * lower[k + 1]) / pivot;
    }
    upper = std::move(lower);
    lower = std::move(next);
  }
  const bool stable =
      std::all_of(result.first_column.begin(), result.first_column.end(),
                  [](double x) { return x > 0.0; });
  result.verdict = stable ? RouthVerdict::kStable : RouthVerdict::kUnstable;
  return result;
}

std::string_view to_string(StabilityFamily family) {
  return family == StabilityFamily::kLookAhead ? "look-ahead" : "undirected";
}

std::vector<std::string> StabilityCertificate::violated() const {
  std::vector<std::string> out;
  for (const auto& c : binding_constraints) {
    if (!(c.margin > 0.0)) out.push_back(c.name);
  }
  return out;
}

StabilityCertificate certify_gains(const GainVector& gains,
                                   const CouplingSpectrum& spectrum,
                                   double tau) {
  gains.validate();
  check_tau(tau);
  StabilityCertificate cert;
  cert.family = family_of(spectrum);
  cert.eigen_range = {spectrum.min_eig, spectrum.max_eig};
  cert.integral_action = gains.has_integral_action();

  const auto lambdas = real_eigenvalues(spectrum);
  if (lambdas.empty() || spectrum.min_eig <= 0.0) {
    throw StructuralError("coupling matrix must have positive eigenvalues");
  }
  const double ks = gains.kappa_s;
  const double kp = gains.kappa_p;
  const double kv = gains.kappa_v;
  const double ka = gains.kappa_a;
  const double lo = spectrum.min_eig;
  const double hi = spectrum.max_eig;

  auto& c = cert.binding_constraints;
  auto& x = cert.extremal_form;
  const double ka_margin = min_over(lambdas, [&](double l) {
    return ka + 1.0 / l;
  });
  const double kv_margin = min_over(lambdas, [&](double l) {
    return kv - block_kv_bound(l, ks, kp, ka, tau);
  });

  if (cert.integral_action) {
    c.push_back({"kappa_s_positive", ks});
    c.push_back({"kappa_a_lower", ka_margin});
    c.push_back({"kappa_p_positive", kp});
    c.push_back({"kappa_p_upper", min_over(lambdas, [&](double l) {
                   return kv * (1.0 + l * ka) / tau - kp;
                 })});
    c.push_back({"kappa_v_lower", kv_margin});

    const double num = ks * (1.0 + hi * ka) * (1.0 + hi * ka) +
                       tau * hi * kp * kp;
    const double den = lo * (1.0 + lo * ka) * kp;
    x.push_back({"kappa_s_positive", ks});
    x.push_back({"kappa_a_lower", ka + 1.0 / hi});
    x.push_back({"kappa_p_positive", kp});
    x.push_back({"kappa_p_upper", kv * (1.0 + hi * ka) / tau - kp});
    x.push_back({"kappa_v_lower", den != 0.0 ? kv - num / den : kNaN});
  } else {
    c.push_back({"kappa_p_positive", kp});
    c.push_back({"kappa_a_lower", ka_margin});
    c.push_back({"kappa_v_lower", kv_margin});

    const double den = 1.0 + lo * ka;
    x.push_back({"kappa_p_positive", kp});
    x.push_back({"kappa_a_lower", ka + 1.0 / hi});
    x.push_back({"kappa_v_lower", den > 0.0 ? kv - tau * kp / den : kNaN});
  }
  cert.holds = all_positive(c);
  cert.extremal_form_holds = all_positive(x);
  return cert;
}

double kappa_v_lower_bound(double kappa_s, double kappa_p, double kappa_a,
                           const CouplingSpectrum& spectrum, double tau) {
  check_tau(tau);
  family_of(spectrum);
  if (!std::isfinite(kappa_s) || kappa_s < 0.0) {
    throw InvalidArgument("kappa_s must be >= 0");
  }
  if (!std::isfinite(kappa_p) || kappa_p <= 0.0) {
    throw InvalidArgument("kappa_p must be > 0");
  }
  if (!std::isfinite(kappa_a) || !(kappa_a > -1.0 / spectrum.max_eig)) {
    throw InvalidArgument("kappa_a must exceed -1/lambda_max");
  }
  double bound = 0.0;
  for (const auto& lambda : spectrum.eigenvalues) {
    bound = std::max(bound, block_kv_bound(lambda.real(), kappa_s, kappa_p,
                                           kappa_a, tau));
  }
  return bound;
}

double synthesize_kv(double kappa_s, double kappa_p, double kappa_a,
                     const CouplingSpectrum& spectrum, double tau,
                     double margin) {
  if (!std::isfinite(margin) || margin < 1.0) {
    throw InvalidArgument("margin must be >= 1");
  }
  return margin *
         kappa_v_lower_bound(kappa_s, kappa_p, kappa_a, spectrum, tau);
}

double steady_state_error(double kappa_psi, const GainVector& gains) {
  if (kappa_psi == 0.0) return 0.0;
  if (gains.has_integral_action()) return 0.0;
  if (gains.kappa_p == 0.0) {
    throw InvalidArgument("steady-state error undefined for kp = ks = 0");
  }
  return -kappa_psi / gains.kappa_p;
}

GainVector reference_gains(TopologyKind kind, GainColumn column) {
  struct Row {
    TopologyKind kind;
    GainVector theorem;
    double kp0, kv0, ka0;
  };
  static constexpr std::array<Row, 10> kRows{{
      {TopologyKind::kPF, {0.150, 1.0, 3.450, 1.000}, 1.0, 2.150, 1.000},
      {TopologyKind::kPFL, {0.075, 1.0, 3.225, 1.500}, 1.0, 2.075, 1.500},
      {TopologyKind::kTPF, {0.075, 1.0, 3.225, 1.500}, 1.0, 2.075, 1.500},
      {TopologyKind::kTPFL, {0.050, 1.0, 3.150, 1.667}, 1.0, 2.050, 1.667},
      {TopologyKind::kRPF, {0.030, 1.0, 3.090, 1.800}, 1.0, 2.030, 1.800},
      {TopologyKind::kRPFL, {0.025, 1.0, 3.075, 1.833}, 1.0, 2.025, 1.833},
      {TopologyKind::kBD, {0.010, 1.0, 5.086, 1.743}, 1.0, 2.286, 1.743},
      {TopologyKind::kBDL, {0.010, 1.0, 1.052, 1.795}, 1.0, 2.107, 1.795},
      {TopologyKind::kRBD, {0.010, 1.0, 1.423, 1.890}, 1.0, 2.175, 1.890},
      {TopologyKind::kRBDL, {0.010, 1.0, 1.103, 1.900}, 1.0, 2.103, 1.900},
  }};
  for (const auto& row : kRows) {
    if (row.kind != kind) continue;
    if (column == GainColumn::kTheorem) return row.theorem;
    return GainVector{0.0, row.kp0, row.kv0, row.ka0};
  }
  throw InvalidArgument("no reference gains for topology kind '" +
                        std::string(to_string(kind)) + "'");
}

int reference_range(TopologyKind kind) {
  switch (kind) {
    case TopologyKind::kTPF:
    case TopologyKind::kTPFL:
      return 2;
    case TopologyKind::kRPF:
    case TopologyKind::kRPFL:
      return 5;
    case TopologyKind::kRBD:
    case TopologyKind::kRBDL:
      return 4;
    default:
      return 1;
  }
}

}  // namespace platoon
