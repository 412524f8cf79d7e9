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

// Closed-loop formation-error matrix and its numerical stability checks.

#include <complex>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "platoon/control.hpp"
#include "platoon/linalg.hpp"
#include "platoon/topology.hpp"

namespace platoon {

struct ClosedLoopSystem {
  int order = 4;
  /// I_N (x) A - (L + P) (x) B k^T.
  Eigen::MatrixXd full_matrix;
  /// A - lambda_i B k^T, one per eigenvalue of L + P (same order as
  /// CouplingSpectrum::eigenvalues).
  std::vector<Eigen::MatrixXcd> blocks;
  std::vector<ComplexVector> block_eigenvalues;
  ComplexVector eigenvalues_full;
  double spectral_abscissa = 0.0;
};

/// Order 4 carries the integral state (s, p, v, a) with k = (ks, kp, kv, ka);
/// order 3 drops it and uses k = (kp, kv, ka). Throws InvalidArgument when
/// order * N exceeds size_cap.
ClosedLoopSystem build_closed_loop(const Topology& topology,
                                   const GainVector& gains, double tau,
                                   int order = 4, int size_cap = 400);

bool is_hurwitz(const ClosedLoopSystem& system, double tol);

/// Smallest d such that the full spectrum and the union of block spectra can
/// be paired one-to-one with every pair closer than d (bottleneck matching).
double spectrum_pairing_distance(const ClosedLoopSystem& system);

bool block_spectrum_union_check(const ClosedLoopSystem& system, double tol);

/// CSV `block,real,imag`; block -1 holds the full-matrix spectrum.
void write_spectrum_csv(std::ostream& out, const ClosedLoopSystem& system);

}  // namespace platoon
