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

#include "platoon/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/max_cardinality_matching.hpp>
#include <fmt/format.h>
#include <unsupported/Eigen/KroneckerProduct>

#include "platoon/dynamics.hpp"
#include "platoon/errors.hpp"

namespace platoon {
namespace {

Eigen::VectorXd gain_row(const GainVector& gains, int order) {
  Eigen::VectorXd k(order);
  if (order == 4) {
    k << gains.kappa_s, gains.kappa_p, gains.kappa_v, gains.kappa_a;
  } else {
    k << gains.kappa_p, gains.kappa_v, gains.kappa_a;
  }
  return k;
}

bool has_perfect_matching(const std::vector<std::vector<double>>& dist,
                          double threshold) {
  using Graph =
      boost::adjacency_list<boost::vecS, boost::vecS, boost::undirectedS>;
  const auto n = dist.size();
  Graph g(2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (dist[i][j] <= threshold) boost::add_edge(i, n + j, g);
    }
  }
  std::vector<boost::graph_traits<Graph>::vertex_descriptor> mate(2 * n);
  boost::edmonds_maximum_cardinality_matching(g, &mate[0]);
  return boost::matching_size(g, &mate[0]) == n;
}

}  // namespace

ClosedLoopSystem build_closed_loop(const Topology& topology,
                                   const GainVector& gains, double tau,
                                   int order, int size_cap) {
  gains.validate();
  const LinearModel model = linear_model(order, tau);
  const int n = topology.n_followers();
  if (n * order > size_cap) {
    throw InvalidArgument(fmt::format(
        "closed loop has {} states, above the cap of {}", n * order, size_cap));
  }

  const Eigen::VectorXd k = gain_row(gains, order);
  const Eigen::MatrixXd bk = model.B * k.transpose();
  const Eigen::MatrixXd m = topology.coupling_matrix();

  ClosedLoopSystem sys;
  sys.order = order;
  sys.full_matrix =
      Eigen::kroneckerProduct(Eigen::MatrixXd::Identity(n, n), model.A).eval() -
      Eigen::kroneckerProduct(m, bk).eval();

  const CouplingSpectrum spectrum = coupling_spectrum(topology);
  for (const auto& lambda : spectrum.eigenvalues) {
    Eigen::MatrixXcd block =
        model.A.cast<std::complex<double>>() - lambda * bk.cast<std::complex<double>>();
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(block, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("block eigensolver did not converge");
    }
    ComplexVector eig(solver.eigenvalues().begin(), solver.eigenvalues().end());
    sys.blocks.push_back(std::move(block));
    sys.block_eigenvalues.push_back(std::move(eig));
  }

  sys.eigenvalues_full = block_triangular_eigenvalues(sys.full_matrix);
  sys.spectral_abscissa = -std::numeric_limits<double>::infinity();
  for (const auto& z : sys.eigenvalues_full) {
    sys.spectral_abscissa = std::max(sys.spectral_abscissa, z.real());
  }
  return sys;
}

bool is_hurwitz(const ClosedLoopSystem& system, double tol) {
  if (!(tol > 0.0)) throw InvalidArgument("tolerance must be > 0");
  return system.spectral_abscissa < -tol;
}

double spectrum_pairing_distance(const ClosedLoopSystem& system) {
  ComplexVector pooled;
  for (const auto& eig : system.block_eigenvalues) {
    pooled.insert(pooled.end(), eig.begin(), eig.end());
  }
  const auto& full = system.eigenvalues_full;
  if (pooled.size() != full.size()) {
    return std::numeric_limits<double>::infinity();
  }
  const auto n = full.size();
  if (n == 0) return 0.0;

  std::vector<std::vector<double>> dist(n, std::vector<double>(n));
  std::vector<double> candidates;
  candidates.reserve(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      dist[i][j] = std::abs(full[i] - pooled[j]);
      candidates.push_back(dist[i][j]);
    }
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()),
                   candidates.end());

  std::size_t lo = 0;
  std::size_t hi = candidates.size() - 1;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (has_perfect_matching(dist, candidates[mid])) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return candidates[lo];
}

bool block_spectrum_union_check(const ClosedLoopSystem& system, double tol) {
  return spectrum_pairing_distance(system) < tol;
}

void write_spectrum_csv(std::ostream& out, const ClosedLoopSystem& system) {
  out << "block,real,imag\n";
  for (const auto& z : system.eigenvalues_full) {
    out << fmt::format("-1,{:.17g},{:.17g}\n", z.real(), z.imag());
  }
  for (std::size_t b = 0; b < system.block_eigenvalues.size(); ++b) {
    for (const auto& z : system.block_eigenvalues[b]) {
      out << fmt::format("{},{:.17g},{:.17g}\n", b, z.real(), z.imag());
    }
  }
}

}  // namespace platoon
