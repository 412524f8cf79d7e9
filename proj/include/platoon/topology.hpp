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
 * @file topology.hpp
 * @brief Platoon communication graphs and the algebra of their coupling
 * matrix M = L + P.
 *
 * Followers are numbered 1..N; the leader is node 0. Matrices are stored
 * 0-based, so adjacency(i-1, j-1) == 1 means follower i receives the state of
 * follower j, and pinning(i-1) == 1 means follower i receives the leader.
 */

#include <array>
#include <complex>
#include <iosfwd>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace platoon {

enum class TopologyKind {
  kPF,    // predecessor following
  kPFL,   // PF + every follower hears the leader
  kTPF,   // two predecessors
  kTPFL,  // TPF + leader
  kRPF,   // r predecessors
  kRPFL,  // rPF + leader
  kBD,    // bidirectional, nearest neighbour each side
  kBDL,   // BD + leader
  kRBD,   // bidirectional, r neighbours each side
  kRBDL,  // rBD + leader
  kCustom,
};

std::string_view to_string(TopologyKind kind);

/// Accepts the labels produced by to_string(), case-insensitively.
/// Throws InvalidArgument for anything else.
TopologyKind parse_topology_kind(std::string_view label);

/// The ten named kinds in the order PF, PFL, TPF, TPFL, rPF, rPFL, BD, BDL,
/// rBD, rBDL.
const std::array<TopologyKind, 10>& named_kinds();

bool is_look_ahead(TopologyKind kind);
bool is_bidirectional(TopologyKind kind);

class Topology {
 public:
  /// Validates the invariants (square 0/1 adjacency with zero diagonal, 0/1
  /// pinning of matching length, symmetry for bidirectional kinds).
  /// Throws InvalidArgument on violation.
  Topology(Eigen::MatrixXi adjacency, Eigen::VectorXi pinning,
           TopologyKind kind = TopologyKind::kCustom, int range = 1);

  int n_followers() const { return static_cast<int>(pinning_.size()); }
  const Eigen::MatrixXi& adjacency() const { return adjacency_; }
  const Eigen::VectorXi& pinning() const { return pinning_; }
  TopologyKind kind() const { return kind_; }
  int range() const { return range_; }

  /// In-degree d_i of each follower.
  Eigen::VectorXd degree() const;
  /// L = D - A.
  Eigen::MatrixXd laplacian() const;
  /// M = L + P.
  Eigen::MatrixXd coupling_matrix() const;

  /// Neighbour set of follower i (1-based), ascending; 0 stands for the leader.
  std::vector<int> neighbors(int follower) const;

  friend bool operator==(const Topology& a, const Topology& b);

 private:
  Eigen::MatrixXi adjacency_;
  Eigen::VectorXi pinning_;
  TopologyKind kind_;
  int range_;
};

/// Canonical graph of a named kind. `range` is only read by rPF, rPFL, rBD and
/// rBDL; PF/PFL/BD/BDL use 1 and TPF/TPFL use 2. Windows are truncated at the
/// platoon edges.
Topology build_named(TopologyKind kind, int n_followers, int range = 1);

/// True iff every follower is reachable from the leader along pinning and
/// adjacency edges (information flows j -> i when a_ij = 1).
bool has_leader_spanning_tree(const Topology& topology);

struct CouplingSpectrum {
  Eigen::MatrixXd matrix;
  /// Sorted by ascending real part, ties by ascending imaginary part.
  std::vector<std::complex<double>> eigenvalues;
  double min_eig = 0.0;  // over real parts
  double max_eig = 0.0;
  bool is_triangular = false;
  bool is_symmetric = false;
};

/// Spectrum of L + P. Triangular matrices are read off the diagonal, symmetric
/// ones go through a self-adjoint solver, anything else through a general
/// solver applied per strongly connected component. Throws StructuralError
/// when the leader does not reach every follower.
CouplingSpectrum coupling_spectrum(const Topology& topology);

/// Every eigenvalue lies in the union of the Gershgorin disks of the matrix
/// and has a non-negative real part.
bool gershgorin_certificate(const CouplingSpectrum& spectrum);

/// Plain-text form: `N r kind`, N adjacency rows, one pinning row.
void write_topology(std::ostream& out, const Topology& topology);
Topology read_topology(std::istream& in);

}  // namespace platoon
