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

#include "platoon/topology.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <istream>
#include <ostream>
#include <queue>
#include <sstream>
#include <string>

#include "platoon/errors.hpp"
#include "platoon/linalg.hpp"

namespace platoon {
namespace {

constexpr std::array<std::pair<TopologyKind, std::string_view>, 11> kLabels{{
    {TopologyKind::kPF, "PF"},
    {TopologyKind::kPFL, "PFL"},
    {TopologyKind::kTPF, "TPF"},
    {TopologyKind::kTPFL, "TPFL"},
    {TopologyKind::kRPF, "rPF"},
    {TopologyKind::kRPFL, "rPFL"},
    {TopologyKind::kBD, "BD"},
    {TopologyKind::kBDL, "BDL"},
    {TopologyKind::kRBD, "rBD"},
    {TopologyKind::kRBDL, "rBDL"},
    {TopologyKind::kCustom, "custom"},
}};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool is_generalized(TopologyKind kind) {
  return kind == TopologyKind::kRPF || kind == TopologyKind::kRPFL ||
         kind == TopologyKind::kRBD || kind == TopologyKind::kRBDL;
}

bool pins_everyone(TopologyKind kind) {
  return kind == TopologyKind::kPFL || kind == TopologyKind::kTPFL ||
         kind == TopologyKind::kRPFL || kind == TopologyKind::kBDL ||
         kind == TopologyKind::kRBDL;
}

int effective_range(TopologyKind kind, int range) {
  switch (kind) {
    case TopologyKind::kTPF:
    case TopologyKind::kTPFL:
      return 2;
    case TopologyKind::kRPF:
    case TopologyKind::kRPFL:
    case TopologyKind::kRBD:
    case TopologyKind::kRBDL:
      return range;
    default:
      return 1;
  }
}

}  // namespace

std::string_view to_string(TopologyKind kind) {
  for (const auto& [k, label] : kLabels) {
    if (k == kind) return label;
  }
  return "custom";
}

TopologyKind parse_topology_kind(std::string_view label) {
  for (const auto& [k, name] : kLabels) {
    if (iequals(name, label)) return k;
  }
  throw InvalidArgument("unknown topology kind '" + std::string(label) + "'");
}

const std::array<TopologyKind, 10>& named_kinds() {
  static constexpr std::array<TopologyKind, 10> kinds{
      TopologyKind::kPF,  TopologyKind::kPFL,  TopologyKind::kTPF,
      TopologyKind::kTPFL, TopologyKind::kRPF, TopologyKind::kRPFL,
      TopologyKind::kBD,  TopologyKind::kBDL,  TopologyKind::kRBD,
      TopologyKind::kRBDL};
  return kinds;
}

bool is_look_ahead(TopologyKind kind) {
  return kind == TopologyKind::kPF || kind == TopologyKind::kPFL ||
         kind == TopologyKind::kTPF || kind == TopologyKind::kTPFL ||
         kind == TopologyKind::kRPF || kind == TopologyKind::kRPFL;
}

bool is_bidirectional(TopologyKind kind) {
  return kind == TopologyKind::kBD || kind == TopologyKind::kBDL ||
         kind == TopologyKind::kRBD || kind == TopologyKind::kRBDL;
}

Topology::Topology(Eigen::MatrixXi adjacency, Eigen::VectorXi pinning,
                   TopologyKind kind, int range)
    : adjacency_(std::move(adjacency)),
      pinning_(std::move(pinning)),
      kind_(kind),
      range_(range) {
  const auto n = pinning_.size();
  if (n < 1) throw InvalidArgument("topology needs at least one follower");
  if (range_ < 1) throw InvalidArgument("communication range must be >= 1");
  if (adjacency_.rows() != n || adjacency_.cols() != n) {
    throw InvalidArgument("adjacency must be N x N with N = pinning length");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (pinning_(i) != 0 && pinning_(i) != 1) {
      throw InvalidArgument("pinning entries must be 0 or 1");
    }
    if (adjacency_(i, i) != 0) {
      throw InvalidArgument("adjacency diagonal must be zero");
    }
    for (Eigen::Index j = 0; j < n; ++j) {
      if (adjacency_(i, j) != 0 && adjacency_(i, j) != 1) {
        throw InvalidArgument("adjacency entries must be 0 or 1");
      }
    }
  }
  if (is_bidirectional(kind_) && adjacency_ != adjacency_.transpose()) {
    throw InvalidArgument("bidirectional topology needs symmetric adjacency");
  }
}

Eigen::VectorXd Topology::degree() const {
  return adjacency_.cast<double>().rowwise().sum();
}

Eigen::MatrixXd Topology::laplacian() const {
  Eigen::MatrixXd lap = -adjacency_.cast<double>();
  lap.diagonal() += degree();
  return lap;
}

Eigen::MatrixXd Topology::coupling_matrix() const {
  Eigen::MatrixXd m = laplacian();
  m.diagonal() += pinning_.cast<double>();
  return m;
}

std::vector<int> Topology::neighbors(int follower) const {
  if (follower < 1 || follower > n_followers()) {
    throw InvalidArgument("follower index out of range");
  }
  std::vector<int> out;
  if (pinning_(follower - 1) == 1) out.push_back(0);
  for (int j = 1; j <= n_followers(); ++j) {
    if (adjacency_(follower - 1, j - 1) == 1) out.push_back(j);
  }
  return out;
}

bool operator==(const Topology& a, const Topology& b) {
  return a.kind_ == b.kind_ && a.range_ == b.range_ &&
         a.pinning_ == b.pinning_ && a.adjacency_ == b.adjacency_;
}

Topology build_named(TopologyKind kind, int n_followers, int range) {
  if (kind == TopologyKind::kCustom) {
    throw InvalidArgument("custom topologies are not built by name");
  }
  if (n_followers < 1) throw InvalidArgument("n_followers must be >= 1");
  if (range < 1) throw InvalidArgument("range must be >= 1");
  if (is_generalized(kind) && range > n_followers) {
    throw InvalidArgument("range must not exceed n_followers");
  }
  const int r = effective_range(kind, range);
  const int n = n_followers;

  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = std::max(0, i - r); j < i; ++j) adj(i, j) = 1;
    if (is_bidirectional(kind)) {
      for (int j = i + 1; j <= std::min(n - 1, i + r); ++j) adj(i, j) = 1;
    }
  }

  Eigen::VectorXi pin = Eigen::VectorXi::Zero(n);
  if (pins_everyone(kind)) {
    pin.setOnes();
  } else {
    pin(0) = 1;
    // The second follower has only one predecessor; the leader fills in.
    if (kind == TopologyKind::kTPF && n > 1) pin(1) = 1;
  }
  return Topology(std::move(adj), std::move(pin), kind, r);
}

bool has_leader_spanning_tree(const Topology& topology) {
  const int n = topology.n_followers();
  std::vector<bool> reached(static_cast<std::size_t>(n), false);
  std::queue<int> frontier;
  for (int i = 0; i < n; ++i) {
    if (topology.pinning()(i) == 1) {
      reached[static_cast<std::size_t>(i)] = true;
      frontier.push(i);
    }
  }
  while (!frontier.empty()) {
    const int j = frontier.front();
    frontier.pop();
    for (int i = 0; i < n; ++i) {
      if (!reached[static_cast<std::size_t>(i)] &&
          topology.adjacency()(i, j) == 1) {
        reached[static_cast<std::size_t>(i)] = true;
        frontier.push(i);
      }
    }
  }
  return std::all_of(reached.begin(), reached.end(), [](bool b) { return b; });
}

CouplingSpectrum coupling_spectrum(const Topology& topology) {
  if (!has_leader_spanning_tree(topology)) {
    throw StructuralError(
        "leader does not reach every follower; L + P may be singular");
  }
  CouplingSpectrum out;
  out.matrix = topology.coupling_matrix();
  const auto& m = out.matrix;
  const bool lower = m.isLowerTriangular(0.0);
  const bool upper = m.isUpperTriangular(0.0);
  out.is_triangular = lower || upper;
  out.is_symmetric = (m == m.transpose());

  if (out.is_triangular) {
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out.eigenvalues.emplace_back(m(i, i), 0.0);
    }
  } else if (out.is_symmetric) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(
        m, Eigen::EigenvaluesOnly);
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
      out.eigenvalues.emplace_back(solver.eigenvalues()(i), 0.0);
    }
  } else {
    out.eigenvalues = block_triangular_eigenvalues(m);
  }
  std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
            [](const std::complex<double>& a, const std::complex<double>& b) {
              if (a.real() != b.real()) return a.real() < b.real();
              return a.imag() < b.imag();
            });
  out.min_eig = out.eigenvalues.front().real();
  out.max_eig = out.eigenvalues.back().real();
  return out;
}

bool gershgorin_certificate(const CouplingSpectrum& spectrum) {
  const auto& m = spectrum.matrix;
  constexpr double kTol = 1e-9;
  for (const auto& lambda : spectrum.eigenvalues) {
    if (lambda.real() < -kTol) return false;
    bool inside = false;
    for (Eigen::Index i = 0; i < m.rows() && !inside; ++i) {
      const double radius = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
      inside = std::abs(lambda - m(i, i)) <=
               radius + kTol * (1.0 + std::abs(m(i, i)) + radius);
    }
    if (!inside) return false;
  }
  return true;
}

void write_topology(std::ostream& out, const Topology& topology) {
  const int n = topology.n_followers();
  out << n << ' ' << topology.range() << ' ' << to_string(topology.kind())
      << '\n';
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      out << (j ? " " : "") << topology.adjacency()(i, j);
    }
    out << '\n';
  }
  for (int i = 0; i < n; ++i) {
    out << (i ? " " : "") << topology.pinning()(i);
  }
  out << '\n';
}

Topology read_topology(std::istream& in) {
  int n = 0;
  int range = 0;
  std::string label;
  if (!(in >> n >> range >> label)) {
    throw InvalidArgument("topology file: expected header 'N r kind'");
  }
  if (n < 1) throw InvalidArgument("topology file: N must be >= 1");
  const TopologyKind kind = parse_topology_kind(label);
  Eigen::MatrixXi adj(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (!(in >> adj(i, j))) {
        throw InvalidArgument("topology file: truncated adjacency matrix");
      }
    }
  }
  Eigen::VectorXi pin(n);
  for (int i = 0; i < n; ++i) {
    if (!(in >> pin(i))) {
      throw InvalidArgument("topology file: truncated pinning row");
    }
  }
  return Topology(std::move(adj), std::move(pin), kind, range);
}

}  // namespace platoon
