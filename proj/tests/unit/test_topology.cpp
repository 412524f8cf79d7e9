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

#include <sstream>

#include <catch_amalgamated.hpp>

#include "oracles.hpp"
#include "platoon/errors.hpp"
#include "platoon/topology.hpp"

using namespace platoon;
using Catch::Approx;

namespace {

std::set<int> heard_by(const Topology& t, int i) {
  std::set<int> out;
  for (int j = 0; j < t.n_followers(); ++j) {
    if (t.adjacency()(i - 1, j) == 1) out.insert(j + 1);
  }
  return out;
}

}  // namespace

TEST_CASE("named topologies match their definitions", "[topology]") {
  SECTION("PF, N=3") {
    const auto t = build_named(TopologyKind::kPF, 3);
    CHECK(heard_by(t, 1).empty());
    CHECK(heard_by(t, 2) == std::set<int>{1});
    CHECK(heard_by(t, 3) == std::set<int>{2});
    CHECK(t.pinning() == Eigen::Vector3i(1, 0, 0));
  }
  SECTION("PFL, N=3") {
    const auto t = build_named(TopologyKind::kPFL, 3);
    CHECK(heard_by(t, 3) == std::set<int>{2});
    CHECK(t.pinning() == Eigen::Vector3i(1, 1, 1));
  }
  SECTION("BD, N=3") {
    const auto t = build_named(TopologyKind::kBD, 3);
    CHECK(heard_by(t, 1) == std::set<int>{2});
    CHECK(heard_by(t, 2) == std::set<int>{1, 3});
    CHECK(heard_by(t, 3) == std::set<int>{2});
    CHECK(t.pinning() == Eigen::Vector3i(1, 0, 0));
  }
  SECTION("neighbour lists include the leader as 0") {
    const auto t = build_named(TopologyKind::kTPFL, 4);
    CHECK(t.neighbors(1) == std::vector<int>{0});
    CHECK(t.neighbors(2) == std::vector<int>{0, 1});
    CHECK(t.neighbors(4) == std::vector<int>{0, 2, 3});
  }
}

TEST_CASE("every kind, size and range agrees with the oracle", "[topology][property]") {
  for (TopologyKind kind : named_kinds()) {
    for (int n = 1; n <= 12; ++n) {
      for (int r = 1; r <= n; ++r) {
        const auto t = build_named(kind, n, r);
        const auto m = oracle::coupling(kind, n, t.range());
        const Eigen::MatrixXd cm = t.coupling_matrix();
        for (int i = 0; i < n; ++i) {
          CHECK(t.adjacency()(i, i) == 0);
          CHECK(t.pinning()(i) == (oracle::pinned(kind, i + 1) ? 1 : 0));
          for (int j = 0; j < n; ++j) {
            REQUIRE(cm(i, j) == m[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
          }
        }
        CHECK((t.laplacian().rowwise().sum().array() == 0.0).all());
        if (is_bidirectional(kind)) CHECK(t.adjacency() == t.adjacency().transpose());
        CHECK(build_named(kind, n, r) == t);
        CHECK(has_leader_spanning_tree(t));
        CHECK(gershgorin_certificate(coupling_spectrum(t)));
      }
    }
  }
}

TEST_CASE("spectra", "[topology]") {
  SECTION("triangular kinds read off the diagonal") {
    const auto pf = coupling_spectrum(build_named(TopologyKind::kPF, 3));
    CHECK(pf.is_triangular);
    for (const auto& z : pf.eigenvalues) CHECK(z == std::complex<double>(1.0, 0.0));
    const auto pfl = coupling_spectrum(build_named(TopologyKind::kPFL, 3));
    REQUIRE(pfl.eigenvalues.size() == 3);
    CHECK(pfl.eigenvalues[0].real() == 1.0);
    CHECK(pfl.eigenvalues[1].real() == 2.0);
    CHECK(pfl.eigenvalues[2].real() == 2.0);
  }
  SECTION("BD, N=3 against the characteristic polynomial") {
    // det(sI - M) for M = [[2,-1,0],[-1,2,-1],[0,-1,1]] is s^3 - 5s^2 + 6s - 1.
    auto roots = oracle::poly_roots({1.0, -5.0, 6.0, -1.0});
    std::sort(roots.begin(), roots.end(),
              [](auto a, auto b) { return a.real() < b.real(); });
    const auto s = coupling_spectrum(build_named(TopologyKind::kBD, 3));
    CHECK(s.is_symmetric);
    for (int k = 0; k < 3; ++k) {
      CHECK(s.eigenvalues[static_cast<std::size_t>(k)].real() ==
            Approx(roots[static_cast<std::size_t>(k)].real()).margin(1e-12));
    }
    CHECK(s.eigenvalues[0].real() == Approx(0.198).margin(1e-3));
    CHECK(s.eigenvalues[2].real() == Approx(3.247).margin(1e-3));
    CHECK(s.max_eig <= 4.0);  // largest Gershgorin disk reaches 2 + 2
  }
  SECTION("closed forms for the tridiagonal BD and BDL matrices") {
    const int n = 9;
    const double pi = std::acos(-1.0);
    const auto bd = coupling_spectrum(build_named(TopologyKind::kBD, n));
    const auto bdl = coupling_spectrum(build_named(TopologyKind::kBDL, n));
    for (int k = 1; k <= n; ++k) {
      CHECK(bd.eigenvalues[static_cast<std::size_t>(k - 1)].real() ==
            Approx(2.0 - 2.0 * std::cos((2.0 * k - 1.0) * pi / (2.0 * n + 1.0))).margin(1e-12));
      CHECK(bdl.eigenvalues[static_cast<std::size_t>(k - 1)].real() ==
            Approx(3.0 - 2.0 * std::cos((k - 1.0) * pi / n)).margin(1e-12));
    }
  }
  SECTION("undirected kinds match a Jacobi eigensolver") {
    for (TopologyKind kind : {TopologyKind::kBD, TopologyKind::kBDL,
                              TopologyKind::kRBD, TopologyKind::kRBDL}) {
      for (int n = 1; n <= 10; ++n) {
        const int r = std::min(n, 3);
        const auto t = build_named(kind, n, r);
        const auto s = coupling_spectrum(t);
        const auto ref = oracle::jacobi_eigenvalues(oracle::coupling(kind, n, t.range()));
        for (std::size_t k = 0; k < ref.size(); ++k) {
          CHECK(s.eigenvalues[k].real() == Approx(ref[k]).margin(1e-10));
          CHECK(std::abs(s.eigenvalues[k].imag()) <= 1e-9);
          CHECK(s.eigenvalues[k].real() > 0.0);
        }
        CHECK(s.min_eig <= s.max_eig);
      }
    }
  }
  SECTION("triangular eigenvalues are non-negative integers") {
    for (TopologyKind kind : named_kinds()) {
      if (!is_look_ahead(kind)) continue;
      const auto s = coupling_spectrum(build_named(kind, 8, 3));
      CHECK(s.is_triangular);
      for (const auto& z : s.eigenvalues) {
        CHECK(z.real() == std::round(z.real()));
        CHECK(z.real() >= 0.0);
      }
    }
  }
}

TEST_CASE("spanning tree and structural errors", "[topology]") {
  CHECK(has_leader_spanning_tree(build_named(TopologyKind::kPF, 5)));
  Eigen::MatrixXi adj = build_named(TopologyKind::kPF, 3).adjacency();
  const Topology orphan(adj, Eigen::VectorXi::Zero(3));
  CHECK_FALSE(has_leader_spanning_tree(orphan));
  CHECK_THROWS_AS(coupling_spectrum(orphan), StructuralError);

  CHECK_THROWS_AS(build_named(TopologyKind::kPF, 0), InvalidArgument);
  CHECK_THROWS_AS(build_named(TopologyKind::kRPF, 4, 0), InvalidArgument);
  CHECK_THROWS_AS(build_named(TopologyKind::kRBD, 3, 4), InvalidArgument);
  CHECK_THROWS_AS(parse_topology_kind("ring"), InvalidArgument);
  CHECK(parse_topology_kind("rbdl") == TopologyKind::kRBDL);

  Eigen::MatrixXi self = Eigen::MatrixXi::Zero(2, 2);
  self(0, 0) = 1;
  CHECK_THROWS_AS(Topology(self, Eigen::VectorXi::Ones(2)), InvalidArgument);
  Eigen::MatrixXi two = Eigen::MatrixXi::Zero(2, 2);
  two(1, 0) = 2;
  CHECK_THROWS_AS(Topology(two, Eigen::VectorXi::Ones(2)), InvalidArgument);
}

TEST_CASE("general digraphs are solved but not flagged triangular or symmetric",
          "[topology]") {
  Eigen::MatrixXi adj = Eigen::MatrixXi::Zero(3, 3);
  adj(0, 2) = 1;  // 1 hears 3
  adj(1, 0) = 1;
  adj(2, 1) = 1;
  const Topology ring(adj, Eigen::Vector3i(1, 0, 0));
  const auto s = coupling_spectrum(ring);
  CHECK_FALSE(s.is_triangular);
  CHECK_FALSE(s.is_symmetric);
  CHECK(gershgorin_certificate(s));
  // Trace is preserved: 2 + 1 + 1.
  std::complex<double> sum = 0.0;
  for (const auto& z : s.eigenvalues) sum += z;
  CHECK(sum.real() == Approx(4.0).margin(1e-12));
  CHECK(sum.imag() == Approx(0.0).margin(1e-12));
}

TEST_CASE("plain-text round trip", "[topology]") {
  for (TopologyKind kind : named_kinds()) {
    const auto t = build_named(kind, 6, 2);
    std::stringstream io;
    write_topology(io, t);
    const Topology back = read_topology(io);
    CHECK(back == t);
    CHECK(back.kind() == t.kind());
    CHECK(back.range() == t.range());
  }
  std::stringstream first_line;
  write_topology(first_line, build_named(TopologyKind::kPF, 2));
  std::string header;
  std::getline(first_line, header);
  CHECK(header == "2 1 PF");

  std::stringstream bad("2 1 PF\n0 1\n");
  CHECK_THROWS_AS(read_topology(bad), InvalidArgument);
}
