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

#include "platoon/linalg.hpp"

#include <boost/graph/adjacency_list.hpp>
#include <boost/graph/strong_components.hpp>

#include "platoon/errors.hpp"

namespace platoon {

ComplexVector block_triangular_eigenvalues(const Eigen::MatrixXd& matrix) {
  if (matrix.rows() != matrix.cols()) {
    throw InvalidArgument("eigenvalues need a square matrix");
  }
  using Graph =
      boost::adjacency_list<boost::vecS, boost::vecS, boost::directedS>;
  const auto n = static_cast<std::size_t>(matrix.rows());
  Graph g(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && matrix(static_cast<Eigen::Index>(i),
                           static_cast<Eigen::Index>(j)) != 0.0) {
        boost::add_edge(j, i, g);
      }
    }
  }
  std::vector<int> component(n);
  const int count = boost::strong_components(
      g, boost::make_iterator_property_map(
             component.begin(), boost::get(boost::vertex_index, g)));

  std::vector<std::vector<Eigen::Index>> members(
      static_cast<std::size_t>(count));
  for (std::size_t v = 0; v < n; ++v) {
    members[static_cast<std::size_t>(component[v])].push_back(
        static_cast<Eigen::Index>(v));
  }

  ComplexVector out;
  out.reserve(n);
  for (const auto& idx : members) {
    const auto m = static_cast<Eigen::Index>(idx.size());
    if (m == 1) {
      out.emplace_back(matrix(idx[0], idx[0]), 0.0);
      continue;
    }
    Eigen::MatrixXd sub(m, m);
    for (Eigen::Index a = 0; a < m; ++a) {
      for (Eigen::Index b = 0; b < m; ++b) sub(a, b) = matrix(idx[a], idx[b]);
    }
    Eigen::EigenSolver<Eigen::MatrixXd> solver(sub, false);
    if (solver.info() != Eigen::Success) {
      throw NumericalFailure("eigensolver did not converge");
    }
    for (Eigen::Index k = 0; k < m; ++k) out.push_back(solver.eigenvalues()(k));
  }
  return out;
}

}  // namespace platoon
