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

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace platoon {

using ComplexVector = std::vector<std::complex<double>>;

/// Eigenvalues of a square matrix, computed per strongly connected component
/// of its sparsity graph. Triangular structure is therefore exploited and
/// repeated eigenvalues that sit in different diagonal blocks stay exact.
ComplexVector block_triangular_eigenvalues(const Eigen::MatrixXd& matrix);

}  // namespace platoon
