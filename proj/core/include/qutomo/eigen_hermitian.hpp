// Copyright 2026 The qutomo Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <vector>

#include "qutomo/complex_matrix.hpp"

namespace qutomo {

struct EigenSystem {
    /// Ascending.
    std::vector<double> eigenvalues;
    /// Column k is the eigenvector of eigenvalues[k]; unitary as a whole.
    CMatrix eigenvectors;
};

/// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
/// Convergence: off-diagonal Frobenius norm < 1e-13, capped at 100 sweeps
/// (throws NumericalFailure at the cap). Requires hermiticity defect < 1e-9.
EigenSystem hermitian_eig(const CMatrix& h);

/// V diag(f(lambda)) V^dagger for a scalar map applied to the spectrum.
CMatrix recompose(const EigenSystem& es, const std::vector<double>& mapped);

}  // namespace qutomo
