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

#include "qutomo/complex_matrix.hpp"
#include "qutomo/states.hpp"

namespace qutomo {

/// Hermitian square root of a density matrix. Eigenvalues in [-1e-10, 0)
/// are clamped to 0 before the square root.
CMatrix psd_sqrt(const DensityMatrix& rho);

/// Uhlmann fidelity |Tr sqrt(sqrt(a) b sqrt(a))|^2, clamped to [0, 1].
/// Eigenvalues of the inner product matrix below 1e-13 of its trace are
/// treated as zero, so rank-deficient (pure) inputs do not accumulate
/// sqrt-of-roundoff noise.
double fidelity(const DensityMatrix& a, const DensityMatrix& b);

}  // namespace qutomo
