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

#include <array>

#include "qutomo/complex_matrix.hpp"
#include "qutomo/rng.hpp"

namespace qutomo {

/// Rank-1 polarization projector |x><x| for x in {h, v, d, a, r, l}.
struct SingleQubitProjector {
    char label;
    CMatrix m;  // 2x2, Hermitian idempotent trace-1
};

/// The six single-qubit projectors onto H, V, D=(H+V)/sqrt2, A=(H-V)/sqrt2,
/// R=(H+iV)/sqrt2, L=(H-iV)/sqrt2, in that order.
std::array<SingleQubitProjector, 6> basis_projectors();

/// 6x6 grid of two-qubit projectors (first factor x second factor) in the
/// instrument's coincidence-measurement order.
class ProjectorGrid {
  public:
    ProjectorGrid();

    const CMatrix& at(std::size_t row, std::size_t col) const {
        return cells_[row * 6 + col];
    }
    CMatrix& at(std::size_t row, std::size_t col) {
        return cells_[row * 6 + col];
    }

  private:
    std::array<CMatrix, 36> cells_;
};

/// Cell (i, j) measures first[i][j] (x) second[i][j], labels in {h,v,d,a,r,l}.
/// Exposed so callers (and tests) can address factors without rebuilding the
/// matrices.
extern const std::array<const char*, 36> kCoincidenceOrder;

/// The noiseless grid in coincidence order.
const ProjectorGrid& projector_grid();

/// Standard deviation (radians) of the measurement-basis rotation angles.
struct NoiseParams {
    double sigma = 0.0;
};

/// Random basis rotation
///   U(t, p, x) = [[ e^{ip/2} cos t,   -i e^{ix}  sin t ],
///                 [ -i e^{-ix} sin t,  e^{-ip/2} cos t ]]
/// with t, p, x ~ N(0, sigma^2) drawn in that order. Unitary for all angles.
CMatrix random_rotation(Rng& rng, const NoiseParams& noise);

/// The coincidence grid with the SECOND tensor factor of every cell
/// conjugated by an independent random rotation (36 independent draws, cells
/// visited row-major). First factors are untouched.
ProjectorGrid noisy_projector_grid(Rng& rng, const NoiseParams& noise);

}  // namespace qutomo
