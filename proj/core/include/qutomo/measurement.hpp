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
#include <span>

#include "qutomo/projectors.hpp"
#include "qutomo/states.hpp"

namespace qutomo {

/// 6x6 grid of measurement expectation values plus a presence mask.
/// Unmeasured cells hold exactly 0 and mask=false.
class MeasurementGrid {
  public:
    double value(std::size_t row, std::size_t col) const {
        return values_[row * 6 + col];
    }
    bool measured(std::size_t row, std::size_t col) const {
        return mask_[row * 6 + col];
    }

    void set(std::size_t row, std::size_t col, double value, bool measured) {
        values_[row * 6 + col] = value;
        mask_[row * 6 + col] = measured;
    }

    /// Row-major views, used by the network input path and serialization.
    const std::array<double, 36>& values() const { return values_; }
    const std::array<bool, 36>& mask() const { return mask_; }

    bool operator==(const MeasurementGrid& other) const = default;

  private:
    std::array<double, 36> values_{};
    std::array<bool, 36> mask_{};
};

/// m[i][j] = Re Tr(rho * grid[i][j]) with a full mask. An imaginary residue
/// above 1e-10 on any cell trips a NumericalFailure, since the trace is real
/// analytically.
MeasurementGrid measure(const DensityMatrix& rho, const ProjectorGrid& grid);

/// Keep the first `keep` cells in row-major coincidence order; zero the rest
/// and clear their mask bits. keep must be in [1, 36].
MeasurementGrid mask_measurements(const MeasurementGrid& g, int keep);

/// Same, but with an arbitrary kept-index set (row-major indices 0..35).
MeasurementGrid mask_measurements(const MeasurementGrid& g,
                                  std::span<const int> keep_indices);

}  // namespace qutomo
