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

#include "qutomo/measurement.hpp"

#include <cmath>

#include "qutomo/errors.hpp"

namespace qutomo {

MeasurementGrid measure(const DensityMatrix& rho, const ProjectorGrid& grid) {
    MeasurementGrid out;
    const CMatrix& r = rho.matrix();
    for (std::size_t row = 0; row < 6; ++row) {
        for (std::size_t col = 0; col < 6; ++col) {
            const CMatrix& p = grid.at(row, col);
            Complex tr = 0.0;
            for (std::size_t i = 0; i < 4; ++i) {
                for (std::size_t k = 0; k < 4; ++k) {
                    tr += r(i, k) * p(k, i);
                }
            }
            if (std::abs(tr.imag()) > 1e-10) {
                throw NumericalFailure(
                    "measure: Tr(rho P) has a non-real residue above 1e-10");
            }
            out.set(row, col, tr.real(), true);
        }
    }
    return out;
}

MeasurementGrid mask_measurements(const MeasurementGrid& g, int keep) {
    if (keep < 1 || keep > 36) {
        throw BadCount("mask_measurements: keep must be in [1, 36]");
    }
    MeasurementGrid out = g;
    for (std::size_t i = static_cast<std::size_t>(keep); i < 36; ++i) {
        out.set(i / 6, i % 6, 0.0, false);
    }
    return out;
}

MeasurementGrid mask_measurements(const MeasurementGrid& g,
                                  std::span<const int> keep_indices) {
    if (keep_indices.empty() || keep_indices.size() > 36) {
        throw BadCount("mask_measurements: kept-index set size must be in [1, 36]");
    }
    std::array<bool, 36> kept{};
    for (int idx : keep_indices) {
        if (idx < 0 || idx >= 36) {
            throw BadCount("mask_measurements: index outside [0, 36)");
        }
        kept[static_cast<std::size_t>(idx)] = true;
    }
    MeasurementGrid out = g;
    for (std::size_t i = 0; i < 36; ++i) {
        if (!kept[i]) {
            out.set(i / 6, i % 6, 0.0, false);
        }
    }
    return out;
}

}  // namespace qutomo
