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

#include "qutomo/measurement.hpp"

namespace qutomo {

/// The 16 expansion coefficients s_lk of a two-qubit state in the
/// (I, sigma_x, sigma_y, sigma_z) x (same) basis, l,k in {0..3}.
struct StokesParams {
    std::array<double, 16> s{};

    double& at(std::size_t l, std::size_t k) { return s[l * 4 + k]; }
    double at(std::size_t l, std::size_t k) const { return s[l * 4 + k]; }
};

/// Each s_lk is a fixed +/- combination of four grid cells; masked grids
/// contribute zeros, which degrades the estimate exactly as zero-padding
/// does. No renormalization is attempted.
StokesParams stokes_params(const MeasurementGrid& g);

/// rho_recons = (1/4) sum_lk s_lk (sigma_l x sigma_k). Always Hermitian with
/// trace s_00; NOT guaranteed PSD for noisy or masked input.
CMatrix stokes_reconstruct(const MeasurementGrid& g);

struct PhysicalizeResult {
    DensityMatrix rho;
    /// Smallest eigenvalue of the input before clamping; negative values
    /// quantify how unphysical the reconstruction was.
    double min_eigenvalue_before;
};

/// Project a Hermitian matrix onto the physical set: clamp negative
/// eigenvalues to zero and renormalize the trace to one. If everything
/// clamps to zero the maximally mixed state is returned. Input must be
/// Hermitian within 1e-9.
PhysicalizeResult physicalize_with_diagnostics(const CMatrix& hermitian);

DensityMatrix physicalize(const CMatrix& hermitian);

}  // namespace qutomo
