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

#include "qutomo/stokes.hpp"

#include <cmath>

#include "qutomo/eigen_hermitian.hpp"
#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

// sigma_0 = I, sigma_1 = x, sigma_2 = y, sigma_3 = z.
CMatrix pauli(std::size_t i) {
    CMatrix m(2, 2);
    switch (i) {
        case 0:
            m(0, 0) = 1.0;
            m(1, 1) = 1.0;
            break;
        case 1:
            m(0, 1) = 1.0;
            m(1, 0) = 1.0;
            break;
        case 2:
            m(0, 1) = Complex(0.0, -1.0);
            m(1, 0) = Complex(0.0, 1.0);
            break;
        default:
            m(0, 0) = 1.0;
            m(1, 1) = -1.0;
            break;
    }
    return m;
}

const std::array<CMatrix, 16>& pauli_kron_basis() {
    static const std::array<CMatrix, 16> basis = [] {
        std::array<CMatrix, 16> b;
        for (std::size_t l = 0; l < 4; ++l) {
            for (std::size_t k = 0; k < 4; ++k) {
                b[l * 4 + k] = CMatrix::kron(pauli(l), pauli(k));
            }
        }
        return b;
    }();
    return basis;
}

}  // namespace

StokesParams stokes_params(const MeasurementGrid& g) {
    auto m = [&g](std::size_t r, std::size_t c) { return g.value(r, c); };
    StokesParams p;
    // Each parameter is the expectation of sigma_l x sigma_k written out in
    // the +/- basis cells of the coincidence order, e.g. sigma_z = h - v,
    // sigma_x = d - a, sigma_y = r - l on either factor.
    p.at(0, 0) = m(0, 0) + m(0, 1) + m(0, 3) + m(0, 2);
    p.at(1, 1) = m(2, 3) - m(2, 2) - m(2, 0) + m(2, 1);
    p.at(1, 2) = m(2, 4) - m(2, 5) - m(3, 1) + m(3, 0);
    p.at(1, 3) = m(3, 5) - m(3, 4) - m(3, 2) + m(3, 3);
    p.at(2, 1) = m(5, 2) - m(5, 3) - m(5, 5) + m(5, 4);
    p.at(2, 2) = m(5, 1) - m(5, 0) - m(4, 4) + m(4, 5);
    p.at(2, 3) = m(4, 0) - m(4, 1) - m(4, 3) + m(4, 2);
    p.at(3, 1) = m(1, 2) - m(1, 3) - m(1, 5) + m(1, 4);
    p.at(3, 2) = m(1, 1) - m(1, 0) - m(0, 4) + m(0, 5);
    p.at(3, 3) = m(0, 0) - m(0, 1) - m(0, 3) + m(0, 2);
    p.at(0, 1) = m(2, 3) - m(2, 2) + m(2, 0) - m(2, 1);
    p.at(0, 2) = m(5, 1) + m(4, 4) - m(5, 0) - m(4, 5);
    p.at(0, 3) = m(0, 0) - m(0, 1) + m(0, 3) - m(0, 2);
    p.at(1, 0) = m(2, 3) + m(2, 2) - m(2, 0) - m(2, 1);
    p.at(2, 0) = m(5, 1) - m(4, 4) + m(5, 0) - m(4, 5);
    p.at(3, 0) = m(0, 0) + m(0, 1) - m(0, 3) - m(0, 2);
    return p;
}

CMatrix stokes_reconstruct(const MeasurementGrid& g) {
    const StokesParams p = stokes_params(g);
    const std::array<CMatrix, 16>& basis = pauli_kron_basis();
    CMatrix out(4, 4);
    for (std::size_t i = 0; i < 16; ++i) {
        const double coeff = 0.25 * p.s[i];
        const CMatrix& b = basis[i];
        for (std::size_t r = 0; r < 4; ++r) {
            for (std::size_t c = 0; c < 4; ++c) {
                out(r, c) += coeff * b(r, c);
            }
        }
    }
    return out;
}

PhysicalizeResult physicalize_with_diagnostics(const CMatrix& hermitian) {
    if (hermitian.rows() != 4 || hermitian.cols() != 4) {
        throw InvalidArgument("physicalize: matrix must be 4x4");
    }
    if (hermitian.hermiticity_defect() > 1e-9) {
        throw InvalidArgument("physicalize: input is not Hermitian within 1e-9");
    }
    const EigenSystem es = hermitian_eig(hermitian);
    const double min_before = es.eigenvalues.front();

    std::vector<double> clamped(es.eigenvalues.size());
    double total = 0.0;
    for (std::size_t i = 0; i < clamped.size(); ++i) {
        clamped[i] = std::max(es.eigenvalues[i], 0.0);
        total += clamped[i];
    }
    if (total <= 0.0) {
        CMatrix quarter(4, 4);
        for (std::size_t i = 0; i < 4; ++i) {
            quarter(i, i) = 0.25;
        }
        return {DensityMatrix::from_matrix(quarter), min_before};
    }
    for (double& c : clamped) {
        c /= total;
    }
    CMatrix m = recompose(es, clamped);
    // Recomposition leaves ~1e-16 asymmetry and trace drift; tidy both so
    // the strict DensityMatrix tolerances hold.
    CMatrix herm(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            herm(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        }
    }
    const double tr = herm.trace().real();
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            herm(r, c) = herm(r, c) / tr;
        }
    }
    return {DensityMatrix::from_matrix(herm), min_before};
}

DensityMatrix physicalize(const CMatrix& hermitian) {
    return physicalize_with_diagnostics(hermitian).rho;
}

}  // namespace qutomo
