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

#include "qutomo/projectors.hpp"

#include <cmath>

#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

CMatrix ket_projector(Complex a0, Complex a1) {
    CMatrix m(2, 2);
    m(0, 0) = a0 * std::conj(a0);
    m(0, 1) = a0 * std::conj(a1);
    m(1, 0) = a1 * std::conj(a0);
    m(1, 1) = a1 * std::conj(a1);
    return m;
}

const SingleQubitProjector& find_projector(char label) {
    static const std::array<SingleQubitProjector, 6> basis = basis_projectors();
    for (const SingleQubitProjector& p : basis) {
        if (p.label == label) {
            return p;
        }
    }
    throw InvalidArgument("unknown projector label");
}

}  // namespace

std::array<SingleQubitProjector, 6> basis_projectors() {
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    return {{
        {'h', ket_projector(1.0, 0.0)},
        {'v', ket_projector(0.0, 1.0)},
        {'d', ket_projector(inv_sqrt2, inv_sqrt2)},
        {'a', ket_projector(inv_sqrt2, -inv_sqrt2)},
        {'r', ket_projector(inv_sqrt2, Complex(0.0, inv_sqrt2))},
        {'l', ket_projector(inv_sqrt2, Complex(0.0, -inv_sqrt2))},
    }};
}

const std::array<const char*, 36> kCoincidenceOrder = {
    "hh", "hv", "vv", "vh", "vr", "vl",  //
    "hl", "hr", "hd", "ha", "va", "vd",  //
    "ad", "aa", "da", "dd", "dr", "dl",  //
    "al", "ar", "ah", "av", "dv", "dh",  //
    "rh", "rv", "lv", "lh", "lr", "ll",  //
    "rl", "rr", "rd", "ra", "la", "ld",  //
};

ProjectorGrid::ProjectorGrid() {
    for (std::size_t i = 0; i < 36; ++i) {
        const char* pair = kCoincidenceOrder[i];
        cells_[i] = CMatrix::kron(find_projector(pair[0]).m, find_projector(pair[1]).m);
    }
}

const ProjectorGrid& projector_grid() {
    static const ProjectorGrid grid;
    return grid;
}

CMatrix random_rotation(Rng& rng, const NoiseParams& noise) {
    if (!(noise.sigma >= 0.0)) {
        throw InvalidArgument("random_rotation: sigma must be >= 0");
    }
    const double t = noise.sigma * rng.next_gaussian();
    const double p = noise.sigma * rng.next_gaussian();
    const double x = noise.sigma * rng.next_gaussian();

    const double ct = std::cos(t);
    const double st = std::sin(t);
    CMatrix u(2, 2);
    u(0, 0) = std::polar(1.0, p / 2.0) * ct;
    u(0, 1) = Complex(0.0, -1.0) * std::polar(1.0, x) * st;
    u(1, 0) = Complex(0.0, -1.0) * std::polar(1.0, -x) * st;
    u(1, 1) = std::polar(1.0, -p / 2.0) * ct;
    return u;
}

ProjectorGrid noisy_projector_grid(Rng& rng, const NoiseParams& noise) {
    ProjectorGrid grid;
    for (std::size_t row = 0; row < 6; ++row) {
        for (std::size_t col = 0; col < 6; ++col) {
            const char* pair = kCoincidenceOrder[row * 6 + col];
            const CMatrix& first = find_projector(pair[0]).m;
            const CMatrix& second = find_projector(pair[1]).m;
            const CMatrix u = random_rotation(rng, noise);
            grid.at(row, col) = CMatrix::kron(first, u * second * u.adjoint());
        }
    }
    return grid;
}

}  // namespace qutomo
