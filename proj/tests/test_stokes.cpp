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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qutomo/errors.hpp"
#include "qutomo/measurement.hpp"
#include "qutomo/states.hpp"
#include "qutomo/stokes.hpp"

using namespace qutomo;

namespace {

DensityMatrix maximally_mixed() {
    CMatrix q(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        q(i, i) = 0.25;
    }
    return DensityMatrix::from_matrix(q);
}

DensityMatrix bell_phi_plus() {
    const double s = 1.0 / std::sqrt(2.0);
    return pure_state_density(StateVector::from_amplitudes(
        {Complex(s, 0), Complex(0, 0), Complex(0, 0), Complex(s, 0)}));
}

MeasurementGrid random_grid(Rng& rng) {
    MeasurementGrid g;
    for (std::size_t i = 0; i < 36; ++i) {
        g.set(i / 6, i % 6, 2.0 * rng.next_double() - 1.0, true);
    }
    return g;
}

}  // namespace

TEST_CASE("stokes parameters of the maximally mixed state") {
    const StokesParams p =
        stokes_params(measure(maximally_mixed(), projector_grid()));
    CHECK(p.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    for (std::size_t l = 0; l < 4; ++l) {
        for (std::size_t k = 0; k < 4; ++k) {
            if (l == 0 && k == 0) {
                continue;
            }
            CHECK(std::abs(p.at(l, k)) < 1e-12);
        }
    }
}

TEST_CASE("stokes parameters of the Bell state") {
    const StokesParams p =
        stokes_params(measure(bell_phi_plus(), projector_grid()));
    CHECK(p.at(0, 0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.at(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.at(2, 2) == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(p.at(3, 3) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("stokes parameters of an unmeasured grid are all zero") {
    const MeasurementGrid empty;  // all zeros, mask false
    const StokesParams p = stokes_params(empty);
    for (double v : p.s) {
        CHECK(v == 0.0);
    }
}

TEST_CASE("noiseless measurements invert exactly") {
    Rng rng(11);
    double worst = 0.0;
    for (int i = 0; i < 300; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        const CMatrix rec = stokes_reconstruct(measure(rho, projector_grid()));
        worst = std::max(worst, rec.max_abs_diff(rho.matrix()));
    }
    CHECK(worst < 1e-10);

    const CMatrix rec =
        stokes_reconstruct(measure(maximally_mixed(), projector_grid()));
    CHECK(rec.max_abs_diff(maximally_mixed().matrix()) < 1e-14);
}

TEST_CASE("reconstruction from a masked grid stays Hermitian") {
    Rng rng(12);
    const DensityMatrix rho = random_mixed_state(rng);
    // The first four cells are exactly the ones that sum to s00, so a
    // noiseless k=4 prefix still has unit trace; with per-cell rotations
    // the sum is no longer pinned.
    const MeasurementGrid noiseless4 =
        mask_measurements(measure(rho, projector_grid()), 4);
    CHECK(std::abs(stokes_reconstruct(noiseless4).trace().real() - 1.0) <
          1e-12);

    const MeasurementGrid noisy4 = mask_measurements(
        measure(rho, noisy_projector_grid(rng, NoiseParams{0.8})), 4);
    const CMatrix rec = stokes_reconstruct(noisy4);
    CHECK(rec.hermiticity_defect() < 1e-12);
    CHECK(std::abs(rec.trace().real() - 1.0) > 1e-3);

    // A prefix that cuts into the s00 cells loses the trace even without
    // noise.
    const MeasurementGrid noiseless3 =
        mask_measurements(measure(rho, projector_grid()), 3);
    const CMatrix rec3 = stokes_reconstruct(noiseless3);
    CHECK(rec3.hermiticity_defect() < 1e-12);
    CHECK(std::abs(rec3.trace().real() - 1.0) > 1e-3);
}

TEST_CASE("reconstruction is Hermitian for arbitrary grid values") {
    Rng rng(13);
    for (int i = 0; i < 200; ++i) {
        const CMatrix rec = stokes_reconstruct(random_grid(rng));
        CHECK(rec.hermiticity_defect() < 1e-12);
    }
}

TEST_CASE("reconstruction trace equals s00") {
    Rng rng(14);
    for (int i = 0; i < 50; ++i) {
        const MeasurementGrid g = random_grid(rng);
        const double s00 = stokes_params(g).at(0, 0);
        CHECK(std::abs(stokes_reconstruct(g).trace().real() - s00) < 1e-12);
    }
}

TEST_CASE("reconstruction is linear in the grid") {
    Rng rng(15);
    const MeasurementGrid g1 = random_grid(rng);
    const MeasurementGrid g2 = random_grid(rng);
    const double alpha = 0.61;
    MeasurementGrid mix;
    for (std::size_t i = 0; i < 36; ++i) {
        mix.set(i / 6, i % 6,
                alpha * g1.values()[i] + (1.0 - alpha) * g2.values()[i], true);
    }
    const CMatrix lhs = stokes_reconstruct(mix);
    const CMatrix rhs = alpha * stokes_reconstruct(g1) +
                        (1.0 - alpha) * stokes_reconstruct(g2);
    CHECK(lhs.max_abs_diff(rhs) < 1e-12);
}

TEST_CASE("physicalize returns physical states unchanged") {
    Rng rng(16);
    for (int i = 0; i < 50; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        const PhysicalizeResult res = physicalize_with_diagnostics(rho.matrix());
        CHECK(res.rho.matrix().max_abs_diff(rho.matrix()) < 1e-10);
        CHECK(res.min_eigenvalue_before > 0.0);
    }
}

TEST_CASE("physicalize clamps and renormalizes a hand-evaluable spectrum") {
    CMatrix d(4, 4);
    d(0, 0) = 1.2;
    d(1, 1) = 0.2;
    d(2, 2) = -0.2;
    d(3, 3) = -0.2;
    const PhysicalizeResult res = physicalize_with_diagnostics(d);
    CHECK(res.min_eigenvalue_before == doctest::Approx(-0.2));
    CHECK(std::abs(res.rho(0, 0).real() - 1.2 / 1.4) < 1e-12);
    CHECK(std::abs(res.rho(1, 1).real() - 0.2 / 1.4) < 1e-12);
    CHECK(std::abs(res.rho(2, 2).real()) < 1e-12);
    CHECK(std::abs(res.rho(3, 3).real()) < 1e-12);
}

TEST_CASE("physicalize of the zero matrix is the maximally mixed state") {
    const DensityMatrix rho = physicalize(CMatrix(4, 4));
    CHECK(rho.matrix().max_abs_diff(maximally_mixed().matrix()) < 1e-14);
}

TEST_CASE("physicalize is idempotent and always produces valid states") {
    Rng rng(17);
    for (int i = 0; i < 100; ++i) {
        // Random Hermitian input, generally indefinite.
        CMatrix h(4, 4);
        for (std::size_t r = 0; r < 4; ++r) {
            h(r, r) = rng.next_gaussian();
            for (std::size_t c = r + 1; c < 4; ++c) {
                const Complex z(rng.next_gaussian(), rng.next_gaussian());
                h(r, c) = z;
                h(c, r) = std::conj(z);
            }
        }
        const DensityMatrix once = physicalize(h);
        CHECK(std::abs(once.matrix().trace().real() - 1.0) < 1e-12);
        CHECK(once.min_eigenvalue() > -1e-10);
        const DensityMatrix twice = physicalize(once.matrix());
        CHECK(twice.matrix().max_abs_diff(once.matrix()) < 1e-10);
    }
    CHECK_THROWS_AS(physicalize(CMatrix(3, 3)), InvalidArgument);
}

TEST_CASE("physicalized stokes output of noisy measurements is physical") {
    Rng rng(18);
    for (int i = 0; i < 30; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        const MeasurementGrid g = measure(
            rho, noisy_projector_grid(rng, NoiseParams{std::numbers::pi / 6}));
        const DensityMatrix rec = physicalize(stokes_reconstruct(g));
        CHECK(rec.min_eigenvalue() > -1e-10);
        CHECK(std::abs(rec.matrix().trace().real() - 1.0) < 1e-12);
    }
}
