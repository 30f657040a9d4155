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

// Fast acceptance suite: property-level gates C1-C7, one printed verdict
// line each. Runs in well under two minutes.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "qutomo/cnn.hpp"
#include "qutomo/fidelity.hpp"
#include "qutomo/measurement.hpp"
#include "qutomo/states.hpp"
#include "qutomo/stokes.hpp"
#include "qutomo/tau.hpp"

using namespace qutomo;

namespace {

namespace fs = std::filesystem;

void verdict(const char* name, bool ok, const std::string& detail) {
    std::printf("[%s] %s (%s)\n", ok ? "PASS" : "FAIL", name, detail.c_str());
    std::fflush(stdout);
}

std::string read_file(const fs::path& p) {
    std::ifstream f(p);
    REQUIRE(f.good());
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

StateVector random_state_vector(Rng& rng) {
    const CMatrix u = haar_random_unitary(rng, 4);
    return StateVector::from_amplitudes({u(0, 0), u(1, 0), u(2, 0), u(3, 0)});
}

}  // namespace

TEST_CASE("C1 stokes exact inversion") {
    Rng rng(101);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        const CMatrix rec = stokes_reconstruct(measure(rho, projector_grid()));
        worst = std::max(worst, rec.max_abs_diff(rho.matrix()));
    }
    const bool ok = worst < 1e-10;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "1000 states, max elementwise error %.3g",
                  worst);
    verdict("C1 stokes exact inversion < 1e-10", ok, buf);
    CHECK(ok);
}

TEST_CASE("C2 tau round trip and dual-path agreement") {
    Rng rng(102);
    double worst_fid = 1.0;
    double worst_dual = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        const TauMatrix t = tau_from_density(rho);
        worst_fid = std::min(worst_fid, fidelity(density_from_tau(t), rho));
        worst_dual = std::max(
            worst_dual, t.matrix().max_abs_diff(tau_from_density_minors(rho).matrix()));
    }
    const bool ok = worst_fid > 1.0 - 1e-8 && worst_dual < 1e-8;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "min fidelity %.12f, max dual-path disagreement %.3g",
                  worst_fid, worst_dual);
    verdict("C2 tau round trip > 1-1e-8 and dual path < 1e-8", ok, buf);
    CHECK(ok);
}

TEST_CASE("C3 physicality closure over 1e5 random tau vectors") {
    Rng rng(103);
    double worst_herm = 0.0, worst_trace = 0.0, worst_eig = 1.0;
    for (int i = 0; i < 100000; ++i) {
        Tau16 v;
        for (double& x : v.v) {
            x = 2.0 * rng.next_double() - 1.0;
        }
        const DensityMatrix rho = density_from_tau(unpack_tau16(v));
        worst_herm = std::max(worst_herm, rho.matrix().hermiticity_defect());
        worst_trace = std::max(
            worst_trace, std::abs(rho.matrix().trace().real() - 1.0));
        worst_eig = std::min(worst_eig, rho.min_eigenvalue());
    }
    const bool ok =
        worst_herm <= 1e-12 && worst_trace <= 1e-12 && worst_eig >= -1e-10;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "hermiticity %.3g, trace drift %.3g, min eigenvalue %.3g",
                  worst_herm, worst_trace, worst_eig);
    verdict("C3 physicality closure on 1e5 tau vectors", ok, buf);
    CHECK(ok);
}

TEST_CASE("C4 fidelity identities") {
    Rng rng(104);
    double worst_self = 0.0, worst_sym = 0.0, worst_pure = 0.0;
    for (int i = 0; i < 500; ++i) {
        const DensityMatrix rho = random_mixed_state(rng);
        worst_self = std::max(worst_self, std::abs(fidelity(rho, rho) - 1.0));
    }
    for (int i = 0; i < 500; ++i) {
        const DensityMatrix a = random_mixed_state(rng);
        const DensityMatrix b = random_mixed_state(rng);
        worst_sym = std::max(worst_sym,
                             std::abs(fidelity(a, b) - fidelity(b, a)));
    }
    for (int i = 0; i < 500; ++i) {
        const StateVector p1 = random_state_vector(rng);
        const StateVector p2 = random_state_vector(rng);
        const double overlap = std::norm(p1.overlap(p2));
        worst_pure = std::max(
            worst_pure,
            std::abs(fidelity(pure_state_density(p1), pure_state_density(p2)) -
                     overlap));
    }
    const bool ok =
        worst_self < 1e-9 && worst_sym < 1e-9 && worst_pure < 1e-8;
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "self %.3g, symmetry %.3g, pure overlap %.3g", worst_self,
                  worst_sym, worst_pure);
    verdict("C4 fidelity identities (500 draws each)", ok, buf);
    CHECK(ok);
}

TEST_CASE("C5 gradient check over 225 coordinates in all five layers") {
    Rng rng(105);
    CnnParams params = CnnParams::init(CnnShape{}, rng);
    std::vector<double> input(36);
    for (double& x : input) {
        x = rng.next_double();
    }
    Tau16 target;
    for (double& x : target.v) {
        x = rng.next_gaussian();
    }

    ForwardCache cache;
    forward(params, input, RunMode::kTrain, &rng, &cache);
    const std::vector<double> d1 = cache.drop1_mult;
    const std::vector<double> d2 = cache.drop2_mult;
    const CnnTensors grad = backward(params, cache, target);

    auto loss_at = [&]() {
        return loss_mse(
            forward_with_multipliers(params, input, d1, d2, nullptr), target);
    };

    const double h = 1e-6;
    Rng pick(1055);
    auto blocks = params.value.blocks();
    auto grad_blocks = grad.blocks();
    int checked = 0;
    double worst_rel = 0.0;
    // 10 blocks (weights + biases of conv1, conv2, fc1, fc2, out) covering
    // every layer; 22-23 probes per block.
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const int probes = b % 2 == 0 ? 23 : 22;
        for (int probe = 0; probe < probes; ++probe) {
            const std::size_t idx = pick.next_below(blocks[b]->size());
            double& w = (*blocks[b])[idx];
            const double keep = w;
            w = keep + h;
            const double up = loss_at();
            w = keep - h;
            const double dn = loss_at();
            w = keep;
            const double fd = (up - dn) / (2.0 * h);
            const double an = (*grad_blocks[b])[idx];
            const double rel =
                std::abs(fd - an) / std::max({std::abs(fd), std::abs(an), 1e-6});
            worst_rel = std::max(worst_rel, rel);
            ++checked;
        }
    }
    const bool ok = checked >= 200 && worst_rel < 1e-4;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "%d coordinates, worst relative error %.3g",
                  checked, worst_rel);
    verdict("C5 gradient check vs central differences", ok, buf);
    CHECK(ok);
}

TEST_CASE("C6 determinism: identical CSV bytes across reruns") {
#ifndef TOMO_CLI_PATH
    FAIL("TOMO_CLI_PATH not defined");
#else
    const fs::path dir =
        fs::temp_directory_path() / "qutomo_acceptance" / "c6";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const std::string cmd = std::string(TOMO_CLI_PATH) +
                            " fig2a --smoke --seed 7 --out " + dir.string() +
                            " >/dev/null 2>&1";
    const int rc1 = std::system(cmd.c_str());
    const std::string pure1 = read_file(dir / "fig2a_pure.csv");
    const std::string mixed1 = read_file(dir / "fig2a_mixed.csv");
    const int rc2 = std::system(cmd.c_str());
    const std::string pure2 = read_file(dir / "fig2a_pure.csv");
    const std::string mixed2 = read_file(dir / "fig2a_mixed.csv");

    const bool ok = WEXITSTATUS(rc1) == 0 && WEXITSTATUS(rc2) == 0 &&
                    pure1 == pure2 && mixed1 == mixed2 && !pure1.empty();
    verdict("C6 fig2a --seed 7 rerun produces byte-identical CSV", ok,
            ok ? "pure and mixed CSVs identical" : "CSV bytes differ");
    CHECK(ok);
#endif
}

TEST_CASE("C7 measurement sanity oracle") {
    CMatrix q(4, 4);
    for (std::size_t i = 0; i < 4; ++i) {
        q(i, i) = 0.25;
    }
    const MeasurementGrid mm =
        measure(DensityMatrix::from_matrix(q), projector_grid());
    bool ok = true;
    for (double v : mm.values()) {
        ok = ok && std::abs(v - 0.25) <= 1e-12;
    }

    const double s = 1.0 / std::sqrt(2.0);
    const DensityMatrix bell = pure_state_density(StateVector::from_amplitudes(
        {Complex(s, 0), Complex(0, 0), Complex(0, 0), Complex(s, 0)}));
    const MeasurementGrid bg = measure(bell, projector_grid());
    const StokesParams sp = stokes_params(bg);
    ok = ok && std::abs(bg.value(0, 0) - 0.5) < 1e-12;
    ok = ok && std::abs(bg.value(0, 1)) < 1e-12;
    ok = ok && std::abs(sp.at(3, 3) - 1.0) < 1e-12;
    ok = ok && std::abs(sp.at(1, 1) - 1.0) < 1e-12;
    ok = ok && std::abs(sp.at(2, 2) + 1.0) < 1e-12;
    verdict("C7 measurement sanity (I/4 grid and Bell state table)", ok,
            ok ? "all oracle values matched" : "oracle value mismatch");
    CHECK(ok);
}
