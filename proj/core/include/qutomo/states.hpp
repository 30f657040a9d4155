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

/// Two-qubit pure state amplitudes in the (HH, HV, VH, VV) basis.
struct StateVector {
    std::array<Complex, 4> amplitudes;

    /// Validates unit norm within 1e-12.
    static StateVector from_amplitudes(const std::array<Complex, 4>& amps);

    Complex overlap(const StateVector& other) const;
};

/// 4x4 Hermitian, positive semidefinite, trace-1 matrix. The only public
/// constructor validates all three invariants (hermiticity within 1e-12,
/// trace within 1e-12 of one, smallest eigenvalue >= -1e-10), so a value of
/// this type can always be consumed without further checks.
class DensityMatrix {
  public:
    static constexpr double kHermitianTol = 1e-12;
    static constexpr double kTraceTol = 1e-12;
    static constexpr double kPsdTol = 1e-10;

    static DensityMatrix from_matrix(const CMatrix& m);

    const CMatrix& matrix() const { return m_; }
    Complex operator()(std::size_t r, std::size_t c) const { return m_(r, c); }

    /// Tr(rho^2) = sum |rho_ij|^2.
    double purity() const;

    /// Smallest eigenvalue (Jacobi).
    double min_eigenvalue() const;

    bool operator==(const DensityMatrix& other) const = default;

  private:
    explicit DensityMatrix(CMatrix m) : m_(std::move(m)) {}
    CMatrix m_;
};

/// |psi><psi| as a density matrix (exact projector, no regularization).
DensityMatrix pure_state_density(const StateVector& psi);

/// Haar-distributed random unitary of dimension 2 or 4. Sampling is QR of a
/// complex Ginibre matrix (Householder) followed by the R-diagonal phase
/// correction: column j of Q is divided by R_jj/|R_jj|, which makes the
/// factorization canonical and the distribution left-invariant.
CMatrix haar_random_unitary(Rng& rng, std::size_t dim);

/// Random two-qubit pure state: the first column of a Haar 4x4 unitary,
/// mixed with epsilon/4 of the identity (epsilon = 1e-7) so the result is
/// strictly positive definite and safe to factor.
DensityMatrix random_pure_state(Rng& rng);

/// Random mixed state G G^dagger / Tr(G G^dagger) with G a 4x4 complex
/// Ginibre matrix (real and imaginary parts i.i.d. standard normal).
DensityMatrix random_mixed_state(Rng& rng);

/// The perturbation constant used by random_pure_state.
inline constexpr double kPureStateEpsilon = 1e-7;

}  // namespace qutomo
