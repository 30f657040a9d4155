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
#include "qutomo/states.hpp"

namespace qutomo {

/// Lower-triangular 4x4 factor with a real diagonal, such that
/// tau^dagger tau / Tr(tau^dagger tau) is a density matrix.
///
/// Structural invariants (entries above the diagonal exactly zero, diagonal
/// imaginary parts exactly zero) are enforced on construction. Factors
/// produced by tau_from_density additionally have a nonnegative diagonal
/// and Tr(tau^dagger tau) = 1; factors unpacked from an arbitrary network
/// output need not.
class TauMatrix {
  public:
    static TauMatrix from_matrix(const CMatrix& t);

    const CMatrix& matrix() const { return t_; }
    Complex operator()(std::size_t r, std::size_t c) const { return t_(r, c); }

    /// Tr(tau^dagger tau) = sum of |entries|^2 (real, >= 0).
    double gram_trace() const;

  private:
    explicit TauMatrix(CMatrix t) : t_(std::move(t)) {}
    CMatrix t_;
};

/// 16-real-number packing of a TauMatrix:
///   diagonal (0,0)..(3,3)      -> v0..v3
///   (1,0) = v4 + i v5          (2,1) = v6  + i v7   (3,2) = v8  + i v9
///   (2,0) = v10 + i v11        (3,1) = v12 + i v13  (3,0) = v14 + i v15
struct Tau16 {
    std::array<double, 16> v{};

    bool operator==(const Tau16& other) const = default;
};

/// Unique lower-triangular factor with nonnegative real diagonal such that
/// tau^dagger tau = rho. Computed by a Cholesky-style recurrence that starts
/// from the bottom-right corner (the tau^dagger tau convention reverses the
/// usual elimination order). Throws SingularState when the smallest
/// eigenvalue of rho is <= 1e-10; callers must regularize pure states first.
TauMatrix tau_from_density(const DensityMatrix& rho);

/// The same factor computed from first/second minors of rho and its
/// trailing entries, as an independent route. Same SingularState rule.
TauMatrix tau_from_density_minors(const DensityMatrix& rho);

/// tau^dagger tau / Tr(tau^dagger tau). Physical (Hermitian, PSD, trace-1)
/// for every nonzero tau. Throws DegenerateTau when Tr(tau^dagger tau)
/// <= 1e-30.
DensityMatrix density_from_tau(const TauMatrix& tau);

Tau16 pack_tau16(const TauMatrix& tau);

/// Inverse of pack_tau16. Accepts any 16 reals; the four diagonal slots are
/// real by construction of the packing.
TauMatrix unpack_tau16(const Tau16& v);

}  // namespace qutomo
