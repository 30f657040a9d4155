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

#include "qutomo/tau.hpp"

#include <cmath>

#include "qutomo/eigen_hermitian.hpp"
#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

constexpr double kSingularEig = 1e-10;
constexpr double kDegenerateTrace = 1e-30;

void require_full_rank(const DensityMatrix& rho) {
    if (rho.min_eigenvalue() <= kSingularEig) {
        throw SingularState(
            "tau_from_density: state is singular within 1e-10; regularize first");
    }
}

// Determinant by cofactor expansion along the first row. Fine at 2x2..4x4.
Complex det(const CMatrix& m) {
    const std::size_t n = m.rows();
    if (n == 1) {
        return m(0, 0);
    }
    if (n == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    }
    Complex acc = 0.0;
    double sign = 1.0;
    for (std::size_t c = 0; c < n; ++c) {
        CMatrix sub(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::size_t cc = 0;
            for (std::size_t k = 0; k < n; ++k) {
                if (k == c) {
                    continue;
                }
                sub(r - 1, cc++) = m(r, k);
            }
        }
        acc += sign * m(0, c) * det(sub);
        sign = -sign;
    }
    return acc;
}

// First minor: determinant of rho with row i and column j removed.
Complex minor1(const CMatrix& m, std::size_t i, std::size_t j) {
    CMatrix sub(3, 3);
    std::size_t rr = 0;
    for (std::size_t r = 0; r < 4; ++r) {
        if (r == i) {
            continue;
        }
        std::size_t cc = 0;
        for (std::size_t c = 0; c < 4; ++c) {
            if (c == j) {
                continue;
            }
            sub(rr, cc++) = m(r, c);
        }
        ++rr;
    }
    return det(sub);
}

// Second minor: rows p and r removed, columns q and s removed.
Complex minor2(const CMatrix& m, std::size_t p, std::size_t q, std::size_t r,
               std::size_t s) {
    CMatrix sub(2, 2);
    std::size_t rr = 0;
    for (std::size_t row = 0; row < 4; ++row) {
        if (row == p || row == r) {
            continue;
        }
        std::size_t cc = 0;
        for (std::size_t col = 0; col < 4; ++col) {
            if (col == q || col == s) {
                continue;
            }
            sub(rr, cc++) = m(row, col);
        }
        ++rr;
    }
    return det(sub);
}

}  // namespace

TauMatrix TauMatrix::from_matrix(const CMatrix& t) {
    if (t.rows() != 4 || t.cols() != 4) {
        throw InvalidArgument("TauMatrix: matrix must be 4x4");
    }
    for (std::size_t r = 0; r < 4; ++r) {
        if (t(r, r).imag() != 0.0) {
            throw InvalidArgument("TauMatrix: diagonal must be real");
        }
        for (std::size_t c = r + 1; c < 4; ++c) {
            if (t(r, c) != Complex(0.0, 0.0)) {
                throw InvalidArgument("TauMatrix: entries above the diagonal must be zero");
            }
        }
    }
    return TauMatrix(t);
}

double TauMatrix::gram_trace() const {
    double s = 0.0;
    for (const Complex& z : t_.entries()) {
        s += std::norm(z);
    }
    return s;
}

TauMatrix tau_from_density(const DensityMatrix& rho) {
    require_full_rank(rho);
    const CMatrix& p = rho.matrix();

    // rho = tau^dagger tau means rho_kj = sum_{m >= max(k,j)} conj(t_mk) t_mj,
    // so elimination runs from the bottom-right corner upward.
    CMatrix t(4, 4);
    for (std::size_t k = 4; k-- > 0;) {
        double d = p(k, k).real();
        for (std::size_t m = k + 1; m < 4; ++m) {
            d -= std::norm(t(m, k));
        }
        // Full rank is checked above; d can only be nonpositive through
        // catastrophic roundoff, which the check keeps out of range.
        t(k, k) = std::sqrt(d);
        for (std::size_t j = 0; j < k; ++j) {
            Complex acc = p(k, j);
            for (std::size_t m = k + 1; m < 4; ++m) {
                acc -= std::conj(t(m, k)) * t(m, j);
            }
            t(k, j) = acc / t(k, k).real();
        }
    }
    return TauMatrix::from_matrix(t);
}

TauMatrix tau_from_density_minors(const DensityMatrix& rho) {
    require_full_rank(rho);
    const CMatrix& p = rho.matrix();

    const Complex dall = det(p);
    const Complex m1_00 = minor1(p, 0, 0);
    const Complex m1_01 = minor1(p, 0, 1);
    const Complex m2_0011 = minor2(p, 0, 0, 1, 1);
    const Complex m2_0112 = minor2(p, 0, 1, 1, 2);
    const Complex m2_0012 = minor2(p, 0, 0, 1, 2);
    const Complex p33 = p(3, 3);

    CMatrix t(4, 4);
    t(0, 0) = std::sqrt((dall / m1_00).real());
    t(1, 0) = m1_01 / std::sqrt((m1_00 * m2_0011).real());
    t(1, 1) = std::sqrt((m1_00 / m2_0011).real());
    t(2, 0) = m2_0112 / (std::sqrt(p33.real()) * std::sqrt(m2_0011.real()));
    t(2, 1) = m2_0012 / (std::sqrt(p33.real()) * std::sqrt(m2_0011.real()));
    t(2, 2) = std::sqrt((m2_0011 / p33).real());
    t(3, 0) = p(3, 0) / std::sqrt(p33.real());
    t(3, 1) = p(3, 1) / std::sqrt(p33.real());
    t(3, 2) = p(3, 2) / std::sqrt(p33.real());
    t(3, 3) = std::sqrt(p33.real());
    return TauMatrix::from_matrix(t);
}

DensityMatrix density_from_tau(const TauMatrix& tau) {
    const double n = tau.gram_trace();
    if (n <= kDegenerateTrace) {
        throw DegenerateTau("density_from_tau: Tr(tau^dagger tau) vanishes");
    }
    const CMatrix& t = tau.matrix();
    CMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                acc += std::conj(t(k, r)) * t(k, c);
            }
            m(r, c) = acc / n;
        }
    }
    return DensityMatrix::from_matrix(m);
}

Tau16 pack_tau16(const TauMatrix& tau) {
    Tau16 out;
    const CMatrix& t = tau.matrix();
    for (std::size_t i = 0; i < 4; ++i) {
        out.v[i] = t(i, i).real();
    }
    out.v[4] = t(1, 0).real();
    out.v[5] = t(1, 0).imag();
    out.v[6] = t(2, 1).real();
    out.v[7] = t(2, 1).imag();
    out.v[8] = t(3, 2).real();
    out.v[9] = t(3, 2).imag();
    out.v[10] = t(2, 0).real();
    out.v[11] = t(2, 0).imag();
    out.v[12] = t(3, 1).real();
    out.v[13] = t(3, 1).imag();
    out.v[14] = t(3, 0).real();
    out.v[15] = t(3, 0).imag();
    return out;
}

TauMatrix unpack_tau16(const Tau16& v) {
    CMatrix t(4, 4);
    t(0, 0) = v.v[0];
    t(1, 1) = v.v[1];
    t(2, 2) = v.v[2];
    t(3, 3) = v.v[3];
    t(1, 0) = Complex(v.v[4], v.v[5]);
    t(2, 1) = Complex(v.v[6], v.v[7]);
    t(3, 2) = Complex(v.v[8], v.v[9]);
    t(2, 0) = Complex(v.v[10], v.v[11]);
    t(3, 1) = Complex(v.v[12], v.v[13]);
    t(3, 0) = Complex(v.v[14], v.v[15]);
    return TauMatrix::from_matrix(t);
}

}  // namespace qutomo
