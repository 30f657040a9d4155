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

#include "qutomo/eigen_hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qutomo/errors.hpp"

namespace qutomo {

namespace {

double off_diagonal_norm(const CMatrix& a) {
    double s = 0.0;
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            if (r != c) {
                s += std::norm(a(r, c));
            }
        }
    }
    return std::sqrt(s);
}

}  // namespace

EigenSystem hermitian_eig(const CMatrix& h) {
    if (h.rows() != h.cols() || h.rows() == 0) {
        throw InvalidArgument("hermitian_eig: matrix must be square");
    }
    if (h.hermiticity_defect() >= 1e-9) {
        throw InvalidArgument("hermitian_eig: input is not Hermitian within 1e-9");
    }
    const std::size_t n = h.rows();

    // Work on an exactly Hermitian copy so rotations stay self-consistent.
    CMatrix a(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        a(r, r) = Complex(h(r, r).real(), 0.0);
        for (std::size_t c = r + 1; c < n; ++c) {
            const Complex z = 0.5 * (h(r, c) + std::conj(h(c, r)));
            a(r, c) = z;
            a(c, r) = std::conj(z);
        }
    }
    CMatrix v = CMatrix::identity(n);

    constexpr double kOffTol = 1e-13;
    constexpr int kMaxSweeps = 100;

    int sweep = 0;
    while (off_diagonal_norm(a) >= kOffTol) {
        if (++sweep > kMaxSweeps) {
            throw NumericalFailure("hermitian_eig: Jacobi sweep cap reached");
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            for (std::size_t q = p + 1; q < n; ++q) {
                const Complex b = a(p, q);
                const double babs = std::abs(b);
                if (babs == 0.0) {
                    continue;
                }
                // Unitary 2x2 rotation J with J(p,p)=c, J(p,q)=-s e^{i phi},
                // J(q,p)=s e^{-i phi}, J(q,q)=c zeroes the (p,q) entry when
                // tan(2 theta) = 2|b| / (a_pp - a_qq) and phi = arg b.
                const double phi = std::arg(b);
                const double theta =
                    0.5 * std::atan2(2.0 * babs, a(p, p).real() - a(q, q).real());
                const double c = std::cos(theta);
                const double s = std::sin(theta);
                const Complex eip = std::polar(1.0, phi);
                const Complex ein = std::conj(eip);

                // Right-multiply by J (columns p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex akp = a(k, p);
                    const Complex akq = a(k, q);
                    a(k, p) = c * akp + s * ein * akq;
                    a(k, q) = -s * eip * akp + c * akq;
                }
                // Left-multiply by J^dagger (rows p, q).
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex apk = a(p, k);
                    const Complex aqk = a(q, k);
                    a(p, k) = c * apk + s * eip * aqk;
                    a(q, k) = -s * ein * apk + c * aqk;
                }
                // Clean the rotated pair so roundoff cannot reintroduce it.
                a(p, q) = 0.0;
                a(q, p) = 0.0;
                a(p, p) = Complex(a(p, p).real(), 0.0);
                a(q, q) = Complex(a(q, q).real(), 0.0);

                // Accumulate eigenvectors: V <- V J.
                for (std::size_t k = 0; k < n; ++k) {
                    const Complex vkp = v(k, p);
                    const Complex vkq = v(k, q);
                    v(k, p) = c * vkp + s * ein * vkq;
                    v(k, q) = -s * eip * vkp + c * vkq;
                }
            }
        }
    }

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenSystem out;
    out.eigenvalues.resize(n);
    out.eigenvectors = CMatrix(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        out.eigenvalues[k] = a(order[k], order[k]).real();
        for (std::size_t r = 0; r < n; ++r) {
            out.eigenvectors(r, k) = v(r, order[k]);
        }
    }
    return out;
}

CMatrix recompose(const EigenSystem& es, const std::vector<double>& mapped) {
    const std::size_t n = es.eigenvalues.size();
    if (mapped.size() != n) {
        throw InvalidArgument("recompose: spectrum size mismatch");
    }
    CMatrix out(n, n);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < n; ++c) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < n; ++k) {
                acc += mapped[k] * es.eigenvectors(r, k) *
                       std::conj(es.eigenvectors(c, k));
            }
            out(r, c) = acc;
        }
    }
    return out;
}

}  // namespace qutomo
