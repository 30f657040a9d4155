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

#include "qutomo/states.hpp"

#include <cmath>

#include "qutomo/eigen_hermitian.hpp"
#include "qutomo/errors.hpp"

namespace qutomo {

StateVector StateVector::from_amplitudes(const std::array<Complex, 4>& amps) {
    double norm2 = 0.0;
    for (const Complex& z : amps) {
        norm2 += std::norm(z);
    }
    if (std::abs(norm2 - 1.0) > 1e-12) {
        throw InvalidArgument("StateVector: amplitudes are not normalized");
    }
    return StateVector{amps};
}

Complex StateVector::overlap(const StateVector& other) const {
    Complex acc = 0.0;
    for (std::size_t i = 0; i < 4; ++i) {
        acc += std::conj(amplitudes[i]) * other.amplitudes[i];
    }
    return acc;
}

DensityMatrix DensityMatrix::from_matrix(const CMatrix& m) {
    if (m.rows() != 4 || m.cols() != 4) {
        throw InvalidArgument("DensityMatrix: matrix must be 4x4");
    }
    if (m.hermiticity_defect() > kHermitianTol) {
        throw InvalidArgument("DensityMatrix: matrix is not Hermitian within 1e-12");
    }
    if (std::abs(m.trace() - Complex(1.0, 0.0)) > kTraceTol) {
        throw InvalidArgument("DensityMatrix: trace is not 1 within 1e-12");
    }
    const EigenSystem es = hermitian_eig(m);
    if (es.eigenvalues.front() < -kPsdTol) {
        throw InvalidArgument("DensityMatrix: matrix is not PSD within 1e-10");
    }
    return DensityMatrix(m);
}

double DensityMatrix::purity() const {
    double s = 0.0;
    for (const Complex& z : m_.entries()) {
        s += std::norm(z);
    }
    return s;
}

double DensityMatrix::min_eigenvalue() const {
    return hermitian_eig(m_).eigenvalues.front();
}

DensityMatrix pure_state_density(const StateVector& psi) {
    CMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = psi.amplitudes[r] * std::conj(psi.amplitudes[c]);
        }
    }
    return DensityMatrix::from_matrix(m);
}

namespace {

// Complex Ginibre matrix: entries re + i*im with re, im ~ N(0,1), drawn
// row-major, real part first.
CMatrix ginibre(Rng& rng, std::size_t dim) {
    CMatrix g(dim, dim);
    for (std::size_t r = 0; r < dim; ++r) {
        for (std::size_t c = 0; c < dim; ++c) {
            const double re = rng.next_gaussian();
            const double im = rng.next_gaussian();
            g(r, c) = Complex(re, im);
        }
    }
    return g;
}

}  // namespace

CMatrix haar_random_unitary(Rng& rng, std::size_t dim) {
    if (dim != 2 && dim != 4) {
        throw InvalidArgument("haar_random_unitary: dim must be 2 or 4");
    }
    CMatrix a = ginibre(rng, dim);
    const std::size_t n = dim;

    // Householder QR. Reflectors are applied to an identity afterwards to
    // accumulate Q; the R diagonal is kept for the phase correction.
    std::vector<std::vector<Complex>> reflectors;
    std::vector<Complex> r_diag(n);
    for (std::size_t k = 0; k < n; ++k) {
        double xnorm = 0.0;
        for (std::size_t r = k; r < n; ++r) {
            xnorm += std::norm(a(r, k));
        }
        xnorm = std::sqrt(xnorm);
        const Complex x0 = a(k, k);
        const Complex phase =
            (std::abs(x0) == 0.0) ? Complex(1.0, 0.0) : x0 / std::abs(x0);
        const Complex alpha = -phase * xnorm;

        std::vector<Complex> v(n, Complex(0.0, 0.0));
        double vnorm2 = 0.0;
        for (std::size_t r = k; r < n; ++r) {
            v[r] = a(r, k);
        }
        v[k] -= alpha;
        for (std::size_t r = k; r < n; ++r) {
            vnorm2 += std::norm(v[r]);
        }
        if (vnorm2 > 0.0) {
            const double inv = 1.0 / std::sqrt(vnorm2);
            for (std::size_t r = k; r < n; ++r) {
                v[r] *= inv;
            }
            // A <- (I - 2 v v^dagger) A on the trailing block.
            for (std::size_t c = k; c < n; ++c) {
                Complex dot = 0.0;
                for (std::size_t r = k; r < n; ++r) {
                    dot += std::conj(v[r]) * a(r, c);
                }
                for (std::size_t r = k; r < n; ++r) {
                    a(r, c) -= 2.0 * v[r] * dot;
                }
            }
        }
        reflectors.push_back(std::move(v));
        r_diag[k] = a(k, k);
    }

    // Q = H_0 H_1 ... H_{n-1}; build by applying reflectors to I in reverse.
    CMatrix q = CMatrix::identity(n);
    for (std::size_t ki = n; ki-- > 0;) {
        const std::vector<Complex>& v = reflectors[ki];
        for (std::size_t c = 0; c < n; ++c) {
            Complex dot = 0.0;
            for (std::size_t r = ki; r < n; ++r) {
                dot += std::conj(v[r]) * q(r, c);
            }
            for (std::size_t r = ki; r < n; ++r) {
                q(r, c) -= 2.0 * v[r] * dot;
            }
        }
    }

    // Divide each column of Q by the phase of the matching R diagonal entry.
    for (std::size_t c = 0; c < n; ++c) {
        const double mag = std::abs(r_diag[c]);
        const Complex phase =
            (mag == 0.0) ? Complex(1.0, 0.0) : r_diag[c] / mag;
        const Complex inv_phase = std::conj(phase);
        for (std::size_t r = 0; r < n; ++r) {
            q(r, c) *= inv_phase;
        }
    }
    return q;
}

DensityMatrix random_pure_state(Rng& rng) {
    const CMatrix u = haar_random_unitary(rng, 4);
    CMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = (1.0 - kPureStateEpsilon) * u(r, 0) * std::conj(u(c, 0));
        }
        m(r, r) += kPureStateEpsilon / 4.0;
    }
    return DensityMatrix::from_matrix(m);
}

DensityMatrix random_mixed_state(Rng& rng) {
    const CMatrix g = ginibre(rng, 4);
    CMatrix w(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < 4; ++k) {
                acc += g(r, k) * std::conj(g(c, k));
            }
            w(r, c) = acc;
        }
    }
    const double tr = w.trace().real();
    CMatrix m(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            m(r, c) = w(r, c) / tr;
        }
    }
    return DensityMatrix::from_matrix(m);
}

}  // namespace qutomo
