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

#include "qutomo/fidelity.hpp"

#include <algorithm>
#include <cmath>

#include "qutomo/eigen_hermitian.hpp"

namespace qutomo {

CMatrix psd_sqrt(const DensityMatrix& rho) {
    const EigenSystem es = hermitian_eig(rho.matrix());
    std::vector<double> roots(es.eigenvalues.size());
    for (std::size_t i = 0; i < roots.size(); ++i) {
        roots[i] = std::sqrt(std::max(es.eigenvalues[i], 0.0));
    }
    return recompose(es, roots);
}

double fidelity(const DensityMatrix& a, const DensityMatrix& b) {
    const CMatrix s = psd_sqrt(a);
    CMatrix m = s * b.matrix() * s;
    // m is Hermitian PSD analytically; symmetrize away the formation noise.
    CMatrix herm(4, 4);
    for (std::size_t r = 0; r < 4; ++r) {
        for (std::size_t c = 0; c < 4; ++c) {
            herm(r, c) = 0.5 * (m(r, c) + std::conj(m(c, r)));
        }
    }
    const EigenSystem es = hermitian_eig(herm);

    double trace_pos = 0.0;
    for (double mu : es.eigenvalues) {
        trace_pos += std::max(mu, 0.0);
    }
    const double floor = 1e-13 * trace_pos;
    double root_sum = 0.0;
    for (double mu : es.eigenvalues) {
        if (mu > floor) {
            root_sum += std::sqrt(mu);
        }
    }
    const double f = root_sum * root_sum;
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace qutomo
