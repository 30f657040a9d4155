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

#include "qutomo/complex_matrix.hpp"

#include <cmath>

#include "qutomo/errors.hpp"

namespace qutomo {

CMatrix::CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries)
    : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) {
        throw InvalidArgument("CMatrix: entry count does not match rows*cols");
    }
}

CMatrix CMatrix::identity(std::size_t n) {
    CMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

CMatrix CMatrix::adjoint() const {
    CMatrix out(cols_, rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            out(c, r) = std::conj((*this)(r, c));
        }
    }
    return out;
}

Complex CMatrix::trace() const {
    if (rows_ != cols_) {
        throw InvalidArgument("CMatrix::trace: matrix is not square");
    }
    Complex t = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        t += (*this)(i, i);
    }
    return t;
}

CMatrix CMatrix::kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t ar = 0; ar < a.rows(); ++ar) {
        for (std::size_t ac = 0; ac < a.cols(); ++ac) {
            const Complex f = a(ar, ac);
            for (std::size_t br = 0; br < b.rows(); ++br) {
                for (std::size_t bc = 0; bc < b.cols(); ++bc) {
                    out(ar * b.rows() + br, ac * b.cols() + bc) = f * b(br, bc);
                }
            }
        }
    }
    return out;
}

double CMatrix::max_abs_diff(const CMatrix& other) const {
    if (rows_ != other.rows_ || cols_ != other.cols_) {
        throw InvalidArgument("CMatrix::max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        m = std::max(m, std::abs(entries_[i] - other.entries_[i]));
    }
    return m;
}

double CMatrix::hermiticity_defect() const {
    if (rows_ != cols_) {
        throw InvalidArgument("CMatrix::hermiticity_defect: matrix is not square");
    }
    double m = 0.0;
    for (std::size_t r = 0; r < rows_; ++r) {
        for (std::size_t c = 0; c < cols_; ++c) {
            m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        }
    }
    return m;
}

double CMatrix::frobenius_norm() const {
    double s = 0.0;
    for (const Complex& z : entries_) {
        s += std::norm(z);
    }
    return std::sqrt(s);
}

CMatrix operator+(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("CMatrix operator+: shape mismatch");
    }
    CMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(r, c) = a(r, c) + b(r, c);
        }
    }
    return out;
}

CMatrix operator-(const CMatrix& a, const CMatrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw InvalidArgument("CMatrix operator-: shape mismatch");
    }
    CMatrix out(a.rows(), a.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t c = 0; c < a.cols(); ++c) {
            out(r, c) = a(r, c) - b(r, c);
        }
    }
    return out;
}

CMatrix operator*(const CMatrix& a, const CMatrix& b) {
    if (a.cols() != b.rows()) {
        throw InvalidArgument("CMatrix operator*: inner dimensions mismatch");
    }
    CMatrix out(a.rows(), b.cols());
    for (std::size_t r = 0; r < a.rows(); ++r) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const Complex f = a(r, k);
            for (std::size_t c = 0; c < b.cols(); ++c) {
                out(r, c) += f * b(k, c);
            }
        }
    }
    return out;
}

CMatrix operator*(Complex scalar, const CMatrix& m) {
    CMatrix out(m.rows(), m.cols());
    for (std::size_t r = 0; r < m.rows(); ++r) {
        for (std::size_t c = 0; c < m.cols(); ++c) {
            out(r, c) = scalar * m(r, c);
        }
    }
    return out;
}

CMatrix operator*(double scalar, const CMatrix& m) {
    return operator*(Complex(scalar, 0.0), m);
}

}  // namespace qutomo
