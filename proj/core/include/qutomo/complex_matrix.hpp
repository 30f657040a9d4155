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

#include <complex>
#include <cstddef>
#include <vector>

namespace qutomo {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Everything in this project is at most
/// 6x6, so there is no blocking or aliasing cleverness; operations allocate
/// fresh results and matrices behave as plain values.
class CMatrix {
  public:
    CMatrix() = default;
    CMatrix(std::size_t rows, std::size_t cols)
        : rows_(rows), cols_(cols), entries_(rows * cols) {}
    CMatrix(std::size_t rows, std::size_t cols, std::vector<Complex> entries);

    static CMatrix identity(std::size_t n);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    Complex& operator()(std::size_t r, std::size_t c) {
        return entries_[r * cols_ + c];
    }
    const Complex& operator()(std::size_t r, std::size_t c) const {
        return entries_[r * cols_ + c];
    }

    const std::vector<Complex>& entries() const { return entries_; }

    CMatrix adjoint() const;
    Complex trace() const;

    /// Kronecker (tensor) product, row-major block layout.
    static CMatrix kron(const CMatrix& a, const CMatrix& b);

    /// max_ij |a_ij - b_ij|. Shapes must match.
    double max_abs_diff(const CMatrix& other) const;

    /// max_ij |a_ij - a_ji^*|.
    double hermiticity_defect() const;

    double frobenius_norm() const;

    bool operator==(const CMatrix& other) const = default;

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Complex> entries_;
};

CMatrix operator+(const CMatrix& a, const CMatrix& b);
CMatrix operator-(const CMatrix& a, const CMatrix& b);
CMatrix operator*(const CMatrix& a, const CMatrix& b);
CMatrix operator*(Complex scalar, const CMatrix& m);
CMatrix operator*(double scalar, const CMatrix& m);

}  // namespace qutomo
