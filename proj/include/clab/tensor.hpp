// Copyright 2026 The collective-lab Authors
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

/**
 * @file
 * Small dense complex linear algebra: kets, matrices, tensor products and a
 * Jacobi eigensolver for Hermitian matrices. Dimensions stay tiny (<= 64).
 */

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace clab {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

class Ket {
  public:
    Ket() = default;
    explicit Ket(std::size_t dim) : amps_(dim, cplx{0.0}) {}
    Ket(std::initializer_list<cplx> amps) : amps_(amps) {}
    explicit Ket(std::vector<cplx> amps) : amps_(std::move(amps)) {}

    /// Computational basis vector e_index.
    static Ket basis(std::size_t dim, std::size_t index);

    [[nodiscard]] std::size_t dim() const { return amps_.size(); }
    cplx &operator[](std::size_t i) { return amps_[i]; }
    const cplx &operator[](std::size_t i) const { return amps_[i]; }
    [[nodiscard]] std::span<const cplx> amplitudes() const { return amps_; }

    [[nodiscard]] double norm() const;
    [[nodiscard]] Ket normalized() const;

    Ket &operator*=(cplx s);
    Ket &operator+=(const Ket &other);

  private:
    std::vector<cplx> amps_;
};

Ket operator*(cplx s, Ket k);
Ket operator+(Ket a, const Ket &b);
Ket operator-(Ket a, const Ket &b);

/// <a|b>
cplx inner(const Ket &a, const Ket &b);
/// Tensor product, first factor most significant.
Ket kron(const Ket &a, const Ket &b);
/// max_i |a_i - b_i|
double max_abs_diff(const Ket &a, const Ket &b);

/// Dense row-major complex matrix. Most callers use square ones ("operators").
class Matrix {
  public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), data_(rows * cols) {}
    /// Square matrix from nested rows, e.g. {{1, 0}, {0, -1}}.
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows);

    static Matrix identity(std::size_t dim);
    static Matrix zeros(std::size_t dim) { return Matrix(dim, dim); }
    static Matrix diagonal(std::span<const cplx> d);
    static Matrix diagonal(std::initializer_list<cplx> d);
    /// |a><b|
    static Matrix outer(const Ket &a, const Ket &b);
    /// |k><k|
    static Matrix projector(const Ket &k) { return outer(k, k); }

    [[nodiscard]] std::size_t rows() const { return rows_; }
    [[nodiscard]] std::size_t cols() const { return cols_; }
    [[nodiscard]] bool square() const { return rows_ == cols_; }
    /// Side length of a square matrix.
    [[nodiscard]] std::size_t dim() const { return rows_; }

    cplx &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const cplx &operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    [[nodiscard]] Matrix adjoint() const;
    [[nodiscard]] cplx trace() const;
    [[nodiscard]] double max_abs() const;
    /// Column c as a ket.
    [[nodiscard]] Ket column(std::size_t c) const;

    Matrix &operator+=(const Matrix &o);
    Matrix &operator-=(const Matrix &o);
    Matrix &operator*=(cplx s);

  private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<cplx> data_;
};

Matrix operator+(Matrix a, const Matrix &b);
Matrix operator-(Matrix a, const Matrix &b);
Matrix operator*(cplx s, Matrix a);
Matrix operator*(const Matrix &a, const Matrix &b);
Ket operator*(const Matrix &a, const Ket &k);

Matrix kron(const Matrix &a, const Matrix &b);
double max_abs_diff(const Matrix &a, const Matrix &b);
/// ||a - a^dagger||_max
double hermitian_residual(const Matrix &a);
/// (a + a^dagger) / 2
Matrix hermitian_part(const Matrix &a);
/// <k|a|k>
cplx expectation(const Matrix &a, const Ket &k);

struct EigenSystem {
    std::vector<double> values; ///< ascending
    Matrix vectors;             ///< column i pairs with values[i]
};

/// Hermitian eigendecomposition, eigenvalues ascending.
/// Throws NotHermitian if ||a - a^dagger||_max exceeds 1e-12 (scaled by ||a||_max when larger than 1).
EigenSystem herm_eig(const Matrix &a);

inline constexpr double kPsdClamp = 1e-10;
inline constexpr double kRoundoffFloor = 1e-14;

/// Principal square root of a PSD matrix. Eigenvalues in [-1e-10, 1e-14 * max(1, ||a||)]
/// count as zero; anything below -1e-10 raises NotPsd.
Matrix psd_sqrt(const Matrix &a);

/// Smallest eigenvalue of a Hermitian matrix.
double min_eigenvalue(const Matrix &a);

/// Number of eigenvalues above `threshold`.
std::size_t rank(const Matrix &a, double threshold = 1e-8);

/// Singular values of an arbitrary matrix, descending.
std::vector<double> singular_values(const Matrix &a);

} // namespace clab
