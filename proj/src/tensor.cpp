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

#include "clab/tensor.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/Dense>

#include "clab/errors.hpp"

namespace clab {

Ket Ket::basis(std::size_t dim, std::size_t index) {
    Ket k(dim);
    k[index] = 1.0;
    return k;
}

double Ket::norm() const {
    double s = 0.0;
    for (const auto &a : amps_) {
        s += std::norm(a);
    }
    return std::sqrt(s);
}

Ket Ket::normalized() const {
    const double n = norm();
    Ket out = *this;
    if (n > 0.0) {
        out *= 1.0 / n;
    }
    return out;
}

Ket &Ket::operator*=(cplx s) {
    for (auto &a : amps_) {
        a *= s;
    }
    return *this;
}

Ket &Ket::operator+=(const Ket &other) {
    if (other.dim() != dim()) {
        throw ShapeMismatch("ket dimensions differ");
    }
    for (std::size_t i = 0; i < amps_.size(); ++i) {
        amps_[i] += other.amps_[i];
    }
    return *this;
}

Ket operator*(cplx s, Ket k) { return k *= s; }
Ket operator+(Ket a, const Ket &b) { return a += b; }
Ket operator-(Ket a, const Ket &b) { return a += cplx{-1.0} * b; }

cplx inner(const Ket &a, const Ket &b) {
    if (a.dim() != b.dim()) {
        throw ShapeMismatch("inner product of kets with different dimension");
    }
    cplx s{0.0};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        s += std::conj(a[i]) * b[i];
    }
    return s;
}

Ket kron(const Ket &a, const Ket &b) {
    Ket out(a.dim() * b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            out[i * b.dim() + j] = a[i] * b[j];
        }
    }
    return out;
}

double max_abs_diff(const Ket &a, const Ket &b) {
    if (a.dim() != b.dim()) {
        throw ShapeMismatch("ket dimensions differ");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.dim(); ++i) {
        m = std::max(m, std::abs(a[i] - b[i]));
    }
    return m;
}

Matrix::Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto &r : rows) {
        if (r.size() != cols_) {
            throw ShapeMismatch("ragged matrix literal");
        }
        data_.insert(data_.end(), r.begin(), r.end());
    }
}

Matrix Matrix::identity(std::size_t dim) {
    Matrix m(dim, dim);
    for (std::size_t i = 0; i < dim; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

Matrix Matrix::diagonal(std::span<const cplx> d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        m(i, i) = d[i];
    }
    return m;
}

Matrix Matrix::diagonal(std::initializer_list<cplx> d) {
    return diagonal(std::span<const cplx>(d.begin(), d.size()));
}

Matrix Matrix::outer(const Ket &a, const Ket &b) {
    Matrix m(a.dim(), b.dim());
    for (std::size_t i = 0; i < a.dim(); ++i) {
        for (std::size_t j = 0; j < b.dim(); ++j) {
            m(i, j) = a[i] * std::conj(b[j]);
        }
    }
    return m;
}

Matrix Matrix::adjoint() const {
    Matrix m(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i) {
        for (std::size_t j = 0; j < cols_; ++j) {
            m(j, i) = std::conj((*this)(i, j));
        }
    }
    return m;
}

cplx Matrix::trace() const {
    cplx t{0.0};
    for (std::size_t i = 0; i < std::min(rows_, cols_); ++i) {
        t += (*this)(i, i);
    }
    return t;
}

double Matrix::max_abs() const {
    double m = 0.0;
    for (const auto &v : data_) {
        m = std::max(m, std::abs(v));
    }
    return m;
}

Ket Matrix::column(std::size_t c) const {
    Ket k(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        k[r] = (*this)(r, c);
    }
    return k;
}

Matrix &Matrix::operator+=(const Matrix &o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) {
        throw ShapeMismatch("matrix sum with different shapes");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] += o.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator-=(const Matrix &o) {
    if (o.rows_ != rows_ || o.cols_ != cols_) {
        throw ShapeMismatch("matrix difference with different shapes");
    }
    for (std::size_t i = 0; i < data_.size(); ++i) {
        data_[i] -= o.data_[i];
    }
    return *this;
}

Matrix &Matrix::operator*=(cplx s) {
    for (auto &v : data_) {
        v *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix &b) { return a += b; }
Matrix operator-(Matrix a, const Matrix &b) { return a -= b; }
Matrix operator*(cplx s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix &a, const Matrix &b) {
    if (a.cols() != b.rows()) {
        throw ShapeMismatch("matrix product with incompatible shapes");
    }
    Matrix m(a.rows(), b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t k = 0; k < a.cols(); ++k) {
            const cplx aik = a(i, k);
            if (aik == cplx{0.0}) {
                continue;
            }
            for (std::size_t j = 0; j < b.cols(); ++j) {
                m(i, j) += aik * b(k, j);
            }
        }
    }
    return m;
}

Ket operator*(const Matrix &a, const Ket &k) {
    if (a.cols() != k.dim()) {
        throw ShapeMismatch("matrix-vector product with incompatible shapes");
    }
    Ket out(a.rows());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        cplx s{0.0};
        for (std::size_t j = 0; j < a.cols(); ++j) {
            s += a(i, j) * k[j];
        }
        out[i] = s;
    }
    return out;
}

Matrix kron(const Matrix &a, const Matrix &b) {
    Matrix m(a.rows() * b.rows(), a.cols() * b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            const cplx aij = a(i, j);
            for (std::size_t k = 0; k < b.rows(); ++k) {
                for (std::size_t l = 0; l < b.cols(); ++l) {
                    m(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return m;
}

double max_abs_diff(const Matrix &a, const Matrix &b) { return (a - b).max_abs(); }

double hermitian_residual(const Matrix &a) {
    if (!a.square()) {
        throw ShapeMismatch("hermiticity of a non-square matrix");
    }
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = i; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

Matrix hermitian_part(const Matrix &a) { return 0.5 * (a + a.adjoint()); }

cplx expectation(const Matrix &a, const Ket &k) { return inner(k, a * k); }

namespace {

Eigen::MatrixXcd to_eigen(const Matrix &a) {
    Eigen::MatrixXcd m(static_cast<Eigen::Index>(a.rows()), static_cast<Eigen::Index>(a.cols()));
    for (std::size_t i = 0; i < a.rows(); ++i)
        for (std::size_t j = 0; j < a.cols(); ++j) m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = a(i, j);
    return m;
}

} // namespace

EigenSystem herm_eig(const Matrix &input) {
    if (!input.square()) {
        throw ShapeMismatch("herm_eig needs a square matrix");
    }
    const double scale = std::max(1.0, input.max_abs());
    const double residual = hermitian_residual(input);
    if (residual > 1e-12 * scale) {
        throw NotHermitian("||a - a^dagger||_max = " + std::to_string(residual));
    }
    const std::size_t n = input.dim();
    EigenSystem es;
    es.vectors = Matrix(n, n);
    if (n == 0) {
        return es;
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(to_eigen(hermitian_part(input)));
    if (solver.info() != Eigen::Success) {
        throw NotHermitian("eigensolver did not converge");
    }
    es.values.reserve(n);
    for (std::size_t col = 0; col < n; ++col) {
        const auto c = static_cast<Eigen::Index>(col);
        es.values.push_back(solver.eigenvalues()(c));
        for (std::size_t r = 0; r < n; ++r) {
            es.vectors(r, col) = solver.eigenvectors()(static_cast<Eigen::Index>(r), c);
        }
    }
    return es;
}

Matrix psd_sqrt(const Matrix &a) {
    const EigenSystem es = herm_eig(a);
    const std::size_t n = a.dim();
    if (n > 0 && es.values.front() < -kPsdClamp) {
        throw NotPsd("minimum eigenvalue " + std::to_string(es.values.front()));
    }
    // Eigenvalues at roundoff level would otherwise contribute their square roots (~1e-8).
    const double floor = n > 0 ? kRoundoffFloor * std::max(1.0, es.values.back()) : 0.0;
    Matrix out(n, n);
    for (std::size_t k = 0; k < n; ++k) {
        const double root = es.values[k] > floor ? std::sqrt(es.values[k]) : 0.0;
        if (root == 0.0) {
            continue;
        }
        for (std::size_t i = 0; i < n; ++i) {
            const cplx vik = root * es.vectors(i, k);
            for (std::size_t j = 0; j < n; ++j) {
                out(i, j) += vik * std::conj(es.vectors(j, k));
            }
        }
    }
    return out;
}

double min_eigenvalue(const Matrix &a) {
    if (a.dim() == 0) {
        return 0.0;
    }
    return herm_eig(a).values.front();
}

std::size_t rank(const Matrix &a, double threshold) {
    const EigenSystem es = herm_eig(a);
    return static_cast<std::size_t>(
        std::count_if(es.values.begin(), es.values.end(), [&](double v) { return v > threshold; }));
}

std::vector<double> singular_values(const Matrix &a) {
    if (a.rows() == 0 || a.cols() == 0) {
        return {};
    }
    const Eigen::JacobiSVD<Eigen::MatrixXcd> svd(to_eigen(a));
    const auto &sv = svd.singularValues();
    return {sv.data(), sv.data() + sv.size()};
}

} // namespace clab
