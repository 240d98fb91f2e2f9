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

#include <gtest/gtest.h>

#include <cmath>

#include "clab/errors.hpp"
#include "clab/povm.hpp"
#include "clab/rng.hpp"
#include "clab/tensor.hpp"

using namespace clab;

namespace {

Matrix random_matrix(Stream &rng, std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m(i, j) = cplx{rng.normal(), rng.normal()};
    return m;
}

Matrix diag_of(const std::vector<double> &d) {
    Matrix m(d.size(), d.size());
    for (std::size_t i = 0; i < d.size(); ++i) m(i, i) = d[i];
    return m;
}

} // namespace

TEST(Kron, IdentityTimesIdentity) {
    EXPECT_EQ(max_abs_diff(kron(Matrix::identity(2), Matrix::identity(2)), Matrix::identity(4)), 0.0);
}

TEST(Kron, SignPattern) {
    const Matrix z{{1, 0}, {0, -1}};
    EXPECT_EQ(max_abs_diff(kron(z, z), Matrix::diagonal({1, -1, -1, 1})), 0.0);
}

TEST(Kron, BasisProjectors) {
    const Matrix p0 = Matrix::projector(Ket::basis(2, 0));
    const Matrix p1 = Matrix::projector(Ket::basis(2, 1));
    EXPECT_EQ(max_abs_diff(kron(p0, p1), Matrix::projector(Ket::basis(4, 1))), 0.0);
}

TEST(Kron, Associative) {
    Stream rng = Stream::derive(1, {});
    for (int k = 0; k < 50; ++k) {
        const Matrix a = random_matrix(rng, 2), b = random_matrix(rng, 2), c = random_matrix(rng, 2);
        EXPECT_LE(max_abs_diff(kron(kron(a, b), c), kron(a, kron(b, c))), 1e-14);
    }
}

TEST(Kron, KetOrderFirstFactorMostSignificant) {
    const Ket k = kron(Ket::basis(2, 1), Ket::basis(2, 0));
    EXPECT_EQ(k[2], cplx{1.0});
}

TEST(HermEig, DiagonalInputAscending) {
    const EigenSystem es = herm_eig(Matrix::diagonal({3, 1}));
    ASSERT_EQ(es.values.size(), 2u);
    EXPECT_NEAR(es.values[0], 1.0, 1e-14);
    EXPECT_NEAR(es.values[1], 3.0, 1e-14);
}

TEST(HermEig, PauliX) {
    const EigenSystem es = herm_eig(Matrix{{0, 1}, {1, 0}});
    EXPECT_NEAR(es.values[0], -1.0, 1e-14);
    EXPECT_NEAR(es.values[1], 1.0, 1e-14);
    const double h = 1.0 / std::sqrt(2.0);
    EXPECT_NEAR(std::abs(inner(Ket{h, -h}, es.vectors.column(0))), 1.0, 1e-14);
    EXPECT_NEAR(std::abs(inner(Ket{h, h}, es.vectors.column(1))), 1.0, 1e-14);
}

TEST(HermEig, SymmetricProjectorHasRankFour) {
    const EigenSystem es = herm_eig(symmetry_kit().P3);
    for (std::size_t k = 0; k < 8; ++k) EXPECT_NEAR(es.values[k], k < 4 ? 0.0 : 1.0, 1e-12);
}

TEST(HermEig, ReconstructsRandomHermitian) {
    Stream rng = Stream::derive(2, {});
    for (int trial = 0; trial < 1000; ++trial) {
        const Matrix m = random_matrix(rng, 8);
        const Matrix a = hermitian_part(m);
        const EigenSystem es = herm_eig(a);
        const Matrix back = es.vectors * diag_of(es.values) * es.vectors.adjoint();
        ASSERT_LE(max_abs_diff(back, a), 1e-10);
        ASSERT_LE(max_abs_diff(es.vectors.adjoint() * es.vectors, Matrix::identity(8)), 1e-12);
        ASSERT_TRUE(std::is_sorted(es.values.begin(), es.values.end()));
    }
}

TEST(HermEig, RejectsNonHermitian) {
    EXPECT_THROW(herm_eig(Matrix{{0, 1}, {0, 0}}), NotHermitian);
}

TEST(PsdSqrt, Identity) { EXPECT_LE(max_abs_diff(psd_sqrt(Matrix::identity(3)), Matrix::identity(3)), 1e-14); }

TEST(PsdSqrt, Diagonal) { EXPECT_LE(max_abs_diff(psd_sqrt(Matrix::diagonal({4, 1})), Matrix::diagonal({2, 1})), 1e-14); }

TEST(PsdSqrt, ProjectorIsIdempotent) {
    const Ket v = Ket{1, kI, 2, -1}.normalized();
    const Matrix p = Matrix::projector(v);
    EXPECT_LE(max_abs_diff(psd_sqrt(p), p), 1e-12);
}

TEST(PsdSqrt, ScaledIdentity) {
    for (double c : {0.0, 1.0, 2.0})
        EXPECT_LE(max_abs_diff(psd_sqrt(c * Matrix::identity(4)), std::sqrt(c) * Matrix::identity(4)), 1e-14);
}

TEST(PsdSqrt, ClampsRoundoffAndRejectsNegative) {
    EXPECT_LE(max_abs_diff(psd_sqrt(Matrix::diagonal({-1e-12, 1})), Matrix::diagonal({0, 1})), 1e-15);
    EXPECT_THROW(psd_sqrt(Matrix::diagonal({-1e-6, 1})), NotPsd);
}

TEST(PsdSqrt, SquaresBack) {
    Stream rng = Stream::derive(3, {});
    for (int k = 0; k < 50; ++k) {
        const Matrix m = random_matrix(rng, 6);
        const Matrix a = hermitian_part(m * m.adjoint());
        const Matrix r = psd_sqrt(a);
        EXPECT_LE(max_abs_diff(r * r, a), 1e-9 * std::max(1.0, a.max_abs()));
    }
}

TEST(SingularValues, RankOneIsExact) {
    Matrix m(4, 2);
    const Ket a = Ket{1, 2, kI, -1}.normalized();
    const Ket b = Ket{0.6, 0.8};
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 2; ++j) m(i, j) = a[i] * b[j];
    const auto sv = singular_values(m);
    ASSERT_EQ(sv.size(), 2u);
    EXPECT_NEAR(sv[0], 1.0, 1e-14);
    EXPECT_LE(sv[1], 1e-15);
}

TEST(Rank, CountsAboveThreshold) {
    EXPECT_EQ(rank(Matrix::diagonal({1, 1e-9, 0.5, 0})), 2u);
    EXPECT_NEAR(min_eigenvalue(Matrix::diagonal({2, -3, 1})), -3.0, 1e-14);
}
