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
#include <numbers>

#include "clab/errors.hpp"
#include "clab/povm.hpp"
#include "clab/qstate.hpp"
#include "clab/rng.hpp"

using namespace clab;

namespace {
const double h = 1.0 / std::sqrt(2.0);
}

TEST(Octahedron, Amplitudes) {
    const auto oct = octahedron_states();
    ASSERT_EQ(oct.size(), 6u);
    EXPECT_LE(max_abs_diff(oct[0].ket, Ket{1, 0}), 1e-15);
    EXPECT_LE(max_abs_diff(oct[4].ket, Ket{h, kI * h}), 1e-15);
}

TEST(Octahedron, PairwiseOverlaps) {
    const auto oct = octahedron_states();
    for (std::size_t j = 0; j < 6; ++j)
        for (std::size_t k = j + 1; k < 6; ++k) {
            const double want = (j / 2 == k / 2) ? 0.0 : 0.5;
            EXPECT_NEAR(std::norm(inner(oct[j].ket, oct[k].ket)), want, 1e-15) << j << "," << k;
        }
}

TEST(Octahedron, ResolvesThreeTimesIdentity) {
    Matrix s = Matrix::zeros(2);
    for (const auto &e : octahedron_states()) s += Matrix::projector(e.ket);
    EXPECT_LE(max_abs_diff(s, 3.0 * Matrix::identity(2)), 1e-12);
}

TEST(Icosahedron, FirstVertexAndNormalization) {
    const double g = (1.0 + std::sqrt(5.0)) / 2.0;
    const auto v = icosahedron_vectors();
    ASSERT_EQ(v.size(), 12u);
    const double n = std::sqrt(1.0 + g * g);
    EXPECT_NEAR(v[0].n[0], 1.0 / n, 1e-15);
    EXPECT_NEAR(v[0].n[1], g / n, 1e-15);
    EXPECT_NEAR(v[0].n[2], 0.0, 1e-15);
    for (const auto &b : v) EXPECT_NEAR(b.norm(), 1.0, 1e-15);
}

TEST(Icosahedron, MinimumPairwiseAngle) {
    const auto v = icosahedron_vectors();
    double max_cos = -1.0;
    for (std::size_t i = 0; i < 12; ++i)
        for (std::size_t j = i + 1; j < 12; ++j) {
            double c = 0.0;
            for (int a = 0; a < 3; ++a) c += v[i].n[a] * v[j].n[a];
            max_cos = std::max(max_cos, c);
        }
    EXPECT_NEAR(max_cos, 1.0 / std::sqrt(5.0), 1e-12);
}

TEST(Icosahedron, BlochRoundTrip) {
    for (const auto &e : icosahedron_states()) {
        EXPECT_NEAR(e.ket.norm(), 1.0, 1e-12);
        EXPECT_LE(max_abs_diff(ket_from_bloch(bloch_of(e.ket)), e.ket), 1e-12) << e.label;
    }
}

TEST(KetFromBloch, Poles) {
    EXPECT_LE(max_abs_diff(ket_from_bloch({{0, 0, 1}}), Ket{1, 0}), 1e-15);
    EXPECT_LE(max_abs_diff(ket_from_bloch({{1, 0, 0}}), Ket{h, h}), 1e-15);
    EXPECT_LE(max_abs_diff(ket_from_bloch({{0, 0, -1}}), Ket{0, 1}), 1e-15);
    EXPECT_THROW(ket_from_bloch({{0, 0, 1.1}}), NotUnit);
}

TEST(PsiTheta, Samples) {
    EXPECT_LE(max_abs_diff(psi_theta(0), Ket{1, 0}), 1e-15);
    EXPECT_LE(max_abs_diff(psi_theta(std::numbers::pi / 4), Ket{h, h}), 1e-15);
    EXPECT_LE(max_abs_diff(psi_theta(std::numbers::pi / 2), Ket{0, 1}), 1e-15);
}

TEST(Haar, Moments) {
    Stream rng = Stream::derive(11, {});
    double z = 0.0, p1 = 0.0, p4 = 0.0;
    const int n = 100000;
    for (int i = 0; i < n; ++i) {
        const Ket k = haar_random_ket(rng);
        const double p = std::norm(k[0]);
        z += p - std::norm(k[1]);
        p1 += p;
        p4 += p * p * p * p;
    }
    EXPECT_NEAR(z / n, 0.0, 0.01);
    EXPECT_NEAR(p1 / n, 0.5, 0.005);
    EXPECT_NEAR(p4 / n, 0.2, 0.005);
}

TEST(Haar, DeterministicPerStream) {
    Stream a = Stream::derive(5, {1, 2}), b = Stream::derive(5, {1, 2}), c = Stream::derive(5, {1, 3});
    const Ket ka = haar_random_ket(a), kb = haar_random_ket(b), kc = haar_random_ket(c);
    EXPECT_EQ(max_abs_diff(ka, kb), 0.0);
    EXPECT_GT(max_abs_diff(ka, kc), 0.0);
}

TEST(ThreeCopy, BasisAndUniform) {
    EXPECT_LE(max_abs_diff(three_copy(Ket{1, 0}), Ket::basis(8, 0)), 1e-15);
    EXPECT_LE(max_abs_diff(three_copy(Ket{0, 1}), Ket::basis(8, 7)), 1e-15);
    const Ket u = three_copy(Ket{h, h});
    for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(u[i].real(), 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
}

TEST(Bell, AmplitudesAndOrthonormality) {
    const auto bell = bell_states();
    ASSERT_EQ(bell.size(), 4u);
    EXPECT_LE(max_abs_diff(bell[0].ket, Ket{h, 0, 0, h}), 1e-15);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = 0; j < 4; ++j)
            EXPECT_NEAR(std::abs(inner(bell[i].ket, bell[j].ket)), i == j ? 1.0 : 0.0, 1e-15);
    EXPECT_LE(max_abs_diff(Matrix::projector(bell[3].ket), symmetry_kit().P2A), 1e-15);
}
