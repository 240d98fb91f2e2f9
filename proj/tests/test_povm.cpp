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
#include "clab/qstate.hpp"
#include "clab/rng.hpp"
#include "clab/separability.hpp"

using namespace clab;

TEST(OptimalPovm, TracesAndValidity) {
    const Povm p = optimal_povm();
    ASSERT_EQ(p.size(), 7u);
    for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(p.elements[j].trace().real(), 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(p.elements[6].trace().real(), 4.0, 1e-12);
    const ValidationReport v = validate_povm(p);
    EXPECT_TRUE(v.pass);
    EXPECT_LE(v.completeness_residual, 1e-10);
}

TEST(OptimalPovm, E7AnnihilatesSymmetricSubspace) {
    const Matrix &P3 = symmetry_kit().P3;
    EXPECT_LE((P3 * optimal_povm().elements[6] * P3).max_abs(), 1e-12);
}

TEST(OptimalPovm, SymmetricElementsSumToThreeHalvesP3) {
    Matrix s = Matrix::zeros(8);
    for (const auto &e : octahedron_states()) s += Matrix::projector(three_copy(e.ket));
    EXPECT_LE(max_abs_diff(s, 1.5 * symmetry_kit().P3), 1e-12);
}

TEST(ValidatePovm, DoubledFirstElementFails) {
    Povm p = optimal_povm();
    p.elements[0] = 2.0 * p.elements[0];
    const ValidationReport v = validate_povm(p);
    EXPECT_FALSE(v.pass);
    EXPECT_NEAR(v.completeness_residual, optimal_povm().elements[0].max_abs(), 1e-12);
    EXPECT_GT(v.completeness_residual, 0.1);
}

TEST(ValidatePovm, NegativeElementFails) {
    Povm p = optimal_povm();
    p.elements[6] = p.elements[6] - 0.01 * Matrix::identity(8);
    p.elements[0] = p.elements[0] + 0.01 * Matrix::identity(8);
    const ValidationReport v = validate_povm(p);
    EXPECT_FALSE(v.pass);
    EXPECT_FALSE(v.elements[6].pass);
}

TEST(ValidatePovm, MixtureFixturePasses) {
    EXPECT_TRUE(validate_povm(example_povms(0.5).K2).pass);
}

TEST(SymmetryKit, Basics) {
    const SymmetryKit kit = symmetry_kit();
    EXPECT_NEAR(kit.P3.trace().real(), 4.0, 1e-12);
    EXPECT_LE(max_abs_diff(kit.W * kit.W * kit.W, Matrix::identity(8)), 1e-15);
    // W|abc> = |bca>: |100> (index 4) -> |001> (index 1).
    EXPECT_EQ(kit.W(1, 4), cplx{1.0});
    EXPECT_EQ(kit.W12(2, 4), cplx{1.0});
    EXPECT_LE(max_abs_diff(kit.Pi, kron(kit.P2A, Matrix::identity(2))), 0.0);
}

TEST(SymmetryKit, SymmetricStatesAreFixed) {
    Stream rng = Stream::derive(21, {});
    const Matrix P3 = symmetry_kit().P3;
    for (int k = 0; k < 100; ++k) {
        const Ket v = three_copy(haar_random_ket(rng));
        EXPECT_LE(max_abs_diff(P3 * v, v), 1e-12);
    }
}

TEST(PartyPermutation, MovesPartyContent) {
    // Party 0 to position 2, party 1 to 0, party 2 to 1: |abc> -> |bca>.
    const Matrix w = party_permutation({2, 0, 1});
    for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b)
            for (std::size_t c = 0; c < 2; ++c) EXPECT_EQ(w(b * 4 + c * 2 + a, a * 4 + b * 2 + c), cplx{1.0});
}

TEST(E7Decomposition, ResidualAndInvariance) {
    EXPECT_LE(e7_decomposition_check(), 1e-12);
    const SymmetryKit kit = symmetry_kit();
    const Matrix &E7 = optimal_povm().elements[6];
    EXPECT_LE(max_abs_diff(kit.W.adjoint() * E7 * kit.W, E7), 1e-12);
    EXPECT_NEAR(kit.Pi.trace().real(), 2.0, 1e-15);
}

TEST(OutcomeProbabilities, AllZeroInput) {
    const auto p = outcome_probabilities(optimal_povm(), Matrix::projector(Ket::basis(8, 0)));
    const std::vector<double> want{2.0 / 3.0, 0, 1.0 / 12, 1.0 / 12, 1.0 / 12, 1.0 / 12, 0};
    for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(p[j], want[j], 1e-12) << j;
}

TEST(OutcomeProbabilities, PlusState) {
    const auto oct = octahedron_states();
    const auto p = outcome_probabilities(optimal_povm(), three_copy(oct[2].ket));
    EXPECT_NEAR(p[2], 2.0 / 3.0, 1e-12);
    EXPECT_NEAR(p[3], 0.0, 1e-12);
    for (std::size_t j : {0u, 1u, 4u, 5u}) EXPECT_NEAR(p[j], 1.0 / 12.0, 1e-12);
    EXPECT_NEAR(p[6], 0.0, 1e-12);
}

TEST(OutcomeProbabilities, MaximallyMixed) {
    const auto p = outcome_probabilities(optimal_povm(), (1.0 / 8.0) * Matrix::identity(8));
    EXPECT_NEAR(p[6], 0.5, 1e-12);
}

TEST(OutcomeProbabilities, PureThreeCopyNeverHitsE7) {
    Stream rng = Stream::derive(22, {});
    const Povm e = optimal_povm();
    for (int k = 0; k < 200; ++k) EXPECT_LE(outcome_probabilities(e, three_copy(haar_random_ket(rng)))[6], 1e-12);
}

TEST(OutcomeProbabilities, RejectsNegative) {
    Povm p = optimal_povm();
    p.elements[0] = -1.0 * p.elements[0];
    EXPECT_THROW(outcome_probabilities(p, Ket::basis(8, 0)), NegativeProbability);
}

TEST(OutcomeProbabilities, OctahedronTableRowsSumToOne) {
    const auto oct = octahedron_states();
    const Povm e = optimal_povm();
    for (std::size_t k = 0; k < 6; ++k) {
        const auto p = outcome_probabilities(e, three_copy(oct[k].ket));
        double s = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            s += p[j];
            const double want = j == k ? 2.0 / 3.0 : (j / 2 == k / 2 ? 0.0 : 1.0 / 12.0);
            EXPECT_NEAR(p[j], want, 1e-12);
        }
        EXPECT_NEAR(s, 1.0, 1e-12);
    }
}

TEST(PovmFidelity, SelfFidelityOnSymmetricSupport) {
    const Povm s = symmetric_povm();
    EXPECT_NEAR(s.support_dim(), 4.0, 1e-12);
    EXPECT_NEAR(povm_fidelity(s, s), 1.0, 1e-12);
    EXPECT_NEAR(povm_fidelity(optimal_povm(), optimal_povm()), 1.0, 1e-12);
}

TEST(PovmFidelity, SwappedLabelsDrop) {
    const Povm s = symmetric_povm();
    Povm t = s;
    std::swap(t.elements[2], t.elements[3]);
    EXPECT_LT(povm_fidelity(s, t), 1.0 - 1e-3);
}

namespace {

Matrix block_state(const Povm &p) {
    const std::size_t n = p.dim();
    Matrix out(n * p.size(), n * p.size());
    for (std::size_t j = 0; j < p.size(); ++j)
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) out(j * n + a, j * n + b) = p.elements[j](a, b) / p.support_dim();
    return out;
}

double dense_fidelity(const Povm &a, const Povm &b) {
    const Matrix sa = block_state(a);
    const Matrix r = psd_sqrt(sa);
    const double t = psd_sqrt(hermitian_part(r * block_state(b) * r)).trace().real();
    return t * t;
}

} // namespace

TEST(PovmFidelity, BlockwiseMatchesDenseFormula) {
    const Povm s = symmetric_povm();
    Povm flat = s;
    for (auto &e : flat.elements) e = (2.0 / 3.0 / 4.0) * s.support_projector();
    EXPECT_NEAR(povm_fidelity(s, flat), dense_fidelity(s, flat), 1e-9);

    Stream rng = Stream::derive(23, {});
    for (int k = 0; k < 20; ++k) {
        Povm noisy = s;
        for (auto &e : noisy.elements) {
            const Ket v = haar_random_ket(rng, 8);
            e = e + 0.05 * (s.support_projector() * Matrix::projector(v) * s.support_projector());
        }
        EXPECT_NEAR(povm_fidelity(s, noisy), dense_fidelity(s, noisy), 1e-8);
    }
}

TEST(ReferenceFidelity, Arithmetic) {
    const std::array<double, 6> ideal{2. / 3, 2. / 3, 2. / 3, 2. / 3, 2. / 3, 2. / 3};
    EXPECT_NEAR(reference_state_fidelity(ideal), 1.0, 1e-12);
    const std::array<double, 6> half{0.5, 0.5, 0.5, 0.5, 0.5, 0.5};
    EXPECT_NEAR(reference_state_fidelity(half), 0.75, 1e-12);
}

TEST(ReferenceFidelity, AgreesWithBlockwiseForAlignedElements) {
    Stream rng = Stream::derive(24, {});
    const Povm s = symmetric_povm();
    const auto oct = octahedron_states();
    for (int k = 0; k < 100; ++k) {
        Povm b = optimal_povm();
        for (std::size_t j = 0; j < 6; ++j) {
            const double c = 0.5 + 0.3 * rng.uniform();
            b.elements[j] = c * Matrix::projector(three_copy(oct[j].ket));
        }
        Povm b6 = b;
        b6.elements.resize(6);
        b6.labels.resize(6);
        b6.support = s.support;
        EXPECT_NEAR(povm_fidelity(s, b6), reference_state_fidelity(reference_diagonal(b)), 1e-9);
    }
}
