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
 * POVMs on three qubits: the seven-outcome octahedron measurement, validation,
 * permutation and symmetric-subspace operators, outcome probabilities and the
 * POVM fidelity.
 */

#include <array>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "clab/tensor.hpp"

namespace clab {

struct Povm {
    std::vector<Matrix> elements;
    std::vector<std::string> labels;
    /// Projector the elements resolve; identity when empty.
    std::optional<Matrix> support;

    [[nodiscard]] std::size_t size() const { return elements.size(); }
    [[nodiscard]] std::size_t dim() const;
    [[nodiscard]] Matrix support_projector() const;
    /// Dimension of the declared support (its trace).
    [[nodiscard]] double support_dim() const;
};

struct ElementCheck {
    std::string label;
    double herm_residual = 0.0;
    double min_eig = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ElementCheck> elements;
    double completeness_residual = 0.0;
    bool pass = false;
};

inline constexpr double kHermTol = 1e-12;
inline constexpr double kPsdTol = 1e-10;
inline constexpr double kCompletenessTol = 1e-10;

/// E_j = (2/3)(|psi_j><psi_j|)^{x3} for j = 1..6 and E7 = I - sum E_j.
Povm optimal_povm();

/// The first six elements of optimal_povm() on support P3 (d = 4).
Povm symmetric_povm();

ValidationReport validate_povm(const Povm &p);

struct SymmetryKit {
    Matrix P3;  ///< projector onto Sym_3
    Matrix P2A; ///< two-qubit antisymmetric projector
    Matrix W;   ///< cyclic permutation, W|abc> = |bca>
    Matrix W12; ///< swap of parties 1 and 2
    Matrix Pi;  ///< P2A (x) I
};

/// Unitary that relabels parties: content of party k moves to position perm[k] (0-based).
Matrix party_permutation(const std::array<int, 3> &perm);

SymmetryKit symmetry_kit();

/// ||E7 - (2/3)(Pi + W^dagger Pi W + W Pi W^dagger)||_max
double e7_decomposition_check();

/// tr(E_j rho), clamped to 0 above -1e-10; throws NegativeProbability below that.
std::vector<double> outcome_probabilities(const Povm &p, const Matrix &rho);
/// Same for a pure state, <k|E_j|k>.
std::vector<double> outcome_probabilities(const Povm &p, const Ket &k);

/// Blockwise POVM fidelity (sum_j tr sqrt(sqrt(A_j) B_j sqrt(A_j)) / d)^2, d the support dimension of a.
double povm_fidelity(const Povm &a, const Povm &b);

/// (1/24) (sum_j sqrt(p'_jj))^2 from the six diagonal reference-state probabilities.
double reference_state_fidelity(std::span<const double> diag_probs);

/// Diagonal probabilities p'_jj = <psi_j^{x3}|E'_j|psi_j^{x3}> for j = 1..6.
std::array<double, 6> reference_diagonal(const Povm &measured);

} // namespace clab
