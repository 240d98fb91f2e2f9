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

#include "clab/povm.hpp"

#include <algorithm>
#include <cmath>

#include "clab/errors.hpp"
#include "clab/qstate.hpp"

namespace clab {

std::size_t Povm::dim() const {
    if (!elements.empty()) {
        return elements.front().dim();
    }
    return support ? support->dim() : 0;
}

Matrix Povm::support_projector() const { return support ? *support : Matrix::identity(dim()); }

double Povm::support_dim() const { return support ? support->trace().real() : static_cast<double>(dim()); }

Povm optimal_povm() {
    Povm p;
    Matrix rest = Matrix::identity(8);
    for (const auto &s : octahedron_states()) {
        Matrix e = (2.0 / 3.0) * Matrix::projector(three_copy(s.ket));
        rest -= e;
        p.elements.push_back(std::move(e));
        p.labels.push_back("E" + std::to_string(p.labels.size() + 1));
    }
    p.elements.push_back(hermitian_part(rest));
    p.labels.push_back("E7");
    return p;
}

Povm symmetric_povm() {
    Povm full = optimal_povm();
    Povm p;
    p.elements.assign(full.elements.begin(), full.elements.begin() + 6);
    p.labels.assign(full.labels.begin(), full.labels.begin() + 6);
    p.support = symmetry_kit().P3;
    return p;
}

ValidationReport validate_povm(const Povm &p) {
    ValidationReport report;
    const std::size_t d = p.dim();
    Matrix sum(d, d);
    bool ok = true;
    for (std::size_t j = 0; j < p.elements.size(); ++j) {
        const Matrix &e = p.elements[j];
        if (e.rows() != d || e.cols() != d) {
            throw ShapeMismatch("POVM elements of differing dimension");
        }
        ElementCheck check;
        check.label = j < p.labels.size() ? p.labels[j] : "E" + std::to_string(j + 1);
        check.herm_residual = hermitian_residual(e);
        check.min_eig = min_eigenvalue(hermitian_part(e));
        check.pass = check.herm_residual <= kHermTol && check.min_eig >= -kPsdTol;
        ok = ok && check.pass;
        report.elements.push_back(check);
        sum += e;
    }
    if (d == 0) {
        report.completeness_residual = 1.0;
    } else {
        report.completeness_residual = max_abs_diff(sum, p.support_projector());
    }
    report.pass = ok && report.completeness_residual <= kCompletenessTol;
    return report;
}

Matrix party_permutation(const std::array<int, 3> &perm) {
    Matrix m(8, 8);
    for (std::size_t in = 0; in < 8; ++in) {
        std::size_t out = 0;
        for (int party = 0; party < 3; ++party) {
            const std::size_t bit = (in >> (2 - party)) & 1U;
            out |= bit << (2 - perm[party]);
        }
        m(out, in) = 1.0;
    }
    return m;
}

SymmetryKit symmetry_kit() {
    SymmetryKit kit;
    kit.W = party_permutation({2, 0, 1});
    kit.W12 = party_permutation({1, 0, 2});
    const Matrix w2 = kit.W * kit.W;
    Matrix sym = Matrix::identity(8) + kit.W + w2 + kit.W12 + kit.W * kit.W12 + w2 * kit.W12;
    kit.P3 = (1.0 / 6.0) * sym;

    Matrix swap(4, 4);
    for (std::size_t a = 0; a < 2; ++a) {
        for (std::size_t b = 0; b < 2; ++b) {
            swap(b * 2 + a, a * 2 + b) = 1.0;
        }
    }
    kit.P2A = 0.5 * (Matrix::identity(4) - swap);
    kit.Pi = kron(kit.P2A, Matrix::identity(2));
    return kit;
}

double e7_decomposition_check() {
    const SymmetryKit kit = symmetry_kit();
    const Matrix &e7 = optimal_povm().elements[6];
    const Matrix wd = kit.W.adjoint();
    const Matrix rhs = (2.0 / 3.0) * (kit.Pi + wd * kit.Pi * kit.W + kit.W * kit.Pi * wd);
    return max_abs_diff(e7, rhs);
}

namespace {

double clamp_probability(double p, std::size_t j) {
    if (p < -kPsdTol) {
        throw NegativeProbability("outcome " + std::to_string(j + 1) + " has probability " + std::to_string(p));
    }
    return std::max(0.0, p);
}

} // namespace

std::vector<double> outcome_probabilities(const Povm &p, const Matrix &rho) {
    if (rho.dim() != p.dim()) {
        throw ShapeMismatch("state and POVM dimensions differ");
    }
    std::vector<double> probs;
    probs.reserve(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        probs.push_back(clamp_probability((p.elements[j] * rho).trace().real(), j));
    }
    return probs;
}

std::vector<double> outcome_probabilities(const Povm &p, const Ket &k) {
    if (k.dim() != p.dim()) {
        throw ShapeMismatch("state and POVM dimensions differ");
    }
    std::vector<double> probs;
    probs.reserve(p.size());
    for (std::size_t j = 0; j < p.size(); ++j) {
        probs.push_back(clamp_probability(expectation(p.elements[j], k).real(), j));
    }
    return probs;
}

double povm_fidelity(const Povm &a, const Povm &b) {
    if (a.size() != b.size() || a.dim() != b.dim()) {
        throw ShapeMismatch("POVM fidelity needs equal outcome counts and dimensions");
    }
    const double d = a.support_dim();
    double total = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        const Matrix root = psd_sqrt(hermitian_part(a.elements[j]));
        const Matrix inner_op = hermitian_part(root * b.elements[j] * root);
        total += psd_sqrt(inner_op).trace().real();
    }
    const double f = total / d;
    return f * f;
}

double reference_state_fidelity(std::span<const double> diag_probs) {
    if (diag_probs.size() != 6) {
        throw ShapeMismatch("need six reference probabilities");
    }
    double s = 0.0;
    for (const double p : diag_probs) {
        if (!(p >= -1e-12 && p <= 1.0 + 1e-12)) {
            throw OutOfRange("reference probability " + std::to_string(p));
        }
        s += std::sqrt(std::clamp(p, 0.0, 1.0));
    }
    return s * s / 24.0;
}

std::array<double, 6> reference_diagonal(const Povm &measured) {
    if (measured.size() < 6 || measured.dim() != 8) {
        throw ShapeMismatch("reference diagonal needs at least six 8x8 elements");
    }
    std::array<double, 6> diag{};
    const auto refs = octahedron_states();
    for (std::size_t j = 0; j < 6; ++j) {
        const Ket k = three_copy(refs[j].ket);
        diag[j] = clamp_probability(expectation(measured.elements[j], k).real(), j);
    }
    return diag;
}

} // namespace clab
