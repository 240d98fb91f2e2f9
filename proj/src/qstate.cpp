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

#include "clab/qstate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "clab/errors.hpp"

namespace clab {

double BlochVector::norm() const { return std::sqrt(n[0] * n[0] + n[1] * n[1] + n[2] * n[2]); }

std::vector<StateCatalogEntry> octahedron_states() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {
        {"psi1", Ket{1.0, 0.0}},
        {"psi2", Ket{0.0, 1.0}},
        {"psi3", Ket{r, r}},
        {"psi4", Ket{r, -r}},
        {"psi5", Ket{r, cplx{0.0, r}}},
        {"psi6", Ket{r, cplx{0.0, -r}}},
    };
}

std::vector<BlochVector> icosahedron_vectors() {
    const double g = std::numbers::phi;
    const double s = 1.0 / std::sqrt(1.0 + g * g);
    const std::array<std::array<double, 3>, 12> raw{{
        {1, g, 0}, {1, -g, 0}, {-1, g, 0}, {-1, -g, 0},
        {0, 1, g}, {0, 1, -g}, {0, -1, g}, {0, -1, -g},
        {g, 0, 1}, {-g, 0, 1}, {g, 0, -1}, {-g, 0, -1},
    }};
    std::vector<BlochVector> out;
    out.reserve(raw.size());
    for (const auto &v : raw) {
        out.push_back(BlochVector{{s * v[0], s * v[1], s * v[2]}});
    }
    return out;
}

std::vector<StateCatalogEntry> icosahedron_states() {
    std::vector<StateCatalogEntry> out;
    int i = 1;
    for (const auto &n : icosahedron_vectors()) {
        out.push_back({"n" + std::to_string(i++), ket_from_bloch(n)});
    }
    return out;
}

Ket ket_from_bloch(const BlochVector &bloch) {
    const double len = bloch.norm();
    if (std::abs(len - 1.0) > 1e-9) {
        throw NotUnit("Bloch vector norm " + std::to_string(len));
    }
    const auto &n = bloch.n;
    const double nz = std::clamp(n[2] / len, -1.0, 1.0);
    const double up = std::sqrt(0.5 * (1.0 + nz));
    const double down = std::sqrt(0.5 * (1.0 - nz));
    const double transverse = std::hypot(n[0], n[1]);
    cplx lower = down;
    if (transverse > 0.0) {
        lower = down * cplx{n[0] / transverse, n[1] / transverse};
    }
    if (up == 0.0) {
        return Ket{0.0, 1.0};
    }
    return Ket{up, lower};
}

BlochVector bloch_of(const Ket &k) {
    if (k.dim() != 2) {
        throw ShapeMismatch("Bloch vector of a non-qubit ket");
    }
    const cplx c = std::conj(k[0]) * k[1];
    return BlochVector{{2.0 * c.real(), 2.0 * c.imag(), std::norm(k[0]) - std::norm(k[1])}};
}

Ket psi_theta(double theta) { return Ket{std::cos(theta), std::sin(theta)}; }

Ket haar_random_ket(Stream &rng) { return haar_random_ket(rng, 2); }

Ket haar_random_ket(Stream &rng, std::size_t dim) {
    Ket k(dim);
    for (std::size_t i = 0; i < dim; ++i) {
        const double re = rng.normal();
        const double im = rng.normal();
        k[i] = cplx{re, im};
    }
    return k.normalized();
}

Ket three_copy(const Ket &k) { return kron(kron(k, k), k); }

std::vector<StateCatalogEntry> bell_states() {
    const double r = 1.0 / std::numbers::sqrt2;
    return {
        {"Phi+", Ket{r, 0.0, 0.0, r}},
        {"Phi-", Ket{r, 0.0, 0.0, -r}},
        {"Psi+", Ket{0.0, r, r, 0.0}},
        {"Psi-", Ket{0.0, r, -r, 0.0}},
    };
}

} // namespace clab
