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
 * Single-qubit state catalog: octahedron and icosahedron vertices, the real
 * theta family, Bell states, Bloch conversion and Haar sampling.
 */

#include <array>
#include <string>
#include <vector>

#include "clab/rng.hpp"
#include "clab/tensor.hpp"

namespace clab {

struct BlochVector {
    std::array<double, 3> n{0.0, 0.0, 1.0};

    [[nodiscard]] double norm() const;
};

struct StateCatalogEntry {
    std::string label;
    Ket ket;
};

/// |0>, |1>, |+>, |->, |+i>, |-i> labelled psi1..psi6.
std::vector<StateCatalogEntry> octahedron_states();

/// Twelve icosahedron vertices (1, +-g, 0), (0, 1, +-g), (g, 0, +-1) ... normalized, g the golden ratio.
std::vector<BlochVector> icosahedron_vectors();
std::vector<StateCatalogEntry> icosahedron_states();

/// Pure state with the given Bloch vector; the first nonzero amplitude is real and
/// nonnegative. Throws NotUnit when | ||n|| - 1 | > 1e-9.
Ket ket_from_bloch(const BlochVector &n);

/// Bloch vector (<X>, <Y>, <Z>) of a normalized qubit ket.
BlochVector bloch_of(const Ket &k);

/// cos(theta)|0> + sin(theta)|1>
Ket psi_theta(double theta);

/// Haar-distributed qubit ket from two complex Gaussians.
Ket haar_random_ket(Stream &rng);

/// Haar-distributed ket of arbitrary dimension.
Ket haar_random_ket(Stream &rng, std::size_t dim);

/// k (x) k (x) k
Ket three_copy(const Ket &k);

/// Phi+, Phi-, Psi+, Psi- in that order.
std::vector<StateCatalogEntry> bell_states();

} // namespace clab
