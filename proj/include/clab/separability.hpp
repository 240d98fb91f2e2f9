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
 * Separability across the three bipartitions of three qubits, and a certificate that a
 * POVM split along the symmetric subspace cannot be biseparable.
 */

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "clab/povm.hpp"
#include "clab/tensor.hpp"

namespace clab {

/// The first block is listed first: (12|3) has parties 1 and 2 as the row index.
enum class Bipartition { P12_3, P13_2, P23_1 };

inline constexpr std::array<Bipartition, 3> kBipartitions{Bipartition::P12_3, Bipartition::P13_2, Bipartition::P23_1};

std::string to_string(Bipartition p);

/// Party relabeling that brings the first block of p to positions 1, 2.
Matrix bipartition_permutation(Bipartition p);

/// 4x2 matrix: rows index the first block, columns the remaining party.
Matrix bipartition_reshape(const Ket &v, Bipartition p);

bool schmidt_rank_one(const Ket &v, Bipartition p, double tol = 1e-10);

/// Realigned operator-Schmidt residual of an 8x8 operator across p: the second largest
/// singular value of the 16x4 realignment relative to the largest. Zero for products.
double operator_product_residual(const Matrix &x, Bipartition p);

/// tr[P3 (|Phi><Phi| (x) |phi><phi|)]
double symmetric_weight(const Ket &Phi, const Ket &phi);

struct ExamplePovms {
    Povm A;
    Povm B;
    Povm K1;
    Povm K2;
};

/// A = Bell (x) {|0><0|, |1><1|}, B = {|0><0|, |1><1|} (x) Bell, K1 = {p A_j} u {(1-p) B_j},
/// K2 = {p A_j + (1-p) B_j}. Throws OutOfRange unless 0 < p_mix < 1.
ExamplePovms example_povms(double p_mix);

struct Fact {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool holds = false;
    std::string detail;
};

struct ElementClass {
    std::string label;
    std::size_t rank = 0;
    std::array<bool, 3> product{}; ///< rank-one elements: product across each bipartition
    std::string classification;    ///< "product", "biseparable" or "unknown"
};

enum class Verdict { BiseparableConstructionFound, GenuinelyCollectiveCertified, Inconclusive };

std::string to_string(Verdict v);

struct SeparabilityReport {
    std::vector<ElementClass> elements;
    Verdict verdict = Verdict::Inconclusive;
    std::string reason;
    std::size_t complement_rank = 0;
    std::vector<Fact> facts;

    [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr double kSplitTol = 1e-10;
inline constexpr double kRankTol = 1e-8;

/// Runs the symmetric-split argument. Returns Inconclusive (with the reason) when some
/// element is not supported in P3 or I - P3, or when nothing resolves I - P3.
SeparabilityReport certify_genuinely_collective(const Povm &p);

/// Per element, a list of operators each product across the paired bipartition.
struct BiseparableConstruction {
    std::vector<std::vector<std::pair<Matrix, Bipartition>>> parts;
};

/// The explicit decomposition of K2: element j = p A_j [(12|3)] + (1-p) B_j [(23|1)].
BiseparableConstruction k2_construction(double p_mix);

/// Checks a construction against p and returns a report whose verdict is
/// BiseparableConstructionFound when every part is PSD, product across its cut, and the
/// parts sum to the element.
SeparabilityReport check_biseparable_construction(const Povm &p, const BiseparableConstruction &c);

/// Appends the facts of check_biseparable_construction to `report` without changing its verdict.
void attach_counter_facts(SeparabilityReport &report, const Povm &p, const BiseparableConstruction &c);

} // namespace clab
