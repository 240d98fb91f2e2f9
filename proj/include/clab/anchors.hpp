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
 * Closed-form intermediate maps U_t P of the shipped walk and the comparison of a
 * schedule against them.
 */

#include <array>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "clab/tensor.hpp"
#include "clab/walk.hpp"

namespace clab {

/// Lattice site with coin, ordered (y, x, c).
using SiteC = std::tuple<int, int, int>;

/// Amplitude map: output site -> row over the eight encoded inputs (index a*4 + b*2 + c).
using FrameMap = std::map<SiteC, std::array<cplx, 8>>;

struct AnchorFixture {
    int t = 0;
    FrameMap rows;
};

/// Anchors at t = 1, 2, 3, 6, 8, 9.
const std::vector<AnchorFixture> &anchor_fixtures();

/// The t = 9 map with its two output kets in the order of the printed closed form, which
/// no dictionary schedule reproduces. Kept for diagnostics.
AnchorFixture printed_t9_anchor();

/// Input index of the encoded site (y, x, c).
std::size_t encoded_index(int y, int x, int c);

/// State of all eight encoded inputs after step t with earlier detector sites zeroed
/// (detectors at t itself are kept). Entries below 1e-14 are dropped.
FrameMap propagate_frame(const CoinSchedule &sched, int t, const DetectorPlan &plan = DetectorPlan::default_plan(),
                         Lattice lattice = Lattice::covering());

struct AnchorComparison {
    double deviation = 0.0;        ///< after fitting one phase per connected branch
    double strict_deviation = 0.0; ///< no phase freedom
    std::size_t branches = 0;
    SiteC worst{};
};

AnchorComparison compare_frame(const FrameMap &numeric, const FrameMap &fixture);

struct AnchorResult {
    int t = 0;
    double deviation = 0.0;
    double strict_deviation = 0.0;
    std::size_t branches = 0;
    SiteC worst{};
    bool pass = false;
};

struct AnchorReport {
    std::vector<AnchorResult> anchors;
    bool pass = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

inline constexpr double kAnchorTol = 1e-10;

/// Leakage during propagation counts as failure of the affected and later anchors.
AnchorReport validate_against_anchors(const CoinSchedule &sched, const DetectorPlan &plan = DetectorPlan::default_plan());

} // namespace clab
