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
 * Search for coin assignments between two anchored steps.
 */

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "clab/walk.hpp"

namespace clab {

struct SynthesisOptions {
    /// Site phases tried for every non-identity coin.
    std::vector<cplx> phases{cplx{1.0}, cplx{-1.0}, kI, -kI};
    /// Stop after this many solutions; 0 means no limit.
    std::size_t max_solutions = 0;
    /// Coins available to the segment. When absent, the required multiset minus the
    /// coins that the partial schedule places outside the segment.
    std::optional<std::map<CoinLabel, int>> budget;
};

/// Anchored steps usable as segment endpoints; 0 denotes the encoded input frame.
inline constexpr std::array<int, 7> kAnchorSteps{0, 1, 2, 3, 6, 8, 9};

/// Fills steps t_from+1..t_to of `partial` with every assignment whose composed map
/// takes the t_from anchor (detected sites removed) to the t_to anchor within 1e-10.
/// Results come in depth-first order over sorted occupied sites. Throws NoSolution
/// when the search is exhausted without a match.
std::vector<CoinSchedule> synthesize_segment_coins(int t_from, int t_to, const CoinSchedule &partial,
                                                   const SynthesisOptions &opts = {});

/// Chains all anchored segments with unit phases and keeps the first combination whose
/// total coin multiset equals the required one.
CoinSchedule synthesize_full_schedule();

} // namespace clab
