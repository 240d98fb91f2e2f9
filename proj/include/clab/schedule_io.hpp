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
 * JSON form of coin schedules and detector plans, and the shipped default schedule.
 *
 * {
 *   "version": 1,
 *   "directions": ["V", ...],                        // nine entries
 *   "assignments": [{"t": 1, "y": 1, "x": 1, "coin": "H1", "phase": [1, 0]}, ...],
 *   "detectors": [{"t": 2, "y": 3, "x": 1, "outcome": "E1"}, ...]
 * }
 */

#include <string>

#include <json.hpp>

#include "clab/walk.hpp"

namespace clab {

inline constexpr int kScheduleVersion = 1;

struct ScheduleFile {
    CoinSchedule schedule;
    DetectorPlan plan;
};

nlohmann::json to_json(const CoinSchedule &sched, const DetectorPlan &plan);

/// Throws ParseError on malformed input and ShapeMismatch on invalid directions or detectors.
ScheduleFile schedule_from_json(const nlohmann::json &j);

ScheduleFile load_schedule_file(const std::string &path);

/// The shipped schedule (30 coins, unit phases) with the default detector plan.
const ScheduleFile &default_schedule_file();
const CoinSchedule &default_schedule();

} // namespace clab
