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

#include "clab/schedule_io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>

#include "clab/errors.hpp"

namespace clab {

namespace {

constexpr const char *kDefaultSchedule = R"({
  "version": 1,
  "directions": ["V", "V", "H", "V", "V", "H", "H", "V", "V"],
  "assignments": [
    {"t": 1, "y": 1, "x": 1, "coin": "H1", "phase": [1, 0]},
    {"t": 1, "y": -1, "x": 1, "coin": "H2", "phase": [1, 0]},
    {"t": 1, "y": 1, "x": -1, "coin": "H2", "phase": [1, 0]},
    {"t": 1, "y": -1, "x": -1, "coin": "H1", "phase": [1, 0]},
    {"t": 2, "y": 2, "x": 1, "coin": "H3", "phase": [1, 0]},
    {"t": 2, "y": 0, "x": 1, "coin": "H1", "phase": [1, 0]},
    {"t": 2, "y": -2, "x": 1, "coin": "H2", "phase": [1, 0]},
    {"t": 2, "y": 2, "x": -1, "coin": "H2", "phase": [1, 0]},
    {"t": 2, "y": 0, "x": -1, "coin": "H1", "phase": [1, 0]},
    {"t": 2, "y": -2, "x": -1, "coin": "H3", "phase": [1, 0]},
    {"t": 3, "y": 1, "x": 1, "coin": "H4", "phase": [1, 0]},
    {"t": 3, "y": -1, "x": 1, "coin": "H7", "phase": [1, 0]},
    {"t": 3, "y": 1, "x": -1, "coin": "H6", "phase": [1, 0]},
    {"t": 3, "y": -1, "x": -1, "coin": "H5", "phase": [1, 0]},
    {"t": 4, "y": 1, "x": 0, "coin": "H8", "phase": [1, 0]},
    {"t": 4, "y": -1, "x": 0, "coin": "H3", "phase": [1, 0]},
    {"t": 4, "y": 1, "x": 2, "coin": "H2", "phase": [1, 0]},
    {"t": 4, "y": -1, "x": -2, "coin": "H2", "phase": [1, 0]},
    {"t": 5, "y": 2, "x": 0, "coin": "H2", "phase": [1, 0]},
    {"t": 5, "y": -2, "x": 0, "coin": "H2", "phase": [1, 0]},
    {"t": 5, "y": 0, "x": 0, "coin": "H7", "phase": [1, 0]},
    {"t": 5, "y": 0, "x": 2, "coin": "H2", "phase": [1, 0]},
    {"t": 5, "y": 0, "x": -2, "coin": "H2", "phase": [1, 0]},
    {"t": 6, "y": 1, "x": 0, "coin": "H2", "phase": [1, 0]},
    {"t": 6, "y": -1, "x": 0, "coin": "H2", "phase": [1, 0]},
    {"t": 6, "y": 1, "x": 2, "coin": "H2", "phase": [1, 0]},
    {"t": 6, "y": -1, "x": -2, "coin": "H2", "phase": [1, 0]},
    {"t": 7, "y": 1, "x": 1, "coin": "H7", "phase": [1, 0]},
    {"t": 7, "y": -1, "x": -1, "coin": "H9", "phase": [1, 0]},
    {"t": 9, "y": 0, "x": 0, "coin": "H7", "phase": [1, 0]}
  ],
  "detectors": [
    {"t": 2, "y": 3, "x": 1, "outcome": "E1"},
    {"t": 2, "y": -3, "x": -1, "outcome": "E2"},
    {"t": 3, "y": 1, "x": -2, "outcome": "E7"},
    {"t": 3, "y": -1, "x": 2, "outcome": "E7"},
    {"t": 6, "y": -1, "x": 1, "outcome": "E3"},
    {"t": 6, "y": 1, "x": -1, "outcome": "E4"},
    {"t": 8, "y": 2, "x": 2, "outcome": "E7"},
    {"t": 8, "y": -2, "x": -2, "outcome": "E7"},
    {"t": 9, "y": 1, "x": 0, "outcome": "E5"},
    {"t": 9, "y": -1, "x": 0, "outcome": "E6"}
  ]
})";

template <typename T> T field(const nlohmann::json &j, const char *key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("field '") + key + "': " + e.what());
    }
}

void only_keys(const nlohmann::json &j, std::initializer_list<const char *> allowed) {
    if (!j.is_object()) throw ParseError("expected an object");
    for (const auto &[key, value] : j.items()) {
        bool known = false;
        for (const char *a : allowed) known = known || key == a;
        if (!known) throw ParseError("unknown field '" + key + "'");
    }
}

} // namespace

nlohmann::json to_json(const CoinSchedule &sched, const DetectorPlan &plan) {
    nlohmann::json j;
    j["version"] = kScheduleVersion;
    j["directions"] = nlohmann::json::array();
    for (int t = 1; t <= 9; ++t) j["directions"].push_back(to_string(sched.at(t).direction));
    j["assignments"] = nlohmann::json::array();
    for (int t = 1; t <= 9; ++t)
        for (const auto &a : sched.at(t).assignments)
            j["assignments"].push_back({{"t", t},
                                        {"y", a.y},
                                        {"x", a.x},
                                        {"coin", to_string(a.coin)},
                                        {"phase", {a.phase.real(), a.phase.imag()}}});
    j["detectors"] = nlohmann::json::array();
    for (const auto &d : plan.detectors)
        j["detectors"].push_back({{"t", d.t}, {"y", d.y}, {"x", d.x}, {"outcome", d.outcome}});
    return j;
}

ScheduleFile schedule_from_json(const nlohmann::json &j) {
    only_keys(j, {"version", "directions", "assignments", "detectors"});
    const int version = field<int>(j, "version");
    if (version != kScheduleVersion) throw ParseError("unsupported schedule version " + std::to_string(version));
    const auto dirs = field<std::vector<std::string>>(j, "directions");
    if (dirs.size() != 9) throw ShapeMismatch("expected 9 directions, got " + std::to_string(dirs.size()));

    ScheduleFile f;
    for (int t = 1; t <= 9; ++t) f.schedule.steps.push_back(ScheduleStep{t, parse_direction(dirs[t - 1]), {}});
    if (!f.schedule.directions_valid()) throw ShapeMismatch("directions must be V V H V V H H V V");

    for (const auto &a : field<nlohmann::json>(j, "assignments")) {
        only_keys(a, {"t", "y", "x", "coin", "phase"});
        const int t = field<int>(a, "t");
        if (t < 1 || t > 9) throw ParseError("assignment step " + std::to_string(t) + " out of range");
        CoinAssignment c;
        c.y = field<int>(a, "y");
        c.x = field<int>(a, "x");
        c.coin = parse_coin(field<std::string>(a, "coin"));
        if (a.contains("phase")) {
            const auto ph = field<std::vector<double>>(a, "phase");
            if (ph.size() != 2) throw ParseError("phase must be [re, im]");
            c.phase = cplx{ph[0], ph[1]};
            if (std::abs(std::abs(c.phase) - 1.0) > 1e-9) throw ParseError("phase must have unit modulus");
        }
        auto &step = f.schedule.at(t);
        if (step.find(c.y, c.x) != nullptr)
            throw ParseError("duplicate assignment at t=" + std::to_string(t) + " (" + std::to_string(c.y) + "," +
                             std::to_string(c.x) + ")");
        step.assignments.push_back(c);
    }
    for (const auto &d : field<nlohmann::json>(j, "detectors")) {
        only_keys(d, {"t", "y", "x", "outcome"});
        f.plan.detectors.push_back(
            Detector{field<int>(d, "t"), field<int>(d, "y"), field<int>(d, "x"), field<std::string>(d, "outcome")});
    }
    f.plan.check();
    return f;
}

ScheduleFile load_schedule_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open schedule file '" + path + "'");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error &e) {
        throw ParseError(std::string("schedule file: ") + e.what());
    }
    return schedule_from_json(j);
}

const ScheduleFile &default_schedule_file() {
    static const ScheduleFile f = schedule_from_json(nlohmann::json::parse(kDefaultSchedule));
    return f;
}

const CoinSchedule &default_schedule() { return default_schedule_file().schedule; }

} // namespace clab
