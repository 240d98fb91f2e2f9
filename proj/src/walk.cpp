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

#include "clab/walk.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <tuple>
#include <utility>

#include "clab/errors.hpp"

namespace clab {

namespace {

constexpr double kLeakTol = 1e-13;
constexpr double kOccupiedTol = 1e-13;

} // namespace

Mat2 operator*(const Mat2 &a, const Mat2 &b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
            a[2] * b[1] + a[3] * b[3]};
}

Mat2 scaled(const Mat2 &a, cplx s) { return {a[0] * s, a[1] * s, a[2] * s, a[3] * s}; }

double max_abs_diff(const Mat2 &a, const Mat2 &b) {
    double m = 0.0;
    for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

std::string to_string(CoinLabel c) {
    if (c == CoinLabel::Identity) return "I";
    return "H" + std::to_string(static_cast<int>(c));
}

CoinLabel parse_coin(const std::string &s) {
    for (CoinLabel c : kAllCoins)
        if (to_string(c) == s) return c;
    if (s == "IDENTITY") return CoinLabel::Identity;
    throw ParseError("unknown coin label '" + s + "'");
}

std::string to_string(Direction d) { return d == Direction::Vertical ? "V" : "H"; }

Direction parse_direction(const std::string &s) {
    if (s == "V") return Direction::Vertical;
    if (s == "H") return Direction::Horizontal;
    throw ParseError("unknown direction '" + s + "'");
}

const Mat2 &coin_matrix(CoinLabel c) {
    static const std::array<Mat2, 10> table = [] {
        const double s2 = std::sqrt(2.0);
        const double s3 = std::sqrt(3.0);
        const double h = 1.0 / s2;
        return std::array<Mat2, 10>{
            Mat2{1, 0, 0, 1},
            Mat2{1, 0, 0, -1},
            Mat2{0, 1, 1, 0},
            Mat2{s2 / s3, 1 / s3, 1 / s3, -s2 / s3},
            Mat2{-s3 / 2, 0.5, 0.5, s3 / 2},
            Mat2{-s3 / 2, -0.5, -0.5, s3 / 2},
            Mat2{h, h, h, -h},
            Mat2{-h, h, h, h},
            Mat2{-s2 / s3, 1 / s3, 1 / s3, s2 / s3},
            Mat2{-kI * h, -kI * h, -kI * h, kI * h},
        };
    }();
    return table[static_cast<std::size_t>(c)];
}

Mat2 CoinAssignment::effective() const {
    Mat2 m = scaled(coin_matrix(coin), phase);
    if (perturbation) m = *perturbation * m;
    return m;
}

const CoinAssignment *ScheduleStep::find(int y, int x) const {
    for (const auto &a : assignments)
        if (a.y == y && a.x == x) return &a;
    return nullptr;
}

CoinSchedule CoinSchedule::identity() {
    CoinSchedule s;
    for (int t = 1; t <= 9; ++t) s.steps.push_back(ScheduleStep{t, kStepDirections[t - 1], {}});
    return s;
}

const ScheduleStep &CoinSchedule::at(int t) const {
    for (const auto &s : steps)
        if (s.t == t) return s;
    throw OutOfRange("schedule has no step " + std::to_string(t));
}

ScheduleStep &CoinSchedule::at(int t) {
    return const_cast<ScheduleStep &>(std::as_const(*this).at(t));
}

bool CoinSchedule::directions_valid() const {
    if (steps.size() != 9) return false;
    for (int t = 1; t <= 9; ++t) {
        const auto it = std::find_if(steps.begin(), steps.end(), [t](const auto &s) { return s.t == t; });
        if (it == steps.end() || it->direction != kStepDirections[t - 1]) return false;
    }
    return true;
}

namespace {

using SiteKey = std::tuple<int, int, CoinLabel, double, double, bool>;

std::vector<SiteKey> canonical(const ScheduleStep &s) {
    std::vector<SiteKey> keys;
    for (const auto &a : s.assignments) {
        if (a.coin == CoinLabel::Identity && a.phase == cplx{1.0} && !a.perturbation) continue;
        keys.emplace_back(a.y, a.x, a.coin, a.phase.real(), a.phase.imag(), a.perturbation.has_value());
    }
    std::sort(keys.begin(), keys.end());
    return keys;
}

} // namespace

bool operator==(const CoinSchedule &a, const CoinSchedule &b) {
    if (a.steps.size() != b.steps.size()) return false;
    for (const auto &sa : a.steps) {
        const auto it = std::find_if(b.steps.begin(), b.steps.end(), [&](const auto &s) { return s.t == sa.t; });
        if (it == b.steps.end() || it->direction != sa.direction) return false;
        if (canonical(sa) != canonical(*it)) return false;
    }
    return true;
}

DetectorPlan DetectorPlan::default_plan() {
    return DetectorPlan{{
        {2, 3, 1, "E1"},
        {2, -3, -1, "E2"},
        {3, 1, -2, "E7"},
        {3, -1, 2, "E7"},
        {6, -1, 1, "E3"},
        {6, 1, -1, "E4"},
        {8, 2, 2, "E7"},
        {8, -2, -2, "E7"},
        {9, 1, 0, "E5"},
        {9, -1, 0, "E6"},
    }};
}

void DetectorPlan::check() const {
    std::set<std::tuple<int, int, int>> seen;
    for (const auto &d : detectors) {
        if (d.t < 1 || d.t > 9) throw OutOfRange("detector step " + std::to_string(d.t));
        if (!seen.emplace(d.t, d.y, d.x).second)
            throw ShapeMismatch("two detectors at t=" + std::to_string(d.t) + " (" + std::to_string(d.y) + "," +
                                std::to_string(d.x) + ")");
    }
}

double WalkState::norm2() const {
    double s = 0.0;
    for (const auto &a : amps_) s += std::norm(a);
    return s;
}

double WalkState::boundary_max() const {
    double m = 0.0;
    for (int y = -lattice_.y_half; y <= lattice_.y_half; ++y)
        for (int x = -lattice_.x_half; x <= lattice_.x_half; ++x) {
            if (lattice_.interior(y, x)) continue;
            for (int c = 0; c < 2; ++c) m = std::max(m, std::abs(at(y, x, c)));
        }
    return m;
}

WalkState encode(const Ket &k3, Lattice lattice) {
    if (k3.dim() != 8) throw ShapeMismatch("encode expects a three-qubit ket");
    WalkState s(lattice);
    for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
            for (int c = 0; c < 2; ++c) s.at(1 - 2 * a, 1 - 2 * b, c) = k3[static_cast<std::size_t>(a * 4 + b * 2 + c)];
    return s;
}

WalkState step(const WalkState &s, const CoinSchedule &sched, int t) {
    if (t < 1 || t > 9) throw OutOfRange("step index " + std::to_string(t));
    const ScheduleStep &st = sched.at(t);
    const Lattice &L = s.lattice();
    WalkState out(L);
    const bool vertical = st.direction == Direction::Vertical;
    auto deposit = [&](int y, int x, int c, cplx v) {
        if (std::abs(v) <= kLeakTol) {
            if (L.interior(y, x)) out.at(y, x, c) += v;
            return;
        }
        if (!L.interior(y, x))
            throw Leakage("amplitude " + std::to_string(std::abs(v)) + " reaches (" + std::to_string(y) + "," +
                          std::to_string(x) + ") at t=" + std::to_string(t));
        out.at(y, x, c) += v;
    };
    for (int y = -L.y_half; y <= L.y_half; ++y)
        for (int x = -L.x_half; x <= L.x_half; ++x) {
            const cplx a0 = s.at(y, x, 0);
            const cplx a1 = s.at(y, x, 1);
            if (a0 == cplx{} && a1 == cplx{}) continue;
            const CoinAssignment *asg = st.find(y, x);
            cplx b0 = a0, b1 = a1;
            if (asg != nullptr) {
                const Mat2 m = asg->effective();
                b0 = m[0] * a0 + m[1] * a1;
                b1 = m[2] * a0 + m[3] * a1;
            }
            if (vertical) {
                deposit(y + 1, x, 0, b0);
                deposit(y - 1, x, 1, b1);
            } else {
                deposit(y, x + 1, 0, b0);
                deposit(y, x - 1, 1, b1);
            }
        }
    return out;
}

WalkRun run_with_detectors(const WalkState &initial, const CoinSchedule &sched, const DetectorPlan &plan) {
    WalkRun run;
    run.records.reserve(plan.detectors.size());
    for (const auto &d : plan.detectors) run.records.push_back(DetectorRecord{d, {}});
    WalkState s = initial;
    const Lattice &L = initial.lattice();
    for (int t = 1; t <= 9; ++t) {
        s = step(s, sched, t);
        for (auto &r : run.records) {
            if (r.detector.t != t || !L.contains(r.detector.y, r.detector.x)) continue;
            for (int c = 0; c < 2; ++c) {
                r.amplitudes[static_cast<std::size_t>(c)] = s.at(r.detector.y, r.detector.x, c);
                s.at(r.detector.y, r.detector.x, c) = 0.0;
            }
        }
    }
    run.final_state = std::move(s);
    return run;
}

Povm extract_effective_povm(const CoinSchedule &sched, const DetectorPlan &plan, const ExtractOptions &opts) {
    plan.check();
    std::vector<std::string> labels;
    for (const auto &d : plan.detectors) labels.push_back(d.outcome);
    std::sort(labels.begin(), labels.end());
    labels.erase(std::unique(labels.begin(), labels.end()), labels.end());

    std::vector<WalkRun> runs;
    runs.reserve(8);
    for (std::size_t a = 0; a < 8; ++a) runs.push_back(run_with_detectors(encode(Ket::basis(8, a), opts.lattice), sched, plan));

    Povm p;
    p.support = Matrix::identity(8);
    for (const auto &label : labels) {
        Matrix e = Matrix::zeros(8);
        for (std::size_t m = 0; m < plan.detectors.size(); ++m) {
            if (plan.detectors[m].outcome != label) continue;
            for (std::size_t a = 0; a < 8; ++a)
                for (std::size_t b = 0; b < 8; ++b) {
                    cplx v{};
                    for (std::size_t c = 0; c < 2; ++c)
                        v += std::conj(runs[a].records[m].amplitudes[c]) * runs[b].records[m].amplitudes[c];
                    e(a, b) += v;
                }
        }
        p.elements.push_back(std::move(e));
        p.labels.push_back(label);
    }

    if (opts.residual_to_e7) {
        const auto it = std::find(p.labels.begin(), p.labels.end(), "E7");
        if (it == p.labels.end()) throw ShapeMismatch("plan has no E7 outcome to absorb the residual");
        Matrix &e7 = p.elements[static_cast<std::size_t>(it - p.labels.begin())];
        const Lattice &L = opts.lattice;
        for (int y = -L.y_half; y <= L.y_half; ++y)
            for (int x = -L.x_half; x <= L.x_half; ++x)
                for (int c = 0; c < 2; ++c)
                    for (std::size_t a = 0; a < 8; ++a)
                        for (std::size_t b = 0; b < 8; ++b)
                            e7(a, b) += std::conj(runs[a].final_state.at(y, x, c)) * runs[b].final_state.at(y, x, c);
    }
    return p;
}

std::map<CoinLabel, int> reachable_coin_multiset(const CoinSchedule &sched, const DetectorPlan &plan) {
    std::map<CoinLabel, int> total;
    for (const auto &per_step : reachable_coins_per_step(sched, plan))
        for (const auto &[coin, n] : per_step) total[coin] += n;
    return total;
}

std::array<std::map<CoinLabel, int>, 10> reachable_coins_per_step(const CoinSchedule &sched, const DetectorPlan &plan) {
    // Occupied sites per step are taken from the union over all eight basis inputs.
    std::array<std::map<CoinLabel, int>, 10> counts;
    std::vector<WalkState> states;
    for (std::size_t a = 0; a < 8; ++a) states.push_back(encode(Ket::basis(8, a), Lattice::covering()));
    const Lattice L = Lattice::covering();
    for (int t = 1; t <= 9; ++t) {
        const ScheduleStep &st = sched.at(t);
        for (const auto &asg : st.assignments) {
            if (asg.coin == CoinLabel::Identity || !L.contains(asg.y, asg.x)) continue;
            const bool occupied = std::any_of(states.begin(), states.end(), [&](const WalkState &s) {
                return std::abs(s.at(asg.y, asg.x, 0)) > kOccupiedTol || std::abs(s.at(asg.y, asg.x, 1)) > kOccupiedTol;
            });
            if (occupied) ++counts[static_cast<std::size_t>(t)][asg.coin];
        }
        for (auto &s : states) {
            s = step(s, sched, t);
            for (const auto &d : plan.detectors)
                if (d.t == t)
                    for (int c = 0; c < 2; ++c) s.at(d.y, d.x, c) = 0.0;
        }
    }
    return counts;
}

std::map<CoinLabel, int> required_coin_multiset() {
    return {{CoinLabel::H1, 4}, {CoinLabel::H2, 14}, {CoinLabel::H3, 3}, {CoinLabel::H4, 1}, {CoinLabel::H5, 1},
            {CoinLabel::H6, 1}, {CoinLabel::H7, 4},  {CoinLabel::H8, 1}, {CoinLabel::H9, 1}};
}

CoinSchedule perturb_schedule(const CoinSchedule &sched, double sigma, Stream &rng) {
    if (sigma < 0.0) throw OutOfRange("sigma must be nonnegative");
    if (sigma == 0.0) return sched;
    CoinSchedule out = sched;
    for (auto &st : out.steps)
        for (auto &a : st.assignments) {
            if (a.coin != CoinLabel::Identity) {
                const double delta = sigma * rng.normal();
                const double nz = 2.0 * rng.uniform() - 1.0;
                const double phi = 2.0 * std::acos(-1.0) * rng.uniform();
                const double r = std::sqrt(std::max(0.0, 1.0 - nz * nz));
                const double nx = r * std::cos(phi);
                const double ny = r * std::sin(phi);
                const double c = std::cos(delta / 2.0);
                const double s = std::sin(delta / 2.0);
                // exp(-i delta n.sigma / 2) = cos(delta/2) I - i sin(delta/2) n.sigma
                const Mat2 rot{cplx{c, -s * nz}, cplx{-s * ny, -s * nx}, cplx{s * ny, -s * nx}, cplx{c, s * nz}};
                a.perturbation = a.perturbation ? rot * *a.perturbation : rot;
            }
            a.phase *= std::polar(1.0, sigma * rng.normal());
        }
    return out;
}

} // namespace clab
