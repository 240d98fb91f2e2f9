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

#include "clab/anchors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <utility>

#include "clab/errors.hpp"

namespace clab {

namespace {

using Row = std::array<cplx, 8>;
using Term = std::pair<cplx, SiteC>;

constexpr double kDropTol = 1e-14;

Row row(std::initializer_list<Term> terms, cplx scale = 1.0) {
    Row r{};
    for (const auto &[coef, site] : terms) {
        const auto [y, x, c] = site;
        r[encoded_index(y, x, c)] += scale * coef;
    }
    return r;
}

// Input kets in the order used by the fully mixed rows.
const std::array<SiteC, 8> kMixedOrder{SiteC{1, 1, 1},  SiteC{1, 1, 0},  SiteC{1, -1, 1},  SiteC{1, -1, 0},
                                       SiteC{-1, 1, 1}, SiteC{-1, 1, 0}, SiteC{-1, -1, 1}, SiteC{-1, -1, 0}};

Row mixed(const std::array<cplx, 8> &coefs, cplx scale) {
    Row r{};
    for (std::size_t k = 0; k < 8; ++k) {
        const auto [y, x, c] = kMixedOrder[k];
        r[encoded_index(y, x, c)] += scale * coefs[k];
    }
    return r;
}

std::vector<AnchorFixture> build_fixtures() {
    const double r12 = std::sqrt(1.0 / 12.0);
    const double r2 = std::sqrt(0.5);
    const double r6 = std::sqrt(1.0 / 6.0);
    const double r13 = std::sqrt(1.0 / 3.0);
    const double r23 = std::sqrt(2.0 / 3.0);
    const cplx i = kI;

    std::vector<AnchorFixture> f;
    f.push_back({1,
                 {{{2, 1, 0}, row({{1, {1, 1, 0}}})},
                  {{0, 1, 0}, row({{1, {-1, 1, 1}}})},
                  {{0, 1, 1}, row({{-1, {1, 1, 1}}})},
                  {{-2, 1, 1}, row({{1, {-1, 1, 0}}})},
                  {{2, -1, 0}, row({{1, {1, -1, 1}}})},
                  {{0, -1, 0}, row({{1, {-1, -1, 0}}})},
                  {{0, -1, 1}, row({{1, {1, -1, 0}}})},
                  {{-2, -1, 1}, row({{-1, {-1, -1, 1}}})}}});
    f.push_back({2,
                 {{{3, 1, 0}, row({{r23, {1, 1, 0}}})},
                  {{1, 1, 1}, row({{r13, {1, 1, 0}}})},
                  {{1, 1, 0}, row({{1, {-1, 1, 1}}})},
                  {{-1, 1, 1}, row({{1, {1, 1, 1}}})},
                  {{-1, 1, 0}, row({{1, {-1, 1, 0}}})},
                  {{1, -1, 1}, row({{1, {1, -1, 1}}})},
                  {{1, -1, 0}, row({{1, {-1, -1, 0}}})},
                  {{-1, -1, 1}, row({{-1, {1, -1, 0}}})},
                  {{-1, -1, 0}, row({{-r13, {-1, -1, 1}}})},
                  {{-3, -1, 1}, row({{r23, {-1, -1, 1}}})}}});
    f.push_back({3,
                 {{{1, 2, 0}, row({{1, {1, 1, 0}}, {-3, {-1, 1, 1}}}, r12)},
                  {{1, 0, 1}, row({{1, {1, 1, 0}}, {1, {-1, 1, 1}}}, 0.5)},
                  {{-1, 2, 0}, row({{1, {1, 1, 1}}, {-1, {-1, 1, 0}}}, r2)},
                  {{-1, 0, 1}, row({{1, {1, 1, 1}}, {1, {-1, 1, 0}}}, r2)},
                  {{1, 0, 0}, row({{1, {1, -1, 1}}, {1, {-1, -1, 0}}}, r2)},
                  {{1, -2, 1}, row({{1, {-1, -1, 0}}, {-1, {1, -1, 1}}}, r2)},
                  {{-1, 0, 0}, row({{1, {1, -1, 0}}, {1, {-1, -1, 1}}}, 0.5)},
                  {{-1, -2, 1}, row({{1, {-1, -1, 1}}, {-3, {1, -1, 0}}}, r12)}}});
    f.push_back({6,
                 {{{1, 1, 1}, row({{1, {1, 1, 0}}, {-3, {-1, 1, 1}}}, r12)},
                  {{-1, -1, 0}, row({{1, {-1, -1, 1}}, {-3, {1, -1, 0}}}, r12)},
                  {{1, 1, 0}, row({{1, {1, 1, 0}}, {-2, {1, -1, 1}}, {1, {-1, 1, 1}}, {-2, {-1, -1, 0}}}, r12)},
                  {{-1, -1, 1}, row({{1, {-1, -1, 1}}, {-2, {-1, 1, 0}}, {1, {1, -1, 0}}, {-2, {1, 1, 1}}}, r12)},
                  {{-1, 1, 0}, mixed({1, 1, 1, 1, 1, 1, 1, 1}, r12)},
                  {{1, -1, 1}, mixed({-1, 1, 1, -1, 1, -1, -1, 1}, r12)}}});
    f.push_back({8,
                 {{{2, 2, 0}, row({{1, {1, -1, 1}}, {-2, {-1, 1, 1}}, {1, {-1, -1, 0}}}, r6)},
                  {{-2, -2, 1}, row({{1, {-1, 1, 0}}, {-2, {1, -1, 0}}, {1, {1, 1, 1}}}, -i * r6)},
                  {{0, 0, 1}, row({{-1, {1, 1, 0}}, {1, {1, -1, 1}}, {1, {-1, 1, 1}}, {1, {-1, -1, 0}}}, -r6)},
                  {{0, 0, 0}, row({{-1, {-1, -1, 1}}, {1, {-1, 1, 0}}, {1, {1, -1, 0}}, {1, {1, 1, 1}}}, i * r6)}}});
    const AnchorFixture printed = printed_t9_anchor();
    f.push_back({9, {{{1, 0, 0}, printed.rows.at({-1, 0, 1})}, {{-1, 0, 1}, printed.rows.at({1, 0, 0})}}});
    return f;
}

} // namespace

std::size_t encoded_index(int y, int x, int c) {
    if ((y != 1 && y != -1) || (x != 1 && x != -1) || (c != 0 && c != 1))
        throw OutOfRange("(" + std::to_string(y) + "," + std::to_string(x) + "," + std::to_string(c) +
                         ") is not an encoded site");
    return static_cast<std::size_t>(((1 - y) / 2) * 4 + ((1 - x) / 2) * 2 + c);
}

AnchorFixture printed_t9_anchor() {
    const double r12 = std::sqrt(1.0 / 12.0);
    const cplx i = kI;
    return {9,
            {{{1, 0, 0}, mixed({i, 1, -1, i, -1, i, -i, -1}, r12)},
             {{-1, 0, 1}, mixed({i, -1, 1, i, 1, i, -i, 1}, -r12)}}};
}

const std::vector<AnchorFixture> &anchor_fixtures() {
    static const std::vector<AnchorFixture> fixtures = build_fixtures();
    return fixtures;
}

FrameMap propagate_frame(const CoinSchedule &sched, int t, const DetectorPlan &plan, Lattice lattice) {
    if (t < 0 || t > 9) throw OutOfRange("frame step " + std::to_string(t));
    std::vector<WalkState> states;
    for (std::size_t a = 0; a < 8; ++a) states.push_back(encode(Ket::basis(8, a), lattice));
    for (int s = 1; s <= t; ++s) {
        for (auto &st : states) {
            st = step(st, sched, s);
            if (s == t) continue;
            for (const auto &d : plan.detectors)
                if (d.t == s && lattice.contains(d.y, d.x))
                    for (int c = 0; c < 2; ++c) st.at(d.y, d.x, c) = 0.0;
        }
    }
    FrameMap out;
    for (int y = -lattice.y_half; y <= lattice.y_half; ++y)
        for (int x = -lattice.x_half; x <= lattice.x_half; ++x)
            for (int c = 0; c < 2; ++c) {
                Row r{};
                bool any = false;
                for (std::size_t a = 0; a < 8; ++a) {
                    r[a] = states[a].at(y, x, c);
                    any = any || std::abs(r[a]) > kDropTol;
                }
                if (any) out.emplace(SiteC{y, x, c}, r);
            }
    return out;
}

AnchorComparison compare_frame(const FrameMap &numeric, const FrameMap &fixture) {
    // Branches: fixture rows linked by a shared nonzero input column.
    std::vector<SiteC> sites;
    for (const auto &[s, r] : fixture) sites.push_back(s);
    std::vector<std::size_t> parent(sites.size());
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](std::size_t k) {
        while (parent[k] != k) k = parent[k] = parent[parent[k]];
        return k;
    };
    std::array<std::ptrdiff_t, 8> owner;
    owner.fill(-1);
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const Row &r = fixture.at(sites[k]);
        for (std::size_t a = 0; a < 8; ++a) {
            if (std::abs(r[a]) <= kDropTol) continue;
            if (owner[a] < 0) {
                owner[a] = static_cast<std::ptrdiff_t>(k);
            } else {
                parent[find(k)] = find(static_cast<std::size_t>(owner[a]));
            }
        }
    }
    std::map<std::size_t, cplx> overlap;
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const auto it = numeric.find(sites[k]);
        if (it == numeric.end()) continue;
        const Row &f = fixture.at(sites[k]);
        for (std::size_t a = 0; a < 8; ++a) overlap[find(k)] += std::conj(f[a]) * it->second[a];
    }

    AnchorComparison cmp;
    std::map<std::size_t, bool> roots;
    for (std::size_t k = 0; k < sites.size(); ++k) roots[find(k)] = true;
    cmp.branches = roots.size();

    auto consider = [&](const SiteC &s, double d, double strict) {
        if (d > cmp.deviation) {
            cmp.deviation = d;
            cmp.worst = s;
        }
        cmp.strict_deviation = std::max(cmp.strict_deviation, strict);
    };
    for (std::size_t k = 0; k < sites.size(); ++k) {
        const Row &f = fixture.at(sites[k]);
        const auto it = numeric.find(sites[k]);
        const cplx ov = overlap[find(k)];
        const cplx phase = std::abs(ov) > kDropTol ? ov / std::abs(ov) : cplx{1.0};
        double d = 0.0, strict = 0.0;
        for (std::size_t a = 0; a < 8; ++a) {
            const cplx n = it == numeric.end() ? cplx{} : it->second[a];
            d = std::max(d, std::abs(n - phase * f[a]));
            strict = std::max(strict, std::abs(n - f[a]));
        }
        consider(sites[k], d, strict);
    }
    for (const auto &[s, r] : numeric) {
        if (fixture.count(s) != 0) continue;
        double m = 0.0;
        for (const auto &v : r) m = std::max(m, std::abs(v));
        consider(s, m, m);
    }
    return cmp;
}

nlohmann::json AnchorReport::to_json() const {
    nlohmann::json j;
    j["pass"] = pass;
    j["tolerance"] = kAnchorTol;
    j["anchors"] = nlohmann::json::array();
    for (const auto &a : anchors) {
        const auto [y, x, c] = a.worst;
        j["anchors"].push_back({{"t", a.t},
                                {"deviation", a.deviation},
                                {"strict_deviation", a.strict_deviation},
                                {"branches", a.branches},
                                {"worst_site", {y, x, c}},
                                {"pass", a.pass}});
    }
    return j;
}

AnchorReport validate_against_anchors(const CoinSchedule &sched, const DetectorPlan &plan) {
    AnchorReport report;
    report.pass = true;
    for (const auto &fx : anchor_fixtures()) {
        AnchorResult r;
        r.t = fx.t;
        try {
            const AnchorComparison cmp = compare_frame(propagate_frame(sched, fx.t, plan), fx.rows);
            r.deviation = cmp.deviation;
            r.strict_deviation = cmp.strict_deviation;
            r.branches = cmp.branches;
            r.worst = cmp.worst;
            r.pass = cmp.deviation <= kAnchorTol;
        } catch (const Leakage &) {
            r.deviation = r.strict_deviation = std::numeric_limits<double>::infinity();
            r.pass = false;
        }
        report.pass = report.pass && r.pass;
        report.anchors.push_back(r);
    }
    return report;
}

} // namespace clab
