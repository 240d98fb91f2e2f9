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

#include "clab/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <utility>

#include "clab/anchors.hpp"
#include "clab/errors.hpp"

namespace clab {

namespace {

using Row = std::array<cplx, 8>;
using Site = std::pair<int, int>;
using Frame = std::map<Site, std::array<Row, 2>>;

constexpr double kZeroTol = 1e-12;
constexpr double kSpanTol = 1e-9;

double row_norm(const Row &r) {
    double s = 0.0;
    for (const auto &v : r) s += std::norm(v);
    return std::sqrt(s);
}

bool is_anchor(int t) { return std::find(kAnchorSteps.begin(), kAnchorSteps.end(), t) != kAnchorSteps.end(); }

Frame frame_from_fixture(const FrameMap &rows) {
    Frame f;
    for (const auto &[s, r] : rows) {
        const auto [y, x, c] = s;
        f[{y, x}][static_cast<std::size_t>(c)] = r;
    }
    return f;
}

Frame start_frame(int t_from, const DetectorPlan &plan) {
    Frame f;
    if (t_from == 0) {
        for (int y : {1, -1})
            for (int x : {1, -1})
                for (int c = 0; c < 2; ++c) {
                    Row r{};
                    r[encoded_index(y, x, c)] = 1.0;
                    f[{y, x}][static_cast<std::size_t>(c)] = r;
                }
        return f;
    }
    const auto &fx = anchor_fixtures();
    const auto it = std::find_if(fx.begin(), fx.end(), [&](const auto &a) { return a.t == t_from; });
    f = frame_from_fixture(it->rows);
    for (const auto &d : plan.detectors)
        if (d.t == t_from) f.erase({d.y, d.x});
    return f;
}

/// Orthonormal basis (Gram-Schmidt) of a set of rows.
std::vector<Row> orthonormal_basis(const std::vector<Row> &rows) {
    std::vector<Row> basis;
    for (Row v : rows) {
        for (const auto &b : basis) {
            cplx ov{};
            for (std::size_t a = 0; a < 8; ++a) ov += std::conj(b[a]) * v[a];
            for (std::size_t a = 0; a < 8; ++a) v[a] -= ov * b[a];
        }
        const double n = row_norm(v);
        if (n > 1e-9) {
            for (auto &e : v) e /= n;
            basis.push_back(v);
        }
    }
    return basis;
}

double span_residual(const Row &v, const std::vector<Row> &basis) {
    Row r = v;
    for (const auto &b : basis) {
        cplx ov{};
        for (std::size_t a = 0; a < 8; ++a) ov += std::conj(b[a]) * r[a];
        for (std::size_t a = 0; a < 8; ++a) r[a] -= ov * b[a];
    }
    return row_norm(r);
}

struct StepPlan {
    int t = 0;
    bool vertical = true;
    bool last = false;
    std::vector<Site> sources;
    std::vector<std::array<Row, 2>> inputs;
    std::vector<Site> dests;
    std::vector<std::array<std::size_t, 2>> dest_of; ///< per source: dest for coin 0, coin 1
    std::vector<std::vector<std::size_t>> completes; ///< per source: dests whose rows are final
    std::vector<std::vector<Row>> cone;              ///< per dest: basis of reachable target rows
};

class SegmentSearch {
  public:
    SegmentSearch(int t_from, int t_to, const SynthesisOptions &opts, std::map<CoinLabel, int> budget,
                  const DetectorPlan &plan)
        : t_from_(t_from), t_to_(t_to), opts_(opts), budget_(std::move(budget)) {
        const auto &fx = anchor_fixtures();
        const auto it = std::find_if(fx.begin(), fx.end(), [&](const auto &a) { return a.t == t_to; });
        target_ = frame_from_fixture(it->rows);
        start_ = start_frame(t_from, plan);
    }

    std::vector<std::vector<std::vector<CoinAssignment>>> run() {
        chosen_.assign(static_cast<std::size_t>(t_to_ - t_from_), {});
        descend_step(t_from_ + 1, start_);
        return solutions_;
    }

  private:
    StepPlan plan_step(int t, const Frame &frame) const {
        StepPlan p;
        p.t = t;
        p.vertical = kStepDirections[static_cast<std::size_t>(t - 1)] == Direction::Vertical;
        p.last = t == t_to_;
        std::map<Site, std::size_t> dest_index;
        for (const auto &[s, rows] : frame) {
            p.sources.push_back(s);
            p.inputs.push_back(rows);
        }
        auto dest_site = [&](const Site &s, int c) -> Site {
            const int d = c == 0 ? 1 : -1;
            return p.vertical ? Site{s.first + d, s.second} : Site{s.first, s.second + d};
        };
        for (const auto &s : p.sources)
            for (int c = 0; c < 2; ++c) dest_index.emplace(dest_site(s, c), 0);
        for (auto &[s, idx] : dest_index) {
            idx = p.dests.size();
            p.dests.push_back(s);
        }
        std::vector<std::size_t> last_source(p.dests.size(), 0);
        for (std::size_t k = 0; k < p.sources.size(); ++k) {
            std::array<std::size_t, 2> d{dest_index.at(dest_site(p.sources[k], 0)),
                                         dest_index.at(dest_site(p.sources[k], 1))};
            p.dest_of.push_back(d);
            last_source[d[0]] = std::max(last_source[d[0]], k);
            last_source[d[1]] = std::max(last_source[d[1]], k);
        }
        p.completes.resize(p.sources.size());
        for (std::size_t d = 0; d < p.dests.size(); ++d) p.completes[last_source[d]].push_back(d);

        int nv = 0, nh = 0;
        for (int u = t + 1; u <= t_to_; ++u)
            (kStepDirections[static_cast<std::size_t>(u - 1)] == Direction::Vertical ? nv : nh)++;
        p.cone.resize(p.dests.size());
        if (!p.last) {
            for (std::size_t d = 0; d < p.dests.size(); ++d) {
                std::vector<Row> rows;
                for (const auto &[s, coin_rows] : target_) {
                    const int dy = std::abs(s.first - p.dests[d].first);
                    const int dx = std::abs(s.second - p.dests[d].second);
                    if (dy <= nv && dx <= nh && (nv - dy) % 2 == 0 && (nh - dx) % 2 == 0)
                        for (const auto &r : coin_rows) rows.push_back(r);
                }
                p.cone[d] = orthonormal_basis(rows);
            }
        }
        return p;
    }

    bool dest_ok(const StepPlan &p, std::size_t d, const std::array<Row, 2> &rows) const {
        if (p.last) {
            const auto it = target_.find(p.dests[d]);
            for (std::size_t c = 0; c < 2; ++c) {
                const Row want = it == target_.end() ? Row{} : it->second[c];
                for (std::size_t a = 0; a < 8; ++a)
                    if (std::abs(rows[c][a] - want[a]) > kAnchorTol) return false;
            }
            return true;
        }
        for (const auto &r : rows)
            if (row_norm(r) > kZeroTol && span_residual(r, p.cone[d]) > kSpanTol) return false;
        return true;
    }

    bool done() const { return opts_.max_solutions != 0 && solutions_.size() >= opts_.max_solutions; }

    void descend_step(int t, const Frame &frame) {
        if (done()) return;
        if (t > t_to_) {
            solutions_.push_back(chosen_);
            return;
        }
        const StepPlan p = plan_step(t, frame);
        std::vector<std::array<Row, 2>> out(p.dests.size());
        descend_site(p, 0, out);
    }

    void descend_site(const StepPlan &p, std::size_t k, std::vector<std::array<Row, 2>> &out) {
        if (done()) return;
        if (k == p.sources.size()) {
            Frame next;
            for (std::size_t d = 0; d < p.dests.size(); ++d)
                if (row_norm(out[d][0]) > kZeroTol || row_norm(out[d][1]) > kZeroTol) next[p.dests[d]] = out[d];
            descend_step(p.t + 1, next);
            return;
        }
        auto &step_choice = chosen_[static_cast<std::size_t>(p.t - t_from_ - 1)];
        const auto &in = p.inputs[k];
        for (CoinLabel coin : kAllCoins) {
            const bool identity = coin == CoinLabel::Identity;
            if (!identity) {
                const auto b = budget_.find(coin);
                if (b == budget_.end() || used_[coin] >= b->second) continue;
            }
            const std::vector<cplx> unit{cplx{1.0}};
            for (const cplx phase : identity ? unit : opts_.phases) {
                const Mat2 m = scaled(coin_matrix(coin), phase);
                std::array<Row, 2> contrib;
                for (std::size_t a = 0; a < 8; ++a) {
                    contrib[0][a] = m[0] * in[0][a] + m[1] * in[1][a];
                    contrib[1][a] = m[2] * in[0][a] + m[3] * in[1][a];
                }
                for (std::size_t c = 0; c < 2; ++c)
                    for (std::size_t a = 0; a < 8; ++a) out[p.dest_of[k][c]][c][a] += contrib[c][a];
                bool ok = true;
                for (std::size_t d : p.completes[k]) ok = ok && dest_ok(p, d, out[d]);
                if (ok) {
                    if (!identity) {
                        ++used_[coin];
                        step_choice.push_back(CoinAssignment{p.sources[k].first, p.sources[k].second, coin, phase, {}});
                    }
                    descend_site(p, k + 1, out);
                    if (!identity) {
                        --used_[coin];
                        step_choice.pop_back();
                    }
                }
                for (std::size_t c = 0; c < 2; ++c)
                    for (std::size_t a = 0; a < 8; ++a) out[p.dest_of[k][c]][c][a] -= contrib[c][a];
                if (done()) return;
            }
        }
    }

    int t_from_;
    int t_to_;
    const SynthesisOptions &opts_;
    std::map<CoinLabel, int> budget_;
    std::map<CoinLabel, int> used_;
    Frame start_;
    Frame target_;
    std::vector<std::vector<CoinAssignment>> chosen_;
    std::vector<std::vector<std::vector<CoinAssignment>>> solutions_;
};

std::map<CoinLabel, int> coins_used(const std::vector<std::vector<CoinAssignment>> &steps) {
    std::map<CoinLabel, int> m;
    for (const auto &s : steps)
        for (const auto &a : s) ++m[a.coin];
    return m;
}

} // namespace

std::vector<CoinSchedule> synthesize_segment_coins(int t_from, int t_to, const CoinSchedule &partial,
                                                   const SynthesisOptions &opts) {
    if (!is_anchor(t_from) || !is_anchor(t_to) || t_from >= t_to)
        throw OutOfRange("segment " + std::to_string(t_from) + "->" + std::to_string(t_to) +
                         " does not join two anchored steps");
    if (!partial.directions_valid()) throw ShapeMismatch("partial schedule has invalid step directions");
    const DetectorPlan plan = DetectorPlan::default_plan();

    std::map<CoinLabel, int> budget;
    if (opts.budget) {
        budget = *opts.budget;
    } else {
        budget = required_coin_multiset();
        const auto per_step = reachable_coins_per_step(partial, plan);
        for (int t = 1; t <= 9; ++t) {
            if (t > t_from && t <= t_to) continue;
            for (const auto &[coin, n] : per_step[static_cast<std::size_t>(t)]) budget[coin] = std::max(0, budget[coin] - n);
        }
    }

    SegmentSearch search(t_from, t_to, opts, budget, plan);
    const auto found = search.run();
    if (found.empty())
        throw NoSolution("no coin assignment maps anchor t=" + std::to_string(t_from) + " to t=" + std::to_string(t_to));

    std::vector<CoinSchedule> out;
    out.reserve(found.size());
    for (const auto &steps : found) {
        CoinSchedule s = partial;
        for (int t = t_from + 1; t <= t_to; ++t) s.at(t).assignments = steps[static_cast<std::size_t>(t - t_from - 1)];
        out.push_back(std::move(s));
    }
    return out;
}

CoinSchedule synthesize_full_schedule() {
    SynthesisOptions opts;
    opts.phases = {cplx{1.0}};
    opts.budget = required_coin_multiset();
    const CoinSchedule blank = CoinSchedule::identity();

    struct Option {
        CoinSchedule sched;
        std::map<CoinLabel, int> coins;
        int t_from;
        int t_to;
    };
    std::vector<std::vector<Option>> segments;
    for (std::size_t k = 0; k + 1 < kAnchorSteps.size(); ++k) {
        const int a = kAnchorSteps[k];
        const int b = kAnchorSteps[k + 1];
        std::vector<Option> opts_k;
        for (auto &s : synthesize_segment_coins(a, b, blank, opts)) {
            std::vector<std::vector<CoinAssignment>> steps;
            for (int t = a + 1; t <= b; ++t) steps.push_back(s.at(t).assignments);
            opts_k.push_back(Option{std::move(s), coins_used(steps), a, b});
        }
        segments.push_back(std::move(opts_k));
    }

    const auto required = required_coin_multiset();
    std::vector<std::size_t> pick(segments.size(), 0);
    std::map<CoinLabel, int> used;
    std::function<bool(std::size_t)> choose = [&](std::size_t k) -> bool {
        if (k == segments.size()) return used == required;
        for (std::size_t j = 0; j < segments[k].size(); ++j) {
            bool fits = true;
            for (const auto &[coin, n] : segments[k][j].coins) {
                used[coin] += n;
                fits = fits && used[coin] <= required.at(coin);
            }
            pick[k] = j;
            if (fits && choose(k + 1)) return true;
            for (const auto &[coin, n] : segments[k][j].coins)
                if ((used[coin] -= n) == 0) used.erase(coin);
        }
        return false;
    };
    if (!choose(0)) throw NoSolution("no combination of segment solutions uses the required coin multiset");

    CoinSchedule full = blank;
    for (std::size_t k = 0; k < segments.size(); ++k) {
        const Option &o = segments[k][pick[k]];
        for (int t = o.t_from + 1; t <= o.t_to; ++t) full.at(t).assignments = o.sched.at(t).assignments;
    }
    return full;
}

} // namespace clab
