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

#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "clab/anchors.hpp"
#include "clab/errors.hpp"
#include "clab/estimator.hpp"
#include "clab/povm.hpp"
#include "clab/qstate.hpp"
#include "clab/rng.hpp"
#include "clab/schedule_io.hpp"
#include "clab/synthesis.hpp"
#include "clab/walk.hpp"

using namespace clab;

namespace {

bool is_unitary(const Mat2 &m, double tol) {
    const cplx a = m[0], b = m[1], c = m[2], d = m[3];
    return std::abs(std::norm(a) + std::norm(c) - 1.0) <= tol && std::abs(std::norm(b) + std::norm(d) - 1.0) <= tol &&
           std::abs(std::conj(a) * b + std::conj(c) * d) <= tol;
}

double total_prob(const DetectorRecord &r) { return std::norm(r.amplitudes[0]) + std::norm(r.amplitudes[1]); }

const DetectorRecord &record_at(const WalkRun &run, int t, int y, int x) {
    for (const auto &r : run.records)
        if (r.detector.t == t && r.detector.y == y && r.detector.x == x) return r;
    throw std::runtime_error("no detector");
}

} // namespace

TEST(CoinDictionary, AllUnitary) {
    for (const CoinLabel c : kAllCoins) EXPECT_TRUE(is_unitary(coin_matrix(c), 1e-14)) << to_string(c);
}

TEST(CoinDictionary, ParseRoundTrip) {
    for (const CoinLabel c : kAllCoins) EXPECT_EQ(parse_coin(to_string(c)), c);
    EXPECT_THROW(parse_coin("H10"), ParseError);
    EXPECT_EQ(parse_direction(to_string(Direction::Horizontal)), Direction::Horizontal);
}

TEST(CoinDictionary, H3SplitsTwoThirds) {
    const Mat2 &h = coin_matrix(CoinLabel::H3);
    EXPECT_NEAR(std::norm(h[0]), 2.0 / 3.0, 1e-14);
    EXPECT_NEAR(std::norm(h[2]), 1.0 / 3.0, 1e-14);
}

TEST(Encode, BasisStates) {
    const WalkState s0 = encode(Ket::basis(8, 0));
    EXPECT_EQ(s0.at(1, 1, 0), cplx{1.0});
    EXPECT_NEAR(s0.norm2(), 1.0, 1e-15);
    const WalkState s7 = encode(Ket::basis(8, 7));
    EXPECT_EQ(s7.at(-1, -1, 1), cplx{1.0});
}

TEST(Encode, UniformThreeCopy) {
    const Ket plus = Ket{1.0, 1.0}.normalized();
    const WalkState s = encode(three_copy(plus));
    for (int y : {-1, 1})
        for (int x : {-1, 1})
            for (int c : {0, 1}) EXPECT_NEAR(std::abs(s.at(y, x, c)), 1.0 / (2.0 * std::sqrt(2.0)), 1e-15);
}

TEST(Encode, IndexHelperMatchesEncode) {
    for (std::size_t k = 0; k < 8; ++k) {
        const WalkState s = encode(Ket::basis(8, k));
        const int y = 1 - 2 * static_cast<int>(k >> 2), x = 1 - 2 * static_cast<int>((k >> 1) & 1U);
        const int c = static_cast<int>(k & 1U);
        EXPECT_EQ(s.at(y, x, c), cplx{1.0});
        EXPECT_EQ(encoded_index(y, x, c), k);
    }
    EXPECT_THROW((void)encoded_index(2, 1, 0), OutOfRange);
}

TEST(Step, FirstStepTerms) {
    const CoinSchedule &sched = default_schedule();
    WalkState a;
    a.at(1, 1, 0) = 1.0;
    const WalkState a1 = step(a, sched, 1);
    EXPECT_NEAR(std::abs(a1.at(2, 1, 0)), 1.0, 1e-14);
    WalkState b;
    b.at(-1, 1, 0) = 1.0;
    const WalkState b1 = step(b, sched, 1);
    EXPECT_NEAR(std::abs(b1.at(-2, 1, 1)), 1.0, 1e-14);
}

TEST(Step, ZeroStaysZero) {
    const WalkState z = step(WalkState{}, default_schedule(), 1);
    EXPECT_EQ(z.norm2(), 0.0);
}

TEST(Step, NormPreservedEachStep) {
    Stream rng = Stream::derive(31, {});
    const CoinSchedule &sched = default_schedule();
    for (int trial = 0; trial < 20; ++trial) {
        WalkState s = encode(haar_random_ket(rng, 8), Lattice::covering());
        for (int t = 1; t <= 9; ++t) {
            const double before = s.norm2();
            s = step(s, sched, t);
            EXPECT_NEAR(s.norm2(), before, 1e-12);
        }
    }
}

TEST(Step, LeakageDetected) {
    WalkState s;
    s.at(3, 0, 0) = 1.0;
    EXPECT_THROW(step(s, CoinSchedule::identity(), 1), Leakage);
}

TEST(Schedule, DirectionsAndIdentity) {
    EXPECT_TRUE(default_schedule().directions_valid());
    CoinSchedule bad = default_schedule();
    bad.at(3).direction = Direction::Vertical;
    EXPECT_FALSE(bad.directions_valid());
    EXPECT_TRUE(CoinSchedule::identity().directions_valid());
}

TEST(Schedule, CoinMultiset) {
    const auto got = reachable_coin_multiset(default_schedule(), DetectorPlan::default_plan());
    EXPECT_EQ(got, required_coin_multiset());
    int total = 0;
    for (const auto &[c, n] : got) total += n;
    EXPECT_EQ(total, 30);
    EXPECT_EQ(got.at(CoinLabel::H2), 14);
    EXPECT_EQ(got.at(CoinLabel::H1), 4);
    EXPECT_EQ(got.at(CoinLabel::H7), 4);
    EXPECT_EQ(got.at(CoinLabel::H3), 3);
    for (CoinLabel c : {CoinLabel::H4, CoinLabel::H5, CoinLabel::H6, CoinLabel::H8, CoinLabel::H9})
        EXPECT_EQ(got.at(c), 1);
}

TEST(DetectorPlanTest, DefaultAndDuplicates) {
    const DetectorPlan p = DetectorPlan::default_plan();
    EXPECT_EQ(p.detectors.size(), 10u);
    EXPECT_NO_THROW(p.check());
    DetectorPlan dup = p;
    dup.detectors.push_back(p.detectors.front());
    EXPECT_THROW(dup.check(), ShapeMismatch);
}

TEST(Detectors, AllZeroInputHitsFirstDetector) {
    const WalkRun run = run_with_detectors(encode(Ket::basis(8, 0)), default_schedule(), DetectorPlan::default_plan());
    const DetectorRecord &r = record_at(run, 2, 3, 1);
    EXPECT_NEAR(std::abs(r.amplitudes[0]), std::sqrt(2.0 / 3.0), 1e-12);
    EXPECT_NEAR(std::abs(r.amplitudes[1]), 0.0, 1e-12);
}

TEST(Detectors, FifthStateHitsFifthDetector) {
    const auto oct = octahedron_states();
    const WalkRun run =
        run_with_detectors(encode(three_copy(oct[4].ket)), default_schedule(), DetectorPlan::default_plan());
    EXPECT_NEAR(total_prob(record_at(run, 9, 1, 0)), 2.0 / 3.0, 1e-12);
    for (const auto &r : run.records)
        if (r.detector.outcome == "E7") EXPECT_LE(total_prob(r), 1e-12);
}

TEST(Detectors, ZeroInputGivesZeroRecords) {
    const WalkRun run = run_with_detectors(WalkState{}, default_schedule(), DetectorPlan::default_plan());
    for (const auto &r : run.records) EXPECT_EQ(total_prob(r), 0.0);
}

TEST(Detectors, RecordsMatchIdealProbabilities) {
    const Povm e = optimal_povm();
    std::vector<Ket> inputs;
    for (const auto &s : octahedron_states()) inputs.push_back(three_copy(s.ket));
    for (const auto &s : icosahedron_states()) inputs.push_back(three_copy(s.ket));
    for (const Ket &k : inputs) {
        const WalkRun run = run_with_detectors(encode(k), default_schedule(), DetectorPlan::default_plan());
        std::map<std::string, double> got;
        for (const auto &r : run.records) got[r.detector.outcome] += total_prob(r);
        const auto want = outcome_probabilities(e, k);
        for (std::size_t j = 0; j < 7; ++j) EXPECT_NEAR(got["E" + std::to_string(j + 1)], want[j], 1e-10);
        EXPECT_LE(run.final_state.norm2(), 1e-20);
        EXPECT_EQ(run.final_state.boundary_max(), 0.0);
    }
}

TEST(Extract, MatchesIdealPovm) {
    const Povm w = extract_effective_povm(default_schedule(), DetectorPlan::default_plan());
    const Povm e = optimal_povm();
    ASSERT_EQ(w.size(), 7u);
    for (std::size_t j = 0; j < 7; ++j) {
        EXPECT_EQ(w.labels[j], e.labels[j]);
        EXPECT_LE(max_abs_diff(w.elements[j], e.elements[j]), 1e-10) << w.labels[j];
    }
    EXPECT_LE(max_abs_diff(w.elements[0], (2.0 / 3.0) * Matrix::projector(Ket::basis(8, 0))), 1e-10);
    EXPECT_TRUE(validate_povm(w).pass);
    EXPECT_GE(povm_fidelity(w, e), 1.0 - 1e-9);
}

TEST(Extract, EmptyPlanIsIncomplete) {
    ExtractOptions opts;
    opts.lattice = Lattice::covering();
    const Povm w = extract_effective_povm(CoinSchedule::identity(), DetectorPlan{}, opts);
    EXPECT_EQ(w.size(), 0u);
    EXPECT_FALSE(validate_povm(w).pass);
}

TEST(Anchors, ShippedSchedulePasses) {
    const AnchorReport rep = validate_against_anchors(default_schedule());
    EXPECT_TRUE(rep.pass);
    ASSERT_EQ(rep.anchors.size(), 6u);
    const std::array<int, 6> ts{1, 2, 3, 6, 8, 9};
    for (std::size_t i = 0; i < 6; ++i) {
        EXPECT_EQ(rep.anchors[i].t, ts[i]);
        EXPECT_LE(rep.anchors[i].deviation, 1e-10) << ts[i];
    }
}

TEST(Anchors, SecondAnchorHasTenTerms) {
    std::size_t terms = 0;
    for (const auto &fx : anchor_fixtures())
        if (fx.t == 2)
            for (const auto &[site, row] : fx.rows)
                for (const cplx v : row) terms += std::abs(v) > 0.0 ? 1 : 0;
    EXPECT_EQ(terms, 10u);
}

TEST(Anchors, SingleCoinChangeBreaksFirstAnchor) {
    CoinSchedule s = default_schedule();
    bool changed = false;
    for (auto &a : s.at(1).assignments)
        if (a.y == 1 && a.x == 1) {
            ASSERT_EQ(a.coin, CoinLabel::H1);
            a.coin = CoinLabel::H2;
            changed = true;
        }
    ASSERT_TRUE(changed);
    const AnchorReport rep = validate_against_anchors(s);
    EXPECT_FALSE(rep.pass);
    EXPECT_FALSE(rep.anchors.front().pass);
    EXPECT_GE(rep.anchors.front().strict_deviation, 1.0 - 1e-12);
}

TEST(Anchors, IdentityScheduleFailsAll) {
    const AnchorReport rep = validate_against_anchors(CoinSchedule::identity());
    EXPECT_FALSE(rep.pass);
    for (const auto &a : rep.anchors) EXPECT_FALSE(a.pass) << a.t;
}

TEST(Anchors, PrintedLastAnchorDiffersFromCorrected) {
    const FrameMap numeric = propagate_frame(default_schedule(), 9);
    EXPECT_LE(compare_frame(numeric, anchor_fixtures().back().rows).deviation, 1e-10);
    EXPECT_GT(compare_frame(numeric, printed_t9_anchor().rows).deviation, 1e-3);
}

TEST(Anchors, BranchPhaseIsQuotiented) {
    const FrameMap numeric = propagate_frame(default_schedule(), 2);
    FrameMap rotated = numeric;
    for (auto &[site, row] : rotated)
        for (cplx &v : row) v *= kI;
    const AnchorComparison c = compare_frame(rotated, numeric);
    EXPECT_LE(c.deviation, 1e-12);
    EXPECT_GT(c.strict_deviation, 1.0);
}

TEST(ScheduleIo, RoundTrip) {
    const ScheduleFile &f = default_schedule_file();
    const ScheduleFile back = schedule_from_json(to_json(f.schedule, f.plan));
    EXPECT_TRUE(back.schedule == f.schedule);
    EXPECT_EQ(back.plan.detectors.size(), f.plan.detectors.size());
    EXPECT_TRUE(validate_against_anchors(back.schedule, back.plan).pass);
}

TEST(ScheduleIo, FileRoundTrip) {
    const auto path = std::filesystem::temp_directory_path() / "clab_schedule_roundtrip.json";
    {
        std::ofstream out(path);
        out << to_json(default_schedule(), DetectorPlan::default_plan()).dump(2);
    }
    const ScheduleFile f = load_schedule_file(path.string());
    EXPECT_TRUE(f.schedule == default_schedule());
    std::filesystem::remove(path);
}

TEST(ScheduleIo, RejectsMalformed) {
    EXPECT_THROW(schedule_from_json(nlohmann::json::parse(R"({"version": 1})")), LabError);
    nlohmann::json j = to_json(default_schedule(), DetectorPlan::default_plan());
    j["unexpected"] = 1;
    EXPECT_THROW(schedule_from_json(j), LabError);
    EXPECT_THROW(load_schedule_file("/nonexistent/clab.json"), LabError);
}

TEST(Perturb, ZeroSigmaIsIdentical) {
    Stream rng = Stream::derive(7, {});
    const CoinSchedule p = perturb_schedule(default_schedule(), 0.0, rng);
    const Povm a = extract_effective_povm(p, DetectorPlan::default_plan());
    const Povm b = extract_effective_povm(default_schedule(), DetectorPlan::default_plan());
    for (std::size_t j = 0; j < a.size(); ++j) EXPECT_EQ(max_abs_diff(a.elements[j], b.elements[j]), 0.0);
}

TEST(Perturb, SmallNoiseKeepsCompleteness) {
    Stream rng = Stream::derive(7, {});
    const CoinSchedule p = perturb_schedule(default_schedule(), 0.01, rng);
    ExtractOptions opts;
    opts.lattice = Lattice::covering();
    opts.residual_to_e7 = true;
    const Povm w = extract_effective_povm(p, DetectorPlan::default_plan(), opts);
    EXPECT_TRUE(validate_povm(w).pass);
    const double f = povm_fidelity(w, optimal_povm());
    EXPECT_LT(f, 1.0);
    EXPECT_GT(f, 0.99);
}

TEST(Perturb, FidelityTrendsDown) {
    const std::array<double, 4> sigmas{0.0, 0.005, 0.01, 0.02};
    double prev = 2.0;
    for (const double s : sigmas) {
        const double f = noisy_reference_fidelity(s, 50, 42, default_schedule(), DetectorPlan::default_plan());
        EXPECT_LE(f, prev + 1e-12) << s;
        prev = f;
    }
}

TEST(Synthesis, FirstSegmentUnique) {
    const auto sols = synthesize_segment_coins(0, 1, CoinSchedule::identity());
    ASSERT_EQ(sols.size(), 1u);
    const ScheduleStep &s = sols.front().at(1);
    const auto coin_at = [&](int y, int x) {
        const CoinAssignment *a = s.find(y, x);
        return a ? a->coin : CoinLabel::Identity;
    };
    EXPECT_EQ(coin_at(1, 1), CoinLabel::H1);
    EXPECT_EQ(coin_at(-1, 1), CoinLabel::H2);
    EXPECT_EQ(coin_at(1, -1), CoinLabel::H2);
    EXPECT_EQ(coin_at(-1, -1), CoinLabel::H1);
}

TEST(Synthesis, SecondSegmentUsesH3) {
    const auto first = synthesize_segment_coins(0, 1, CoinSchedule::identity());
    const auto sols = synthesize_segment_coins(1, 2, first.front());
    ASSERT_EQ(sols.size(), 1u);
    const CoinAssignment *a = sols.front().at(2).find(2, 1);
    ASSERT_NE(a, nullptr);
    EXPECT_EQ(a->coin, CoinLabel::H3);
}

TEST(Synthesis, MiddleSegmentSolutionsAgree) {
    const CoinSchedule &shipped = default_schedule();
    SynthesisOptions opts;
    opts.phases = {cplx{1.0}};
    const auto sols = synthesize_segment_coins(3, 6, shipped, opts);
    ASSERT_FALSE(sols.empty());
    const Povm ref = extract_effective_povm(shipped, DetectorPlan::default_plan());
    for (const auto &s : sols) {
        const Povm w = extract_effective_povm(s, DetectorPlan::default_plan());
        for (std::size_t j = 0; j < w.size(); ++j) EXPECT_LE(max_abs_diff(w.elements[j], ref.elements[j]), 1e-10);
    }
}

TEST(Synthesis, FullScheduleMatchesShipped) {
    const CoinSchedule s = synthesize_full_schedule();
    EXPECT_TRUE(validate_against_anchors(s).pass);
    EXPECT_EQ(reachable_coin_multiset(s, DetectorPlan::default_plan()), required_coin_multiset());
    EXPECT_TRUE(s == default_schedule());
}

TEST(Synthesis, BadSegmentRejected) {
    EXPECT_THROW(synthesize_segment_coins(1, 4, CoinSchedule::identity()), OutOfRange);
}

TEST(Synthesis, ImpossibleBudgetExhausts) {
    SynthesisOptions opts;
    opts.budget = std::map<CoinLabel, int>{};
    EXPECT_THROW(synthesize_segment_coins(0, 1, CoinSchedule::identity(), opts), NoSolution);
}
