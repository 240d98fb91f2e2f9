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
 * Nine-step two-dimensional discrete-time quantum walk with position-dependent
 * coins and absorbing detectors.
 *
 * Sites are (y, x, c). A step applies the site coin (times an optional site phase)
 * to the coin pair at every site, then translates: vertically c=0 moves y+1 and c=1
 * moves y-1; horizontally the same along x. Three logical qubits are encoded as
 * |abc> -> (y = 1 - 2a, x = 1 - 2b, c).
 */

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "clab/povm.hpp"
#include "clab/rng.hpp"
#include "clab/tensor.hpp"

namespace clab {

/// Row-major 2x2 complex matrix acting on the coin pair (c=0, c=1).
using Mat2 = std::array<cplx, 4>;

Mat2 operator*(const Mat2 &a, const Mat2 &b);
Mat2 scaled(const Mat2 &a, cplx s);
double max_abs_diff(const Mat2 &a, const Mat2 &b);

enum class Direction { Vertical, Horizontal };

enum class CoinLabel { Identity, H1, H2, H3, H4, H5, H6, H7, H8, H9 };

inline constexpr std::array<CoinLabel, 10> kAllCoins{
    CoinLabel::Identity, CoinLabel::H1, CoinLabel::H2, CoinLabel::H3, CoinLabel::H4,
    CoinLabel::H5,       CoinLabel::H6, CoinLabel::H7, CoinLabel::H8, CoinLabel::H9};

std::string to_string(CoinLabel c);
CoinLabel parse_coin(const std::string &s);
std::string to_string(Direction d);
Direction parse_direction(const std::string &s);

/// The nine coin unitaries plus the identity.
const Mat2 &coin_matrix(CoinLabel c);

struct Lattice {
    int y_half = 4;
    int x_half = 3;

    /// Large enough that no nine-step run can reach the boundary from the encoded sites.
    static Lattice covering() { return Lattice{8, 5}; }

    [[nodiscard]] int width() const { return 2 * x_half + 1; }
    [[nodiscard]] int height() const { return 2 * y_half + 1; }
    [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(width() * height() * 2); }
    [[nodiscard]] bool contains(int y, int x) const { return std::abs(y) <= y_half && std::abs(x) <= x_half; }
    [[nodiscard]] bool interior(int y, int x) const { return std::abs(y) < y_half && std::abs(x) < x_half; }
    [[nodiscard]] std::size_t index(int y, int x, int c) const {
        return static_cast<std::size_t>(((y + y_half) * width() + (x + x_half)) * 2 + c);
    }

    friend bool operator==(const Lattice &, const Lattice &) = default;
};

struct CoinAssignment {
    int y = 0;
    int x = 0;
    CoinLabel coin = CoinLabel::Identity;
    cplx phase{1.0};
    /// Extra unitary applied after the coin (noise model); absent for ideal schedules.
    std::optional<Mat2> perturbation;

    [[nodiscard]] Mat2 effective() const;
};

struct ScheduleStep {
    int t = 0;
    Direction direction = Direction::Vertical;
    std::vector<CoinAssignment> assignments;

    /// Assignment at (y, x), or nullptr for the implicit identity.
    [[nodiscard]] const CoinAssignment *find(int y, int x) const;
};

/// Per-step directions fixed by the device: V V H V V H H V V.
inline constexpr std::array<Direction, 9> kStepDirections{
    Direction::Vertical,   Direction::Vertical,   Direction::Horizontal,
    Direction::Vertical,   Direction::Vertical,   Direction::Horizontal,
    Direction::Horizontal, Direction::Vertical,   Direction::Vertical};

struct CoinSchedule {
    std::vector<ScheduleStep> steps;

    /// Nine steps with the fixed directions and no coins.
    static CoinSchedule identity();

    [[nodiscard]] const ScheduleStep &at(int t) const;
    ScheduleStep &at(int t);
    /// True when directions match kStepDirections.
    [[nodiscard]] bool directions_valid() const;

    friend bool operator==(const CoinSchedule &a, const CoinSchedule &b);
};

struct Detector {
    int t = 0;
    int y = 0;
    int x = 0;
    std::string outcome;
};

struct DetectorPlan {
    std::vector<Detector> detectors;

    static DetectorPlan default_plan();
    /// Throws ShapeMismatch when two detectors share (t, y, x).
    void check() const;
};

class WalkState {
  public:
    WalkState() : WalkState(Lattice{}) {}
    explicit WalkState(Lattice lattice) : lattice_(lattice), amps_(lattice.size()) {}

    [[nodiscard]] const Lattice &lattice() const { return lattice_; }
    cplx &at(int y, int x, int c) { return amps_[lattice_.index(y, x, c)]; }
    [[nodiscard]] const cplx &at(int y, int x, int c) const { return amps_[lattice_.index(y, x, c)]; }
    [[nodiscard]] double norm2() const;
    /// Largest amplitude magnitude on the boundary ring.
    [[nodiscard]] double boundary_max() const;

  private:
    Lattice lattice_;
    std::vector<cplx> amps_;
};

/// Places the amplitudes of a three-qubit ket on the eight encoded sites.
WalkState encode(const Ket &k3, Lattice lattice = {});

/// One walk step U(t) = T(t) C(t). Throws Leakage if nonzero amplitude would land on
/// or beyond the lattice boundary.
WalkState step(const WalkState &s, const CoinSchedule &sched, int t);

struct DetectorRecord {
    Detector detector;
    std::array<cplx, 2> amplitudes{}; ///< coin 0, coin 1
};

struct WalkRun {
    std::vector<DetectorRecord> records; ///< in plan order
    WalkState final_state;
};

/// Runs steps 1..9; after step t every detector at t records and removes the two coin
/// amplitudes at its site.
WalkRun run_with_detectors(const WalkState &initial, const CoinSchedule &sched, const DetectorPlan &plan);

struct ExtractOptions {
    Lattice lattice{};
    /// Fold amplitude that reaches no detector into the E7 outcome. Noisy schedules
    /// need this to remain complete.
    bool residual_to_e7 = false;
};

/// Effective POVM on the encoded space: one element per distinct outcome label (sorted),
/// where detectors sharing a label are summed. Elements are A^dagger A from the 2x8
/// record matrices.
Povm extract_effective_povm(const CoinSchedule &sched, const DetectorPlan &plan, const ExtractOptions &opts = {});

/// Count of non-identity coins at sites that carry amplitude in an ideal run.
std::map<CoinLabel, int> reachable_coin_multiset(const CoinSchedule &sched, const DetectorPlan &plan);

/// Same count split by step; index 0 is unused.
std::array<std::map<CoinLabel, int>, 10> reachable_coins_per_step(const CoinSchedule &sched, const DetectorPlan &plan);

/// {H2:14, H1:4, H7:4, H3:3, H4..H6, H8, H9: 1}
std::map<CoinLabel, int> required_coin_multiset();

/// Left-multiplies every non-identity coin by exp(-i delta n.sigma / 2), delta ~ N(0, sigma),
/// n uniform on the sphere, and multiplies each listed site phase by exp(i eps), eps ~ N(0, sigma).
CoinSchedule perturb_schedule(const CoinSchedule &sched, double sigma, Stream &rng);

} // namespace clab
