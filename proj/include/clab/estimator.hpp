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
 * Qubit state estimation from three copies: closed-form fidelities, Monte Carlo
 * trials, the theta sweep, the icosahedron average and noise calibration.
 */

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "clab/povm.hpp"
#include "clab/tensor.hpp"
#include "clab/walk.hpp"

namespace clab {

struct Bounds {
    double local = 0.0;       ///< (3 + sqrt 3) / 6
    double biseparable = 0.0; ///< (8 + sqrt 22) / 16
    double collective = 0.0;  ///< 4 / 5
};

Bounds bounds();

/// (2/3) sum_j |<k|psi_j>|^8 over the six octahedron states.
double analytic_fidelity(const Ket &k);

/// Expected fidelity of the estimator rule under an arbitrary seven-outcome POVM:
/// sum_j p_j |<k|psi_j>|^2 for j <= 6 plus p_7 / 2.
double analytic_fidelity(const Ket &k, const Povm &p);

enum class PovmSource { Ideal, Walk };

struct EstimationConfig {
    std::size_t trials_per_rep = 50000;
    std::size_t repetitions = 10;
    std::uint64_t master_seed = 42;
    /// Coin and phase noise applied to the walk schedule once per repetition.
    double noise_sigma = 0.0;
    PovmSource source = PovmSource::Ideal;
    /// Walk schedule; the shipped one when absent.
    std::optional<CoinSchedule> schedule;
    std::optional<DetectorPlan> plan;

    /// Throws OutOfRange on zero trials or repetitions or negative sigma.
    void check() const;
};

struct EstimationResult {
    std::string label;
    double analytic = 0.0; ///< closed form for the POVM in use (repetition average when noisy)
    double mean = 0.0;
    double std = 0.0;    ///< sample standard deviation of the repetition means
    double stderr_ = 0.0; ///< std / sqrt(repetitions)
    std::vector<double> rep_means;
    std::size_t n_trials = 0;
    bool exceeds_local = false;
    bool exceeds_biseparable = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// The POVM each repetition measures with (one entry per repetition).
std::vector<Povm> povms_for(const EstimationConfig &cfg);

/// Monte Carlo for one state. Trial (state_index, r, t) draws from its own substream, so
/// the result does not depend on the thread count.
EstimationResult run_trials(const Ket &k, const Povm &p, const EstimationConfig &cfg, std::uint64_t state_index = 0);

/// Monte Carlo for one state with the POVMs that cfg selects.
EstimationResult estimate_state(const Ket &k, const EstimationConfig &cfg, std::uint64_t state_index = 0);

/// Same as run_trials for a three-copy density matrix; fidelities are measured against `reference`.
EstimationResult run_trials(const Matrix &rho3, const Ket &reference, const Povm &p, const EstimationConfig &cfg,
                            std::uint64_t state_index = 0);

struct SweepRow {
    double theta = 0.0;
    double f_analytic = 0.0;
    double f_mc = 0.0;
    double std = 0.0;
    double stderr_ = 0.0;
    std::size_t n_trials = 0;
    bool exceeds_local = false; ///< f_mc above the local bound
};

/// theta = k pi / 16, k = 0..16, on cos(theta)|0> + sin(theta)|1>.
std::vector<SweepRow> sweep_theta(const EstimationConfig &cfg);

std::string sweep_csv(const std::vector<SweepRow> &rows);

struct AggregateResult {
    std::vector<EstimationResult> states;
    double mean = 0.0;
    double stderr_ = 0.0; ///< sqrt(sum se^2) / n
    bool exceeds_local = false;
    bool exceeds_biseparable = false;

    [[nodiscard]] nlohmann::json to_json() const;
};

AggregateResult icosahedron_average(const EstimationConfig &cfg);

struct CalibrationRow {
    double sigma = 0.0;
    double mean_fidelity = 0.0;
    double std = 0.0;
};

struct CalibrationResult {
    double sigma_star = 0.0;
    double achieved = 0.0;
    std::vector<CalibrationRow> table;

    [[nodiscard]] nlohmann::json to_json() const;
};

/// 0 to 0.1 in steps of 0.001.
std::vector<double> default_sigma_grid();

/// Mean reference-state fidelity of noisy walk POVMs over `seeds` perturbations per grid
/// point; the same perturbation draws are reused at every sigma. Returns the grid point
/// closest to the target. Throws NoBracket when the target lies outside the achieved
/// range (1e-9 slack) and OutOfRange when the target is not in (0.9, 1].
CalibrationResult calibrate_noise(double target, const std::vector<double> &grid, std::size_t seeds = 50,
                                  std::uint64_t master_seed = 42, const CoinSchedule *schedule = nullptr,
                                  const DetectorPlan *plan = nullptr);

/// Mean reference-state fidelity at one sigma (same draws as calibrate_noise).
double noisy_reference_fidelity(double sigma, std::size_t seeds, std::uint64_t master_seed,
                                const CoinSchedule &schedule, const DetectorPlan &plan);

} // namespace clab
