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

#include "clab/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <numbers>
#include <sstream>

#include "clab/errors.hpp"
#include "clab/parallel.hpp"
#include "clab/qstate.hpp"
#include "clab/rng.hpp"
#include "clab/schedule_io.hpp"

namespace clab {

namespace {

// Substream tags keep noise draws apart from trial draws.
constexpr std::uint64_t kNoiseTag = 0x6e6f697365ULL;
constexpr std::uint64_t kCalibrationTag = 0x63616c6962ULL;

struct Task {
    std::string label;
    Ket reference;
    std::uint64_t state_index = 0;
    /// Outcome probabilities per repetition.
    std::vector<std::vector<double>> probs;
};

std::array<double, 6> estimator_overlaps(const Ket &k) {
    static const auto oct = octahedron_states();
    std::array<double, 6> f{};
    for (std::size_t j = 0; j < 6; ++j) f[j] = std::norm(inner(oct[j].ket, k));
    return f;
}

double rep_mean(const Task &task, const std::array<double, 6> &overlaps, const EstimationConfig &cfg, std::size_t rep) {
    const std::vector<double> &p = task.probs[rep];
    std::vector<double> cdf(p.size());
    std::partial_sum(p.begin(), p.end(), cdf.begin());
    std::size_t last = 0;
    for (std::size_t j = 0; j < p.size(); ++j)
        if (p[j] > 0.0) last = j;
    double sum = 0.0;
    for (std::size_t t = 0; t < cfg.trials_per_rep; ++t) {
        Stream s = Stream::derive(cfg.master_seed, {task.state_index, rep, t});
        const double u = s.uniform() * cdf.back();
        std::size_t j = static_cast<std::size_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        j = std::min(j, last);
        if (j < 6) {
            sum += overlaps[j];
        } else {
            sum += std::norm(inner(task.reference, haar_random_ket(s)));
        }
    }
    return sum / static_cast<double>(cfg.trials_per_rep);
}

std::vector<EstimationResult> run_tasks(const std::vector<Task> &tasks, const EstimationConfig &cfg) {
    const std::size_t reps = cfg.repetitions;
    std::vector<std::array<double, 6>> overlaps;
    for (const auto &t : tasks) overlaps.push_back(estimator_overlaps(t.reference));
    std::vector<double> means(tasks.size() * reps);
    parallel_for(means.size(), [&](std::size_t i) {
        const std::size_t k = i / reps;
        means[i] = rep_mean(tasks[k], overlaps[k], cfg, i % reps);
    });
    const Bounds b = bounds();
    std::vector<EstimationResult> out;
    for (std::size_t k = 0; k < tasks.size(); ++k) {
        EstimationResult r;
        r.label = tasks[k].label;
        r.rep_means.assign(means.begin() + static_cast<std::ptrdiff_t>(k * reps),
                           means.begin() + static_cast<std::ptrdiff_t>((k + 1) * reps));
        r.mean = std::accumulate(r.rep_means.begin(), r.rep_means.end(), 0.0) / static_cast<double>(reps);
        double ss = 0.0;
        for (double m : r.rep_means) ss += (m - r.mean) * (m - r.mean);
        r.std = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1)) : 0.0;
        r.stderr_ = r.std / std::sqrt(static_cast<double>(reps));
        r.n_trials = cfg.trials_per_rep * reps;
        double analytic = 0.0;
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const auto &p = tasks[k].probs[rep];
            double a = 0.0;
            for (std::size_t j = 0; j < p.size(); ++j) a += p[j] * (j < 6 ? overlaps[k][j] : 0.5);
            analytic += a;
        }
        r.analytic = analytic / static_cast<double>(reps);
        r.exceeds_local = r.mean > b.local;
        r.exceeds_biseparable = r.mean > b.biseparable;
        out.push_back(std::move(r));
    }
    return out;
}

Task pure_task(std::string label, const Ket &k, std::uint64_t index, const std::vector<Povm> &povms) {
    Task t{std::move(label), k, index, {}};
    const Ket k3 = three_copy(k);
    for (const auto &p : povms) t.probs.push_back(outcome_probabilities(p, k3));
    return t;
}

void check_povm(const Povm &p) {
    if (p.size() != 7) throw ShapeMismatch("estimator needs a seven-outcome POVM, got " + std::to_string(p.size()));
}

} // namespace

Bounds bounds() {
    return Bounds{(3.0 + std::sqrt(3.0)) / 6.0, (8.0 + std::sqrt(22.0)) / 16.0, 0.8};
}

double analytic_fidelity(const Ket &k) {
    if (k.dim() != 2) throw ShapeMismatch("analytic_fidelity expects a qubit");
    double s = 0.0;
    for (double f : estimator_overlaps(k)) s += f * f * f * f;
    return 2.0 / 3.0 * s;
}

double analytic_fidelity(const Ket &k, const Povm &p) {
    check_povm(p);
    const auto probs = outcome_probabilities(p, three_copy(k));
    const auto f = estimator_overlaps(k);
    double s = 0.5 * probs[6];
    for (std::size_t j = 0; j < 6; ++j) s += probs[j] * f[j];
    return s;
}

void EstimationConfig::check() const {
    if (trials_per_rep == 0) throw OutOfRange("trials must be at least 1");
    if (repetitions == 0) throw OutOfRange("repetitions must be at least 1");
    if (!(noise_sigma >= 0.0)) throw OutOfRange("noise sigma must be nonnegative");
}

std::vector<Povm> povms_for(const EstimationConfig &cfg) {
    cfg.check();
    if (cfg.source == PovmSource::Ideal && cfg.noise_sigma == 0.0)
        return std::vector<Povm>(cfg.repetitions, optimal_povm());
    const CoinSchedule &sched = cfg.schedule ? *cfg.schedule : default_schedule();
    const DetectorPlan &plan = cfg.plan ? *cfg.plan : default_schedule_file().plan;
    if (cfg.noise_sigma == 0.0) return std::vector<Povm>(cfg.repetitions, extract_effective_povm(sched, plan));
    std::vector<Povm> out(cfg.repetitions);
    parallel_for(cfg.repetitions, [&](std::size_t r) {
        Stream rng = Stream::derive(cfg.master_seed, {kNoiseTag, r});
        const CoinSchedule noisy = perturb_schedule(sched, cfg.noise_sigma, rng);
        out[r] = extract_effective_povm(noisy, plan, ExtractOptions{Lattice::covering(), true});
    });
    return out;
}

EstimationResult run_trials(const Ket &k, const Povm &p, const EstimationConfig &cfg, std::uint64_t state_index) {
    cfg.check();
    check_povm(p);
    const std::vector<Povm> povms(cfg.repetitions, p);
    return run_tasks({pure_task("state", k, state_index, povms)}, cfg).front();
}

EstimationResult estimate_state(const Ket &k, const EstimationConfig &cfg, std::uint64_t state_index) {
    const std::vector<Povm> povms = povms_for(cfg);
    for (const auto &p : povms) check_povm(p);
    return run_tasks({pure_task("state", k, state_index, povms)}, cfg).front();
}

EstimationResult run_trials(const Matrix &rho3, const Ket &reference, const Povm &p, const EstimationConfig &cfg,
                            std::uint64_t state_index) {
    cfg.check();
    check_povm(p);
    Task t{"state", reference, state_index, {}};
    t.probs.assign(cfg.repetitions, outcome_probabilities(p, rho3));
    return run_tasks({t}, cfg).front();
}

std::vector<SweepRow> sweep_theta(const EstimationConfig &cfg) {
    const std::vector<Povm> povms = povms_for(cfg);
    for (const auto &p : povms) check_povm(p);
    std::vector<Task> tasks;
    for (int k = 0; k <= 16; ++k) {
        const double theta = k * std::numbers::pi / 16.0;
        tasks.push_back(pure_task("theta=" + std::to_string(k) + "pi/16", psi_theta(theta), static_cast<std::uint64_t>(k), povms));
    }
    const auto results = run_tasks(tasks, cfg);
    const Bounds b = bounds();
    std::vector<SweepRow> rows;
    for (int k = 0; k <= 16; ++k) {
        const auto &r = results[static_cast<std::size_t>(k)];
        rows.push_back(SweepRow{k * std::numbers::pi / 16.0, r.analytic, r.mean, r.std, r.stderr_, r.n_trials,
                                r.mean > b.local});
    }
    return rows;
}

std::string sweep_csv(const std::vector<SweepRow> &rows) {
    std::ostringstream os;
    os << "theta,f_analytic,f_mc,std,stderr,n_trials,exceeds_local\n";
    os << std::setprecision(10);
    for (const auto &r : rows)
        os << r.theta << ',' << r.f_analytic << ',' << r.f_mc << ',' << r.std << ',' << r.stderr_ << ',' << r.n_trials
           << ',' << (r.exceeds_local ? "true" : "false") << '\n';
    return os.str();
}

AggregateResult icosahedron_average(const EstimationConfig &cfg) {
    const std::vector<Povm> povms = povms_for(cfg);
    for (const auto &p : povms) check_povm(p);
    std::vector<Task> tasks;
    std::uint64_t idx = 0;
    for (const auto &s : icosahedron_states()) tasks.push_back(pure_task(s.label, s.ket, 100 + idx++, povms));
    AggregateResult agg;
    agg.states = run_tasks(tasks, cfg);
    double se2 = 0.0;
    for (const auto &r : agg.states) {
        agg.mean += r.mean;
        se2 += r.stderr_ * r.stderr_;
    }
    const auto n = static_cast<double>(agg.states.size());
    agg.mean /= n;
    agg.stderr_ = std::sqrt(se2) / n;
    const Bounds b = bounds();
    agg.exceeds_local = agg.mean > b.local;
    agg.exceeds_biseparable = agg.mean > b.biseparable;
    return agg;
}

nlohmann::json EstimationResult::to_json() const {
    return {{"label", label},
            {"analytic", analytic},
            {"mean", mean},
            {"std", std},
            {"stderr", stderr_},
            {"rep_means", rep_means},
            {"n_trials", n_trials},
            {"exceeds_local", exceeds_local},
            {"exceeds_biseparable", exceeds_biseparable}};
}

nlohmann::json AggregateResult::to_json() const {
    const Bounds b = bounds();
    nlohmann::json j;
    j["states"] = nlohmann::json::array();
    for (const auto &s : states) j["states"].push_back(s.to_json());
    j["aggregate"] = {{"mean", mean}, {"stderr", stderr_}};
    j["bounds"] = {{"local", b.local}, {"biseparable", b.biseparable}, {"collective", b.collective}};
    j["exceeds_local"] = exceeds_local;
    j["exceeds_biseparable"] = exceeds_biseparable;
    j["experimental_reference"] = {{"mean", 0.7968}, {"uncertainty", 0.0003}};
    return j;
}

nlohmann::json CalibrationResult::to_json() const {
    nlohmann::json j;
    j["sigma_star"] = sigma_star;
    j["achieved"] = achieved;
    j["table"] = nlohmann::json::array();
    for (const auto &r : table) j["table"].push_back({{"sigma", r.sigma}, {"mean_fidelity", r.mean_fidelity}, {"std", r.std}});
    return j;
}

std::vector<double> default_sigma_grid() {
    std::vector<double> g;
    for (int k = 0; k <= 100; ++k) g.push_back(k * 0.001);
    return g;
}

namespace {

CalibrationRow calibration_row(double sigma, std::size_t seeds, std::uint64_t master_seed, const CoinSchedule &schedule,
                               const DetectorPlan &plan) {
    std::vector<double> f(seeds);
    parallel_for(seeds, [&](std::size_t s) {
        Stream rng = Stream::derive(master_seed, {kCalibrationTag, s});
        const CoinSchedule noisy = perturb_schedule(schedule, sigma, rng);
        const Povm p = extract_effective_povm(noisy, plan, ExtractOptions{Lattice::covering(), true});
        const auto diag = reference_diagonal(p);
        f[s] = reference_state_fidelity(diag);
    });
    CalibrationRow row{sigma, 0.0, 0.0};
    for (double v : f) row.mean_fidelity += v;
    row.mean_fidelity /= static_cast<double>(seeds);
    double ss = 0.0;
    for (double v : f) ss += (v - row.mean_fidelity) * (v - row.mean_fidelity);
    row.std = seeds > 1 ? std::sqrt(ss / static_cast<double>(seeds - 1)) : 0.0;
    return row;
}

} // namespace

double noisy_reference_fidelity(double sigma, std::size_t seeds, std::uint64_t master_seed, const CoinSchedule &schedule,
                                const DetectorPlan &plan) {
    if (seeds == 0) throw OutOfRange("need at least one seed");
    return calibration_row(sigma, seeds, master_seed, schedule, plan).mean_fidelity;
}

CalibrationResult calibrate_noise(double target, const std::vector<double> &grid, std::size_t seeds,
                                  std::uint64_t master_seed, const CoinSchedule *schedule, const DetectorPlan *plan) {
    if (!(target > 0.9 && target <= 1.0)) throw OutOfRange("calibration target must lie in (0.9, 1]");
    if (grid.empty()) throw OutOfRange("empty sigma grid");
    if (seeds < 1) throw OutOfRange("need at least one seed");
    const CoinSchedule &sched = schedule ? *schedule : default_schedule();
    const DetectorPlan &pl = plan ? *plan : default_schedule_file().plan;
    CalibrationResult res;
    double lo = 1.0, hi = 0.0;
    for (double sigma : grid) {
        if (sigma < 0.0) throw OutOfRange("negative sigma in grid");
        res.table.push_back(calibration_row(sigma, seeds, master_seed, sched, pl));
        lo = std::min(lo, res.table.back().mean_fidelity);
        hi = std::max(hi, res.table.back().mean_fidelity);
    }
    constexpr double slack = 1e-9;
    if (target > hi + slack || target < lo - slack) {
        std::ostringstream os;
        os << "target " << target << " outside achieved range [" << lo << ", " << hi << "]";
        throw NoBracket(os.str());
    }
    const auto best = std::min_element(res.table.begin(), res.table.end(), [&](const auto &a, const auto &b) {
        return std::abs(a.mean_fidelity - target) < std::abs(b.mean_fidelity - target);
    });
    res.sigma_star = best->sigma;
    res.achieved = best->mean_fidelity;
    return res;
}

} // namespace clab
