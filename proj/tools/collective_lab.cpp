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

// collective-lab: command-line driver for the three-copy measurement toolkit.

#include <cmath>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "clab/anchors.hpp"
#include "clab/errors.hpp"
#include "clab/estimator.hpp"
#include "clab/povm.hpp"
#include "clab/qstate.hpp"
#include "clab/schedule_io.hpp"
#include "clab/separability.hpp"
#include "clab/synthesis.hpp"
#include "clab/walk.hpp"

namespace {

using nlohmann::json;
using namespace clab;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumeric = 3;

struct RunConfig {
    std::uint64_t seed = 42;
    std::size_t trials = 50000;
    std::size_t reps = 10;
    double sigma = 0.0;
    std::string out;
    std::string format = "json";
    std::string schedule;
    std::string source = "ideal";
    double theta = 0.0;
    double target = 0.9942;
    std::size_t seeds = 50;
    std::string segment = "all";
    std::size_t limit = 0;
    bool unit_phases = false;
};

class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

void emit(const RunConfig &cfg, const std::string &text) {
    if (cfg.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(cfg.out, std::ios::binary);
    if (!f) throw UsageError("cannot write '" + cfg.out + "'");
    f << text;
}

void emit_json(const RunConfig &cfg, const json &j) { emit(cfg, j.dump(2) + "\n"); }

json matrix_json(const Matrix &m) {
    json re = json::array(), im = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json rr = json::array(), ri = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            rr.push_back(m(r, c).real());
            ri.push_back(m(r, c).imag());
        }
        re.push_back(rr);
        im.push_back(ri);
    }
    return {{"re", re}, {"im", im}};
}

json validation_json(const ValidationReport &v) {
    json j;
    j["pass"] = v.pass;
    j["completeness_residual"] = v.completeness_residual;
    j["elements"] = json::array();
    for (const auto &e : v.elements)
        j["elements"].push_back(
            {{"label", e.label}, {"herm_residual", e.herm_residual}, {"min_eig", e.min_eig}, {"pass", e.pass}});
    return j;
}

ScheduleFile load(const RunConfig &cfg) {
    return cfg.schedule.empty() ? default_schedule_file() : load_schedule_file(cfg.schedule);
}

int cmd_verify_povm(const RunConfig &cfg) {
    const Povm p = optimal_povm();
    const ValidationReport v = validate_povm(p);
    const SymmetryKit kit = symmetry_kit();
    const double e7 = e7_decomposition_check();
    const Matrix &E7 = p.elements[6];
    const double sym_support = (kit.P3 * E7).max_abs();
    json j;
    j["validation"] = validation_json(v);
    j["traces"] = json::object();
    bool traces_ok = true;
    for (std::size_t k = 0; k < p.size(); ++k) {
        const double tr = p.elements[k].trace().real();
        j["traces"][p.labels[k]] = tr;
        const double want = k < 6 ? 2.0 / 3.0 : 4.0;
        traces_ok = traces_ok && std::abs(tr - want) <= 1e-12;
    }
    j["e7_decomposition_residual"] = e7;
    j["e7_symmetric_support_residual"] = sym_support;
    const bool pass = v.pass && traces_ok && e7 <= 1e-12 && sym_support <= 1e-12;
    j["pass"] = pass;
    emit_json(cfg, j);
    return pass ? kExitOk : kExitValidation;
}

int cmd_walk_validate(const RunConfig &cfg) {
    const ScheduleFile f = load(cfg);
    const AnchorReport r = validate_against_anchors(f.schedule, f.plan);
    emit_json(cfg, r.to_json());
    return r.pass ? kExitOk : kExitValidation;
}

int cmd_walk_extract(const RunConfig &cfg) {
    const ScheduleFile f = load(cfg);
    Povm p;
    if (cfg.sigma > 0.0) {
        Stream rng = Stream::derive(cfg.seed, {0x77616c6bULL});
        p = extract_effective_povm(perturb_schedule(f.schedule, cfg.sigma, rng), f.plan,
                                   ExtractOptions{Lattice::covering(), true});
    } else {
        p = extract_effective_povm(f.schedule, f.plan);
    }
    const ValidationReport v = validate_povm(p);
    json j;
    j["sigma"] = cfg.sigma;
    j["seed"] = cfg.seed;
    j["validation"] = validation_json(v);
    const Povm ideal = optimal_povm();
    if (p.size() == ideal.size()) {
        std::ostringstream os;
        os.setf(std::ios::fixed);
        os.precision(6);
        const double fid = povm_fidelity(ideal, p);
        os << fid;
        j["fidelity_vs_ideal"] = fid;
        j["fidelity_vs_ideal_text"] = os.str();
        j["reference_state_fidelity"] = reference_state_fidelity(reference_diagonal(p));
        double dev = 0.0;
        for (std::size_t k = 0; k < p.size(); ++k) dev = std::max(dev, max_abs_diff(p.elements[k], ideal.elements[k]));
        j["max_element_deviation"] = dev;
    }
    j["elements"] = json::array();
    for (std::size_t k = 0; k < p.size(); ++k) j["elements"].push_back({{"label", p.labels[k]}, {"matrix", matrix_json(p.elements[k])}});
    emit_json(cfg, j);
    return v.pass ? kExitOk : kExitValidation;
}

int cmd_walk_dump(const RunConfig &cfg) {
    const ScheduleFile f = load(cfg);
    emit_json(cfg, to_json(f.schedule, f.plan));
    return kExitOk;
}

int cmd_walk_synthesize(const RunConfig &cfg) {
    json j;
    if (cfg.segment == "all") {
        const CoinSchedule s = synthesize_full_schedule();
        const DetectorPlan plan = DetectorPlan::default_plan();
        j["schedule"] = to_json(s, plan);
        j["anchors_pass"] = validate_against_anchors(s, plan).pass;
        emit_json(cfg, j);
        return kExitOk;
    }
    const auto dash = cfg.segment.find('-');
    if (dash == std::string::npos) throw UsageError("--segment expects a-b or all");
    int a = 0, b = 0;
    try {
        a = std::stoi(cfg.segment.substr(0, dash));
        b = std::stoi(cfg.segment.substr(dash + 1));
    } catch (const std::exception &) {
        throw UsageError("--segment expects a-b or all");
    }
    SynthesisOptions opts;
    opts.max_solutions = cfg.limit;
    if (cfg.unit_phases) opts.phases = {cplx{1.0}};
    const ScheduleFile base = load(cfg);
    const auto found = synthesize_segment_coins(a, b, base.schedule, opts);
    j["segment"] = {a, b};
    j["count"] = found.size();
    j["candidates"] = json::array();
    for (const auto &s : found) {
        json steps = json::array();
        for (int t = a + 1; t <= b; ++t)
            for (const auto &asg : s.at(t).assignments)
                steps.push_back({{"t", t},
                                 {"y", asg.y},
                                 {"x", asg.x},
                                 {"coin", to_string(asg.coin)},
                                 {"phase", {asg.phase.real(), asg.phase.imag()}}});
        j["candidates"].push_back(steps);
    }
    emit_json(cfg, j);
    return kExitOk;
}

EstimationConfig estimation_config(const RunConfig &cfg) {
    EstimationConfig e;
    e.trials_per_rep = cfg.trials;
    e.repetitions = cfg.reps;
    e.master_seed = cfg.seed;
    e.noise_sigma = cfg.sigma;
    if (cfg.source == "walk") {
        e.source = PovmSource::Walk;
    } else if (cfg.source != "ideal") {
        throw UsageError("--source must be ideal or walk");
    }
    if (!cfg.schedule.empty()) {
        const ScheduleFile f = load_schedule_file(cfg.schedule);
        e.schedule = f.schedule;
        e.plan = f.plan;
    }
    return e;
}

json bounds_json() {
    const Bounds b = bounds();
    return {{"local", b.local}, {"biseparable", b.biseparable}, {"collective", b.collective}};
}

int cmd_estimate_sweep(const RunConfig &cfg) {
    const auto rows = sweep_theta(estimation_config(cfg));
    bool all = true;
    for (const auto &r : rows) all = all && r.exceeds_local;
    if (cfg.format == "csv") {
        emit(cfg, sweep_csv(rows));
    } else {
        json j;
        j["rows"] = json::array();
        for (const auto &r : rows)
            j["rows"].push_back({{"theta", r.theta},
                                 {"f_analytic", r.f_analytic},
                                 {"f_mc", r.f_mc},
                                 {"std", r.std},
                                 {"stderr", r.stderr_},
                                 {"n_trials", r.n_trials},
                                 {"exceeds_local", r.exceeds_local}});
        j["bounds"] = bounds_json();
        j["all_exceed_local"] = all;
        emit_json(cfg, j);
    }
    if (!cfg.out.empty()) std::cerr << "all rows exceed the local bound: " << (all ? "yes" : "no") << "\n";
    return kExitOk;
}

int cmd_estimate_icosa(const RunConfig &cfg) {
    const AggregateResult r = icosahedron_average(estimation_config(cfg));
    if (cfg.format == "csv") {
        std::ostringstream os;
        os.precision(10);
        os << "label,analytic,mean,std,stderr,n_trials\n";
        for (const auto &s : r.states)
            os << s.label << ',' << s.analytic << ',' << s.mean << ',' << s.std << ',' << s.stderr_ << ',' << s.n_trials
               << '\n';
        os << "aggregate,," << r.mean << ",," << r.stderr_ << ",\n";
        emit(cfg, os.str());
    } else {
        emit_json(cfg, r.to_json());
    }
    const Bounds b = bounds();
    std::cerr.precision(6);
    std::cerr << "aggregate " << r.mean << " +- " << r.stderr_ << " (local " << b.local << ", biseparable "
              << b.biseparable << ", collective " << b.collective << ")\n";
    return kExitOk;
}

int cmd_estimate_single(const RunConfig &cfg) {
    const EstimationConfig e = estimation_config(cfg);
    EstimationResult r = estimate_state(psi_theta(cfg.theta), e);
    r.label = "theta=" + std::to_string(cfg.theta);
    json j = r.to_json();
    j["theta"] = cfg.theta;
    j["bounds"] = bounds_json();
    emit_json(cfg, j);
    return kExitOk;
}

int cmd_estimate_calibrate(const RunConfig &cfg) {
    std::optional<ScheduleFile> f;
    if (!cfg.schedule.empty()) f = load_schedule_file(cfg.schedule);
    const CalibrationResult r = calibrate_noise(cfg.target, default_sigma_grid(), cfg.seeds, cfg.seed,
                                                f ? &f->schedule : nullptr, f ? &f->plan : nullptr);
    json j = r.to_json();
    j["target"] = cfg.target;
    j["seeds"] = cfg.seeds;
    emit_json(cfg, j);
    return kExitOk;
}

int cmd_certify(const RunConfig &cfg) {
    const SeparabilityReport opt = certify_genuinely_collective(optimal_povm());
    const Povm k2 = example_povms(0.5).K2;
    SeparabilityReport k2r = certify_genuinely_collective(k2);
    attach_counter_facts(k2r, k2, k2_construction(0.5));
    const SeparabilityReport sym = certify_genuinely_collective(symmetric_povm());
    const bool counter = !k2r.facts.empty() && k2r.facts.back().holds;
    const bool pass = opt.verdict == Verdict::GenuinelyCollectiveCertified && opt.complement_rank == 4 &&
                      k2r.verdict == Verdict::Inconclusive && counter && sym.verdict == Verdict::Inconclusive;
    json j;
    j["optimal"] = opt.to_json();
    j["k2_half"] = k2r.to_json();
    j["symmetric_six"] = sym.to_json();
    j["pass"] = pass;
    emit_json(cfg, j);
    return pass ? kExitOk : kExitValidation;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Three-copy collective measurement toolkit"};
    app.fallthrough();
    app.require_subcommand(1);
    RunConfig cfg;
    app.add_option("--seed", cfg.seed, "master seed")->capture_default_str();
    app.add_option("--trials", cfg.trials, "trials per repetition")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--reps", cfg.reps, "repetitions")->capture_default_str()->check(CLI::PositiveNumber);
    app.add_option("--sigma", cfg.sigma, "coin noise (radians)")->capture_default_str()->check(CLI::NonNegativeNumber);
    app.add_option("--out", cfg.out, "output file (stdout when omitted)");
    app.add_option("--format", cfg.format, "csv or json")->capture_default_str()->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--schedule", cfg.schedule, "schedule JSON file (shipped schedule when omitted)");

    int code = kExitOk;
    std::function<int()> action;

    auto *verify = app.add_subcommand("verify-povm", "build and validate the seven-outcome POVM");
    verify->callback([&] { action = [&] { return cmd_verify_povm(cfg); }; });

    auto *walk = app.add_subcommand("walk", "quantum-walk realization");
    walk->require_subcommand(1);
    walk->add_subcommand("validate", "compare the schedule with the anchored maps")->callback([&] {
        action = [&] { return cmd_walk_validate(cfg); };
    });
    walk->add_subcommand("extract", "effective POVM of the walk")->callback([&] {
        action = [&] { return cmd_walk_extract(cfg); };
    });
    walk->add_subcommand("dump-schedule", "write the schedule as JSON")->callback([&] {
        action = [&] { return cmd_walk_dump(cfg); };
    });
    auto *synth = walk->add_subcommand("synthesize", "search coin assignments between anchors");
    synth->add_option("--segment", cfg.segment, "a-b between anchored steps, or all")->capture_default_str();
    synth->add_option("--limit", cfg.limit, "stop after this many candidates (0: all)")->capture_default_str();
    synth->add_flag("--unit-phases", cfg.unit_phases, "only try phase 1");
    synth->callback([&] { action = [&] { return cmd_walk_synthesize(cfg); }; });

    auto *est = app.add_subcommand("estimate", "state-estimation experiments");
    est->require_subcommand(1);
    est->add_option("--source", cfg.source, "ideal or walk")->capture_default_str();
    est->add_subcommand("sweep", "theta sweep on the x-z great circle")->callback([&] {
        action = [&] { return cmd_estimate_sweep(cfg); };
    });
    est->add_subcommand("icosa", "average over the icosahedron states")->callback([&] {
        action = [&] { return cmd_estimate_icosa(cfg); };
    });
    auto *single = est->add_subcommand("single", "one state cos(theta)|0> + sin(theta)|1>");
    single->add_option("--theta", cfg.theta, "angle in radians")->capture_default_str();
    single->callback([&] { action = [&] { return cmd_estimate_single(cfg); }; });
    auto *calib = est->add_subcommand("calibrate", "find the noise level reaching a POVM fidelity");
    calib->add_option("--target", cfg.target, "target reference-state fidelity")->capture_default_str();
    calib->add_option("--seeds", cfg.seeds, "perturbations per grid point")->capture_default_str()->check(CLI::PositiveNumber);
    calib->callback([&] { action = [&] { return cmd_estimate_calibrate(cfg); }; });

    app.add_subcommand("certify", "genuine-collectiveness certificate")->callback([&] {
        action = [&] { return cmd_certify(cfg); };
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        code = action ? action() : kExitUsage;
    } catch (const UsageError &e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ParseError &e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const NoSolution &e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const LabError &e) {
        std::cerr << e.what() << "\n";
        return kExitNumeric;
    }
    return code;
}
