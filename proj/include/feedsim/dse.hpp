#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <string>
#include <thread>
#include <vector>

#include "feedsim/controller.hpp"
#include "feedsim/cosim.hpp"
#include "feedsim/evaluator.hpp"
#include "feedsim/plant.hpp"
#include "feedsim/setup.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

/// Outcome of one co-simulation in a sweep. `failed` marks runs that could
/// not be executed (validation or numeric fault); the rest of the sweep is
/// unaffected.
struct RunResult {
    CandidateId candidate = CandidateId::single_translatory;
    double lateral_offset_m = 0.0;
    double heading_offset_rad = 0.0;
    std::uint64_t seed = 0;
    bool failed = false;
    std::string failure_reason;
    Termination termination = Termination::time_limit;
    DemandReport report;
    RunLog log;
};

inline Pose perturbed_start_pose(const WorldScenario& scenario, double lateral_m,
                                 double heading_rad) {
    const Pose& nominal = scenario.start_pose_nominal;
    const Vec2 offset = lateral_m * perp_left(Vec2{std::cos(nominal.heading),
                                                   std::sin(nominal.heading)});
    return {nominal.x + offset.x, nominal.y + offset.y, nominal.heading + heading_rad};
}

/// Builds both models for one grid point, runs the co-simulation and
/// evaluates the three demands. Throws on validation problems; numeric
/// faults terminate the log and show up in the report instead.
inline RunResult execute_run(const ScenarioDoc& doc, CandidateId id, double lateral_m,
                             double heading_rad, std::uint64_t seed) {
    RunResult result;
    result.candidate = id;
    result.lateral_offset_m = lateral_m;
    result.heading_offset_rad = heading_rad;
    result.seed = seed;

    const ArmCandidate candidate = resolved_candidate(
        find_candidate(doc, id), doc.scenario.rows.empty() ? 0.0 : doc.scenario.rows[0].cage_length_m);
    ValidationResult fit = validate_candidate_fit(doc.scenario, doc.vehicle, candidate);
    fit.merge(validate_config(doc.cosim));
    throw_if_invalid(fit);

    CoSimConfig config = doc.cosim;
    config.seed = seed;
    RobotPlant plant(doc.scenario, candidate, doc.vehicle, doc.sensors,
                     doc.controller.pump_rate_kg_s, seed,
                     perturbed_start_pose(doc.scenario, lateral_m, heading_rad));
    FeedController controller(doc.scenario, candidate, doc.controller, doc.vehicle, doc.sensors,
                              config.comm_interval_s);

    result.log = run_cosim(plant, controller, config);
    result.termination = result.log.termination;
    result.report = evaluate_run(result.log, doc.scenario, doc.vehicle);
    if (result.termination == Termination::fault) {
        result.failed = true;
        result.failure_reason = "numeric fault during co-simulation";
        result.report.overall_pass = false;
    }
    return result;
}

/// Runs the Cartesian sweep candidates x lateral x heading x seeds. Results
/// come back in lexicographic grid order regardless of how many workers
/// execute them; a failing run is isolated to its own result.
inline std::vector<RunResult> run_sweep(const ScenarioDoc& doc, int workers = 1) {
    throw_if_invalid(validate_sweep(doc.sweep, doc.scenario));

    struct GridPoint {
        CandidateId candidate;
        double lateral;
        double heading;
        std::uint64_t seed;
    };
    std::vector<GridPoint> grid;
    for (CandidateId id : doc.sweep.candidates) {
        for (double lat : doc.sweep.lateral_offsets_m) {
            for (double head : doc.sweep.heading_offsets_rad) {
                for (std::uint64_t seed : doc.sweep.seeds) {
                    grid.push_back({id, lat, head, seed});
                }
            }
        }
    }

    std::vector<RunResult> results(grid.size());
    std::atomic<std::size_t> next{0};
    auto work = [&]() {
        for (std::size_t i = next.fetch_add(1); i < grid.size(); i = next.fetch_add(1)) {
            const GridPoint& point = grid[i];
            try {
                results[i] =
                    execute_run(doc, point.candidate, point.lateral, point.heading, point.seed);
            } catch (const Error& e) {
                RunResult& failed = results[i];
                failed.candidate = point.candidate;
                failed.lateral_offset_m = point.lateral;
                failed.heading_offset_rad = point.heading;
                failed.seed = point.seed;
                failed.failed = true;
                failed.failure_reason = e.what();
                failed.termination = Termination::fault;
            }
        }
    };

    const int thread_count = std::max(1, std::min<int>(workers, static_cast<int>(grid.size())));
    if (thread_count == 1) {
        work();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(thread_count));
        for (int i = 0; i < thread_count; ++i) pool.emplace_back(work);
        for (std::thread& thread : pool) thread.join();
    }
    return results;
}

/// Aggregate view of one candidate over the whole sweep.
struct CandidateSummary {
    CandidateId id = CandidateId::single_translatory;
    int runs = 0;
    double pass_rate = 0.0;
    double worst_abs_error_m = 0.0;
    double max_speed_m_s = 0.0;
    double min_clearance_m = 0.0;
    int dispenses_per_pass = 0;  // dispense count of a full, unperturbed pass
    bool demands_pass = false;   // every run passed all three demands
};

struct CandidateOverview {
    std::vector<CandidateSummary> candidates;
};

inline CandidateOverview aggregate(const std::vector<RunResult>& results) {
    if (results.empty()) throw Error("EmptyResults: nothing to aggregate");
    CandidateOverview overview;
    for (const RunResult& r : results) {
        CandidateSummary* summary = nullptr;
        for (CandidateSummary& s : overview.candidates) {
            if (s.id == r.candidate) summary = &s;
        }
        if (summary == nullptr) {
            overview.candidates.push_back({});
            summary = &overview.candidates.back();
            summary->id = r.candidate;
            summary->min_clearance_m = std::numeric_limits<double>::infinity();
            summary->demands_pass = true;
        }
        summary->runs += 1;
        if (r.report.overall_pass) {
            summary->pass_rate += 1.0;  // normalized below
        } else {
            summary->demands_pass = false;
        }
        summary->worst_abs_error_m =
            std::max(summary->worst_abs_error_m, r.report.worst_abs_error_m);
        summary->max_speed_m_s = std::max(summary->max_speed_m_s, r.report.max_speed_m_s);
        summary->min_clearance_m = std::min(summary->min_clearance_m, r.report.min_clearance_m);
        summary->dispenses_per_pass =
            std::max(summary->dispenses_per_pass,
                     static_cast<int>(r.log.dispense_events.size()));
    }
    for (CandidateSummary& s : overview.candidates) {
        s.pass_rate = s.runs > 0 ? s.pass_rate / s.runs : 0.0;
    }
    return overview;
}

}  // namespace feedsim
