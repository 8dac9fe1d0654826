#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "feedsim/cosim.hpp"
#include "feedsim/geometry.hpp"
#include "feedsim/run_types.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/validation.hpp"
#include "feedsim/vehicle.hpp"

namespace feedsim {

/// The three performance demands, checked as post-processing on a run log.
constexpr double speed_demand_m_s = 0.25;
constexpr double speed_demand_tolerance_m_s = 1e-9;  // absorbs fp accumulation only
constexpr double placement_tolerance_m = 0.05;       // closed interval

struct EmptyTraceError : Error {
    EmptyTraceError() : Error("EmptyTrace") {}
};

struct DispenseCheck {
    double t = 0.0;
    Vec2 position;
    int row = 0;
    Side side = Side::right;
    int target_index = -1;  // cage index; -1 when no unclaimed target matched
    double along_error_m = 0.0;
    bool inside_area = false;
};

struct DemandReport {
    double max_speed_m_s = 0.0;
    bool speed_ok = false;
    std::vector<DispenseCheck> dispense_checks;
    int missed_targets = 0;
    double worst_abs_error_m = 0.0;
    bool precision_ok = false;
    double min_clearance_m = 0.0;
    bool collision_ok = false;
    bool overall_pass = false;
};

struct SpeedCheck {
    double max_speed_m_s = 0.0;
    bool speed_ok = false;
};

inline SpeedCheck check_speed(const std::vector<PoseSample>& pose_trace) {
    if (pose_trace.empty()) throw EmptyTraceError();
    double max_speed = 0.0;
    for (const PoseSample& sample : pose_trace) {
        max_speed = std::max(max_speed, sample.speed_m_s);
    }
    return {max_speed, max_speed <= speed_demand_m_s + speed_demand_tolerance_m_s};
}

struct PrecisionCheck {
    std::vector<DispenseCheck> dispense_checks;
    int missed_targets = 0;
    double worst_abs_error_m = 0.0;
    bool precision_ok = false;
};

/// Matches each event (in time order) to the nearest unclaimed target on its
/// row/side; each target is claimed at most once. Passes iff every target is
/// claimed, every along-row |error| is within the +-0.05 m demand (inclusive)
/// and every event lies inside its placement area.
inline PrecisionCheck check_precision(const std::vector<DispenseEvent>& events,
                                      const WorldScenario& scenario) {
    constexpr double bound_eps = 1e-12;
    PrecisionCheck out;
    std::vector<bool> claimed(scenario.targets.size(), false);
    bool all_events_ok = true;

    for (const DispenseEvent& event : events) {
        DispenseCheck check;
        check.t = event.t;
        check.position = event.position;
        check.row = event.row_index;
        check.side = event.side;

        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < scenario.targets.size(); ++i) {
            const PlacementTarget& target = scenario.targets[i];
            if (claimed[i] || target.row != event.row_index || target.side != event.side) continue;
            const double d = norm(event.position - target.position);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        if (best < 0) {
            all_events_ok = false;  // stray event with no target left to claim
            out.dispense_checks.push_back(check);
            continue;
        }
        claimed[static_cast<std::size_t>(best)] = true;
        const PlacementTarget& target = scenario.targets[static_cast<std::size_t>(best)];
        const CageRow& row = scenario.rows[static_cast<std::size_t>(target.row)];
        const Vec2 rel = event.position - target.position;
        check.target_index = target.index;
        check.along_error_m = dot(rel, row.axis_direction);
        const double lateral_error = dot(rel, perp_left(row.axis_direction));
        check.inside_area =
            std::abs(check.along_error_m) <= row.cage_length_m / 2.0 + bound_eps &&
            std::abs(lateral_error) <= row.placement_halfwidth_m + bound_eps;

        out.worst_abs_error_m = std::max(out.worst_abs_error_m, std::abs(check.along_error_m));
        if (std::abs(check.along_error_m) > placement_tolerance_m + bound_eps ||
            !check.inside_area) {
            all_events_ok = false;
        }
        out.dispense_checks.push_back(check);
    }

    for (bool c : claimed) {
        if (!c) ++out.missed_targets;
    }
    out.precision_ok = all_events_ok && out.missed_targets == 0;
    return out;
}

struct CollisionCheck {
    double min_clearance_m = 0.0;
    bool collision_ok = false;
};

/// Sweeps the vehicle body rectangle (centered on the rear-axle midpoint)
/// through every pose sample against cage fronts and corridor walls.
inline CollisionCheck check_collision(const std::vector<PoseSample>& pose_trace,
                                      const VehicleParams& vehicle,
                                      const WorldScenario& scenario) {
    if (pose_trace.empty()) throw EmptyTraceError();
    double min_clearance = std::numeric_limits<double>::infinity();
    for (const PoseSample& sample : pose_trace) {
        const OrientedRect body{{sample.x_m, sample.y_m}, vehicle.body_length_m / 2.0,
                                vehicle.body_width_m / 2.0, sample.heading_rad};
        for (const Segment& obstacle : scenario.obstacles) {
            min_clearance = std::min(min_clearance, rect_segment_clearance(body, obstacle));
        }
    }
    return {min_clearance, min_clearance > 0.0};
}

/// Composes the three demand checks over a completed run log.
inline DemandReport evaluate_run(const RunLog& log, const WorldScenario& scenario,
                                 const VehicleParams& vehicle) {
    DemandReport report;
    const SpeedCheck speed = check_speed(log.pose_trace);
    report.max_speed_m_s = speed.max_speed_m_s;
    report.speed_ok = speed.speed_ok;

    PrecisionCheck precision = check_precision(log.dispense_events, scenario);
    report.dispense_checks = std::move(precision.dispense_checks);
    report.missed_targets = precision.missed_targets;
    report.worst_abs_error_m = precision.worst_abs_error_m;
    report.precision_ok = precision.precision_ok;

    const CollisionCheck collision = check_collision(log.pose_trace, vehicle, scenario);
    report.min_clearance_m = collision.min_clearance_m;
    report.collision_ok = collision.collision_ok;

    report.overall_pass = report.speed_ok && report.precision_ok && report.collision_ok;
    return report;
}

}  // namespace feedsim
