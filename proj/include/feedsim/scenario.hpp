#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "feedsim/arm.hpp"
#include "feedsim/geometry.hpp"
#include "feedsim/validation.hpp"
#include "feedsim/vehicle.hpp"

namespace feedsim {

enum class RowSide { left, right, both };

inline const char* row_side_name(RowSide s) {
    switch (s) {
        case RowSide::left: return "Left";
        case RowSide::right: return "Right";
        case RowSide::both: return "Both";
    }
    return "?";
}

inline std::vector<Side> fed_sides(RowSide s) {
    switch (s) {
        case RowSide::left: return {Side::left};
        case RowSide::right: return {Side::right};
        case RowSide::both: return {Side::left, Side::right};
    }
    return {};
}

struct RfidTag {
    std::int64_t id = 0;
    double s_m = 0.0;  // along-axis position within the row
    friend bool operator==(const RfidTag&, const RfidTag&) = default;
};

/// One straight bank of feeding cages. The axis is the guidance line the
/// vehicle follows; cages sit to the declared side(s) of it. The feeding line
/// (where fodder must land), the cage front (collision boundary) and the tag
/// line are parallel offsets from the axis.
struct CageRow {
    Vec2 axis_origin{0.0, 0.0};
    Vec2 axis_direction{1.0, 0.0};
    double cage_length_m = 0.5;
    int cage_count = 10;
    RowSide side = RowSide::right;
    double feed_lateral_offset_m = 0.8;
    double cage_front_offset_m = 0.65;
    double tag_lateral_offset_m = 0.55;
    double placement_halfwidth_m = 0.10;
    std::vector<RfidTag> rfid_tags;  // empty: one tag per cage at the cage start

    double length_m() const { return cage_count * cage_length_m; }
    double heading() const { return std::atan2(axis_direction.y, axis_direction.x); }

    /// Signed lateral offset (along the axis left normal) of the feeding line
    /// serving `s`.
    double feed_line_lateral(Side s) const { return side_sign(s) * feed_lateral_offset_m; }

    friend bool operator==(const CageRow&, const CageRow&) = default;
};

struct StartArea {
    double lateral_m = 0.15;
    double longitudinal_m = 0.10;
    double heading_rad = 0.12;
    friend bool operator==(const StartArea&, const StartArea&) = default;
};

/// One fodder drop target: cage center projected to the feeding line.
struct PlacementTarget {
    int row = 0;
    Side side = Side::right;
    int index = 0;       // cage index within the row
    double s_row = 0.0;  // along the row axis
    double s_track = 0.0;
    Vec2 position;       // world frame, on the feeding line
};

struct TagInfo {
    std::int64_t id = 0;
    int row = 0;
    double s_row = 0.0;
    double s_track = 0.0;
    Vec2 position;  // world frame
};

/// The feeding site: cage rows along a corridor plus the operator start area.
/// Call finalize_scenario() after construction; it normalizes the axes and
/// fills every derived member.
struct WorldScenario {
    std::vector<CageRow> rows;
    Pose start_pose_nominal{-1.5, 0.0, 0.0};
    StartArea start_area;
    double corridor_half_width_m = 1.0;

    // Derived by finalize_scenario().
    bool finalized = false;
    std::vector<PlacementTarget> targets;
    std::vector<TagInfo> tags;
    std::vector<Segment> obstacles;  // cage fronts and corridor walls
    std::vector<double> row_start_track_s;
    std::vector<double> row_end_track_s;
    Vec2 track_origin;
    Vec2 track_direction{1.0, 0.0};

    double track_s(Vec2 p) const { return dot(p - track_origin, track_direction); }
    double track_lateral(Vec2 p) const { return dot(p - track_origin, perp_left(track_direction)); }

    /// Index of the row whose axis segment is closest to `p`.
    int nearest_row(Vec2 p) const {
        int best = 0;
        double best_d = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < rows.size(); ++i) {
            const CageRow& row = rows[i];
            const Segment axis{row.axis_origin,
                               row.axis_origin + row.length_m() * row.axis_direction};
            const double d = point_segment_distance(p, axis);
            if (d < best_d) {
                best_d = d;
                best = static_cast<int>(i);
            }
        }
        return best;
    }
};

/// Signed lateral/heading deviation of a pose from a row's guidance line.
/// Positive lateral means left of the line.
struct GuidanceError {
    double lateral_m = 0.0;
    double heading_rad = 0.0;
};

inline GuidanceError guidance_error(const CageRow& row, const Pose& pose) {
    const Vec2 rel = pose.position() - row.axis_origin;
    return {dot(rel, perp_left(row.axis_direction)), wrap_angle(pose.heading - row.heading())};
}

/// Normalizes axes, derives targets/tags/obstacles/track coordinates, and
/// checks the pure geometric invariants. Idempotent.
inline ValidationResult finalize_scenario(WorldScenario& scn) {
    ValidationResult result;
    if (scn.rows.empty()) {
        result.add(Issue::no_rows, "rows");
        return result;
    }

    for (std::size_t i = 0; i < scn.rows.size(); ++i) {
        CageRow& row = scn.rows[i];
        const std::string where = "rows[" + std::to_string(i) + "]";
        const double len = norm(row.axis_direction);
        if (!(len > 0.0)) {
            result.add(Issue::bad_row_geometry, where, "axis_direction must be non-zero");
            return result;
        }
        row.axis_direction = (1.0 / len) * row.axis_direction;
        if (!(row.cage_length_m > 0.0)) result.add(Issue::bad_row_geometry, where, "cage_length_m");
        if (row.cage_count < 1) result.add(Issue::bad_row_geometry, where, "cage_count");
        if (!(row.feed_lateral_offset_m > 0.0)) {
            result.add(Issue::bad_row_geometry, where, "feed_lateral_offset_m");
        }
        if (!(row.cage_front_offset_m > 0.0) ||
            row.cage_front_offset_m > row.feed_lateral_offset_m) {
            result.add(Issue::bad_row_geometry, where,
                       "cage_front_offset_m must lie between axis and feeding line");
        }
        if (row.tag_lateral_offset_m < 0.0 || row.tag_lateral_offset_m > row.feed_lateral_offset_m) {
            result.add(Issue::bad_row_geometry, where, "tag_lateral_offset_m");
        }
        if (!(row.placement_halfwidth_m > 0.0)) {
            result.add(Issue::bad_row_geometry, where, "placement_halfwidth_m");
        }
        if (row.rfid_tags.empty()) {
            for (int c = 0; c < row.cage_count; ++c) {
                row.rfid_tags.push_back(
                    {static_cast<std::int64_t>(100 * (i + 1) + c), c * row.cage_length_m});
            }
        }
    }
    if (!(scn.corridor_half_width_m > 0.0)) {
        result.add(Issue::bad_row_geometry, "corridor_half_width_m", "must be positive");
    }
    if (scn.start_area.lateral_m < 0.0 || scn.start_area.longitudinal_m < 0.0 ||
        scn.start_area.heading_rad < 0.0) {
        result.add(Issue::bad_start_area, "start_area", "deviations must be non-negative");
    }

    // All rows must share the track direction: the controller treats the
    // mission as a single 1-D track.
    const Vec2 dir0 = scn.rows[0].axis_direction;
    for (std::size_t i = 1; i < scn.rows.size(); ++i) {
        if (dot(scn.rows[i].axis_direction, dir0) < 1.0 - 1e-9) {
            result.add(Issue::non_parallel_rows, "rows[" + std::to_string(i) + "]");
        }
    }
    if (!result.ok()) return result;

    scn.track_origin = scn.rows[0].axis_origin;
    scn.track_direction = dir0;

    scn.row_start_track_s.clear();
    scn.row_end_track_s.clear();
    for (const CageRow& row : scn.rows) {
        const double s0 = scn.track_s(row.axis_origin);
        scn.row_start_track_s.push_back(s0);
        scn.row_end_track_s.push_back(s0 + row.length_m());
    }
    for (std::size_t i = 0; i < scn.rows.size(); ++i) {
        for (std::size_t j = i + 1; j < scn.rows.size(); ++j) {
            const bool disjoint = scn.row_end_track_s[i] <= scn.row_start_track_s[j] + 1e-9 ||
                                  scn.row_end_track_s[j] <= scn.row_start_track_s[i] + 1e-9;
            if (!disjoint) {
                result.add(Issue::row_overlap,
                           "rows[" + std::to_string(i) + "," + std::to_string(j) + "]");
            }
        }
    }

    scn.targets.clear();
    scn.tags.clear();
    scn.obstacles.clear();
    std::set<std::int64_t> seen_tags;
    for (std::size_t i = 0; i < scn.rows.size(); ++i) {
        const CageRow& row = scn.rows[i];
        const std::string where = "rows[" + std::to_string(i) + "]";
        const Vec2 normal = perp_left(row.axis_direction);

        for (Side s : fed_sides(row.side)) {
            const double lat = row.feed_line_lateral(s);
            for (int c = 0; c < row.cage_count; ++c) {
                const double s_row = (c + 0.5) * row.cage_length_m;
                scn.targets.push_back({static_cast<int>(i), s, c, s_row,
                                       scn.row_start_track_s[i] + s_row,
                                       row.axis_origin + s_row * row.axis_direction + lat * normal});
            }
            // Cage front facing the corridor.
            const double front = side_sign(s) * row.cage_front_offset_m;
            scn.obstacles.push_back(
                {row.axis_origin + front * normal,
                 row.axis_origin + row.length_m() * row.axis_direction + front * normal});
        }

        // Tags sit on the corridor side of the cages; for left-only rows that
        // is the left side, otherwise the right side.
        const double tag_lat =
            (row.side == RowSide::left ? 1.0 : -1.0) * row.tag_lateral_offset_m;
        for (const RfidTag& tag : row.rfid_tags) {
            if (tag.s_m < -1e-9 || tag.s_m > row.length_m() + 1e-9) {
                result.add(Issue::tag_out_of_range, std::to_string(tag.id));
            }
            if (!seen_tags.insert(tag.id).second) {
                result.add(Issue::duplicate_tag, std::to_string(tag.id));
            }
            scn.tags.push_back({tag.id, static_cast<int>(i), tag.s_m,
                                scn.row_start_track_s[i] + tag.s_m,
                                row.axis_origin + tag.s_m * row.axis_direction + tag_lat * normal});
        }
    }

    // Corridor walls parallel to the track, padded past everything reachable.
    double s_min = scn.track_s(scn.start_pose_nominal.position());
    double s_max = s_min;
    for (std::size_t i = 0; i < scn.rows.size(); ++i) {
        s_min = std::min(s_min, scn.row_start_track_s[i]);
        s_max = std::max(s_max, scn.row_end_track_s[i]);
    }
    constexpr double wall_pad_m = 5.0;
    const Vec2 normal = perp_left(scn.track_direction);
    for (double sign : {1.0, -1.0}) {
        const Vec2 off = sign * scn.corridor_half_width_m * normal;
        scn.obstacles.push_back(
            {scn.track_origin + (s_min - wall_pad_m) * scn.track_direction + off,
             scn.track_origin + (s_max + wall_pad_m) * scn.track_direction + off});
    }

    scn.finalized = result.ok();
    return result;
}

/// Cross-checks a scenario against the vehicle body and one arm candidate:
/// corridor passage and arm reach over the feeding line.
inline ValidationResult validate_candidate_fit(const WorldScenario& scn,
                                               const VehicleParams& vehicle,
                                               const ArmCandidate& candidate) {
    ValidationResult result;
    result.merge(validate_candidate(candidate));
    if (!(scn.corridor_half_width_m > vehicle.body_width_m / 2.0)) {
        result.add(Issue::corridor_too_narrow, "corridor_half_width_m",
                   "no collision-free path exists");
    }
    double cage_length = scn.rows.empty() ? 0.0 : scn.rows[0].cage_length_m;
    for (std::size_t i = 0; i < scn.rows.size(); ++i) {
        const CageRow& row = scn.rows[i];
        const std::string where = "rows[" + std::to_string(i) + "]";
        if (!(row.cage_front_offset_m > vehicle.body_width_m / 2.0)) {
            result.add(Issue::corridor_too_narrow, where,
                       "cage front leaves no room for the vehicle body");
        }
        if (candidate.half_cage_shift && std::abs(row.cage_length_m - cage_length) > 1e-9) {
            result.add(Issue::invalid_candidate, candidate_name(candidate.id),
                       "half_cage_shift requires a uniform cage length");
        }
        for (Side s : fed_sides(row.side)) {
            if (!candidate.has_side(s)) continue;
            try {
                feeding_joint_setpoints(candidate, s, row.feed_line_lateral(s));
            } catch (const Error&) {
                result.add(Issue::arm_cannot_reach,
                           std::string(candidate_name(candidate.id)) + "/" + side_name(s),
                           where);
            }
        }
    }
    return result;
}

/// Full scenario validation for one candidate: geometry plus fit.
inline ValidationResult validate_scenario(WorldScenario& scn, const VehicleParams& vehicle,
                                          const ArmCandidate& candidate) {
    ValidationResult result = finalize_scenario(scn);
    if (!result.ok()) return result;
    result.merge(validate_vehicle(vehicle));
    result.merge(validate_candidate_fit(scn, vehicle, candidate));
    return result;
}

}  // namespace feedsim
