#pragma once

#include <array>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "feedsim/geometry.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

enum class Side { left, right };

inline const char* side_name(Side s) { return s == Side::left ? "Left" : "Right"; }
inline const char* side_key(Side s) { return s == Side::left ? "left" : "right"; }
inline std::size_t side_index(Side s) { return s == Side::left ? 0 : 1; }

/// +1 for the left body side, -1 for the right (body frame: x forward, y left).
inline double side_sign(Side s) { return s == Side::left ? 1.0 : -1.0; }

enum class CandidateId {
    single_rotary,
    single_translatory,
    double_rotary,
    double_translatory,
};

inline const char* candidate_name(CandidateId id) {
    switch (id) {
        case CandidateId::single_rotary: return "SingleRotary";
        case CandidateId::single_translatory: return "SingleTranslatory";
        case CandidateId::double_rotary: return "DoubleRotary";
        case CandidateId::double_translatory: return "DoubleTranslatory";
    }
    return "?";
}

enum class JointType { rotary, translatory };

struct ArmSideConfig {
    Side side = Side::right;
    Vec2 base_offset{0.0, -0.30};  // body frame, meters
    friend constexpr bool operator==(const ArmSideConfig&, const ArmSideConfig&) = default;
};

/// One feeder-arm configuration: sidedness x joint type plus its geometry and
/// actuator behavior. Double-sided variants share one pump; their left arm is
/// mounted half a cage length behind the right one so pulses interleave.
struct ArmCandidate {
    CandidateId id = CandidateId::single_translatory;
    JointType joint_type = JointType::translatory;
    std::vector<ArmSideConfig> sides{{Side::right, {0.0, -0.30}}};
    std::array<double, 2> link_lengths_m{0.4, 0.3};   // rotary: shoulder, elbow
    std::array<double, 2> travel_limits_m{0.0, 0.8};  // prismatic: min, max extension
    bool half_cage_shift = false;
    double joint_time_constant_s = 0.3;
    double joint_rate_limit = 1.0;  // rad/s for rotary joints, m/s for prismatic
    bool shift_applied = false;

    int joints_per_side() const { return joint_type == JointType::rotary ? 2 : 1; }
    int joint_count() const { return joints_per_side() * static_cast<int>(sides.size()); }

    bool has_side(Side s) const {
        for (const auto& sc : sides) {
            if (sc.side == s) return true;
        }
        return false;
    }

    const ArmSideConfig& side_config(Side s) const {
        for (const auto& sc : sides) {
            if (sc.side == s) return sc;
        }
        throw Error(std::string("SideUnavailable: candidate ") + candidate_name(id) +
                    " has no " + side_name(s) + " arm");
    }

    /// Index of the first joint of a side in the flattened joint vector.
    int joint_base_index(Side s) const {
        int base = 0;
        for (const auto& sc : sides) {
            if (sc.side == s) return base;
            base += joints_per_side();
        }
        throw Error(std::string("SideUnavailable: candidate ") + candidate_name(id) +
                    " has no " + side_name(s) + " arm");
    }

    friend bool operator==(const ArmCandidate&, const ArmCandidate&) = default;
};

inline bool candidate_is_double(CandidateId id) {
    return id == CandidateId::double_rotary || id == CandidateId::double_translatory;
}

inline JointType candidate_joint_type(CandidateId id) {
    return (id == CandidateId::single_rotary || id == CandidateId::double_rotary)
               ? JointType::rotary
               : JointType::translatory;
}

inline ValidationResult validate_candidate(const ArmCandidate& c) {
    ValidationResult result;
    const bool wants_two = candidate_is_double(c.id);
    if ((c.sides.size() == 2) != wants_two || c.sides.empty() || c.sides.size() > 2) {
        result.add(Issue::invalid_candidate, candidate_name(c.id),
                   "side count must match the candidate id");
    }
    if (c.joint_type != candidate_joint_type(c.id)) {
        result.add(Issue::invalid_candidate, candidate_name(c.id),
                   "joint type must match the candidate id");
    }
    if (c.half_cage_shift && c.sides.size() != 2) {
        result.add(Issue::invalid_candidate, candidate_name(c.id),
                   "half_cage_shift requires a double-sided candidate");
    }
    if (c.sides.size() == 2 && c.sides[0].side == c.sides[1].side) {
        result.add(Issue::invalid_candidate, candidate_name(c.id), "duplicate side");
    }
    if (c.joint_type == JointType::rotary) {
        if (!(c.link_lengths_m[0] > 0.0) || !(c.link_lengths_m[1] > 0.0)) {
            result.add(Issue::invalid_candidate, candidate_name(c.id),
                       "link lengths must be positive");
        }
    } else {
        if (!(c.travel_limits_m[1] > c.travel_limits_m[0]) || c.travel_limits_m[0] < 0.0) {
            result.add(Issue::invalid_candidate, candidate_name(c.id),
                       "travel limits must satisfy 0 <= min < max");
        }
    }
    if (!(c.joint_rate_limit > 0.0) || c.joint_time_constant_s < 0.0) {
        result.add(Issue::invalid_candidate, candidate_name(c.id), "bad joint dynamics");
    }
    return result;
}

/// Applies the shared-pump mounting shift: the left arm moves back by half a
/// cage length so one pump can serve alternating sides. Idempotent via
/// `shift_applied`.
inline ArmCandidate resolved_candidate(const ArmCandidate& c, double cage_length_m) {
    ArmCandidate out = c;
    if (c.half_cage_shift && !c.shift_applied) {
        for (auto& sc : out.sides) {
            if (sc.side == Side::left) sc.base_offset.x -= cage_length_m / 2.0;
        }
        out.shift_applied = true;
    }
    return out;
}

/// Planar forward kinematics of the nozzle in the body frame.
/// Rotary: two revolute links, zero pose along +x. Translatory: prismatic
/// extension along the body lateral axis toward the arm's side.
inline Vec2 nozzle_body_position(const ArmCandidate& candidate, Side side,
                                 const std::vector<double>& joints) {
    const ArmSideConfig& sc = candidate.side_config(side);
    const int base = candidate.joint_base_index(side);
    if (candidate.joint_type == JointType::rotary) {
        const double q1 = joints.at(static_cast<std::size_t>(base));
        const double q2 = joints.at(static_cast<std::size_t>(base + 1));
        const double l1 = candidate.link_lengths_m[0];
        const double l2 = candidate.link_lengths_m[1];
        return sc.base_offset + Vec2{l1 * std::cos(q1), l1 * std::sin(q1)} +
               Vec2{l2 * std::cos(q1 + q2), l2 * std::sin(q1 + q2)};
    }
    const double extension = joints.at(static_cast<std::size_t>(base));
    return sc.base_offset + Vec2{0.0, side_sign(side) * extension};
}

/// Nozzle ground position in the world frame for the given vehicle pose.
inline Vec2 nozzle_position(const Pose& pose, const ArmCandidate& candidate, Side side,
                            const std::vector<double>& joints) {
    return world_from_body(pose, nozzle_body_position(candidate, side, joints));
}

/// Joint setpoints that place the nozzle at the given body-frame lateral
/// coordinate, directly abeam the arm base. Throws when out of reach.
inline std::vector<double> feeding_joint_setpoints(const ArmCandidate& candidate, Side side,
                                                   double feed_line_lateral_body) {
    const ArmSideConfig& sc = candidate.side_config(side);
    if (candidate.joint_type == JointType::translatory) {
        const double extension = side_sign(side) * (feed_line_lateral_body - sc.base_offset.y);
        if (extension < candidate.travel_limits_m[0] - 1e-9 ||
            extension > candidate.travel_limits_m[1] + 1e-9) {
            throw Error(std::string("ArmCannotReach: extension ") + std::to_string(extension));
        }
        return {extension};
    }
    const double ry = feed_line_lateral_body - sc.base_offset.y;
    const double l1 = candidate.link_lengths_m[0];
    const double l2 = candidate.link_lengths_m[1];
    const double reach = std::abs(ry);
    const double d = (reach * reach - l1 * l1 - l2 * l2) / (2.0 * l1 * l2);
    if (d < -1.0 - 1e-9 || d > 1.0 + 1e-9) {
        throw Error(std::string("ArmCannotReach: span ") + std::to_string(reach));
    }
    const double elbow = std::acos(std::clamp(d, -1.0, 1.0));
    const double q2 = (ry < 0.0 ? -1.0 : 1.0) * elbow;
    const double q1 = std::atan2(ry, 0.0) -
                      std::atan2(l2 * std::sin(q2), l1 + l2 * std::cos(q2));
    return {q1, q2};
}

/// Stowed joint configuration (arm folded along the body axis / retracted).
inline std::vector<double> stowed_joint_setpoints(const ArmCandidate& candidate) {
    if (candidate.joint_type == JointType::rotary) return {0.0, 0.0};
    return {candidate.travel_limits_m[0]};
}

}  // namespace feedsim
