#pragma once

#include <numbers>

#include "feedsim/validation.hpp"

namespace feedsim {

/// Four-wheeled vehicle with front steering and differential rear drive.
/// Geometry plus the first-order actuator behavior of the drive and steering.
struct VehicleParams {
    double wheelbase_m = 1.0;
    double track_width_m = 0.8;
    double wheel_radius_m = 0.15;
    double body_length_m = 1.2;
    double body_width_m = 0.8;
    double max_steer_rad = 0.5;
    double steer_rate_limit_rad_s = 1.0;
    double accel_limit_m_s2 = 0.5;
    double speed_time_constant_s = 0.3;   // 0 disables the lag (direct tracking)
    double steer_time_constant_s = 0.2;   // 0 disables the lag
    double hopper_capacity_kg = 5.0;

    friend bool operator==(const VehicleParams&, const VehicleParams&) = default;
};

inline ValidationResult validate_vehicle(const VehicleParams& p) {
    ValidationResult result;
    auto positive = [&result](double v, const char* name) {
        if (!(v > 0.0)) result.add(Issue::bad_params, name, "must be positive");
    };
    positive(p.wheelbase_m, "wheelbase_m");
    positive(p.track_width_m, "track_width_m");
    positive(p.wheel_radius_m, "wheel_radius_m");
    positive(p.body_length_m, "body_length_m");
    positive(p.body_width_m, "body_width_m");
    positive(p.max_steer_rad, "max_steer_rad");
    positive(p.steer_rate_limit_rad_s, "steer_rate_limit_rad_s");
    positive(p.accel_limit_m_s2, "accel_limit_m_s2");
    positive(p.hopper_capacity_kg, "hopper_capacity_kg");
    if (p.speed_time_constant_s < 0.0) result.add(Issue::bad_params, "speed_time_constant_s");
    if (p.steer_time_constant_s < 0.0) result.add(Issue::bad_params, "steer_time_constant_s");
    if (!(p.max_steer_rad < std::numbers::pi / 2.0)) {
        result.add(Issue::bad_params, "max_steer_rad", "must be below pi/2");
    }
    return result;
}

}  // namespace feedsim
