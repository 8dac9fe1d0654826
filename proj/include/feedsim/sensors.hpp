#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>

#include "feedsim/contract.hpp"
#include "feedsim/geometry.hpp"
#include "feedsim/rng.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

/// Sensor suite configuration. Noise is off by default so runs stay
/// bit-reproducible unless noise is explicitly requested.
struct SensorParams {
    int encoder_ticks_per_rev = 2048;
    double rfid_range_m = 0.25;
    double vision_noise_std_m = 0.0;
    double imu_noise_std_rad_s = 0.0;
    double kingpin_quantization_rad = 2.0 * std::numbers::pi / 2048.0;
    bool vision_enabled = true;
    Vec2 rfid_reader_offset{0.30, -0.35};  // body frame

    friend bool operator==(const SensorParams&, const SensorParams&) = default;
};

inline ValidationResult validate_sensors(const SensorParams& p) {
    ValidationResult result;
    if (p.encoder_ticks_per_rev <= 0) result.add(Issue::bad_params, "encoder_ticks_per_rev");
    if (!(p.rfid_range_m > 0.0)) result.add(Issue::bad_params, "rfid_range_m");
    if (p.vision_noise_std_m < 0.0) result.add(Issue::bad_params, "vision_noise_std_m");
    if (p.imu_noise_std_rad_s < 0.0) result.add(Issue::bad_params, "imu_noise_std_rad_s");
    if (!(p.kingpin_quantization_rad > 0.0)) {
        result.add(Issue::bad_params, "kingpin_quantization_rad");
    }
    return result;
}

/// Cumulative encoder count for a cumulative wheel angle.
inline std::int64_t encoder_ticks(double wheel_angle_rad, int ticks_per_rev) {
    return static_cast<std::int64_t>(
        std::floor(wheel_angle_rad / (2.0 * std::numbers::pi) * ticks_per_rev));
}

inline double quantize(double value, double step) {
    return step > 0.0 ? std::round(value / step) * step : value;
}

/// Identifier of the nearest tag within reader range, if any.
inline std::optional<std::int64_t> rfid_probe(const WorldScenario& scn, Vec2 reader_position,
                                              double range_m) {
    std::optional<std::int64_t> best;
    double best_d = range_m;
    for (const TagInfo& tag : scn.tags) {
        const double d = norm(tag.position - reader_position);
        if (d <= best_d) {
            best_d = d;
            best = tag.id;
        }
    }
    return best;
}

}  // namespace feedsim
