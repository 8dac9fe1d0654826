#pragma once

#include <cmath>
#include <cstdint>

#include "feedsim/validation.hpp"

namespace feedsim {

/// Timing setup of a co-simulation run: the communication interval between
/// DE/CT exchanges and the internal CT integration substep.
struct CoSimConfig {
    double comm_interval_s = 0.01;
    double ct_substep_s = 0.001;
    double t_max_s = 120.0;
    std::uint64_t seed = 42;

    friend bool operator==(const CoSimConfig&, const CoSimConfig&) = default;
};

/// Number of CT substeps per communication interval. Only meaningful after
/// the config validates.
inline int substeps_per_interval(const CoSimConfig& config) {
    return static_cast<int>(std::llround(config.comm_interval_s / config.ct_substep_s));
}

inline ValidationResult validate_config(const CoSimConfig& config) {
    ValidationResult result;
    if (!(config.ct_substep_s > 0.0) || !(config.comm_interval_s > 0.0) ||
        config.ct_substep_s > config.comm_interval_s) {
        result.add(Issue::bad_interval, "ct_substep_s",
                   "require 0 < ct_substep_s <= comm_interval_s");
        return result;
    }
    const double ratio = config.comm_interval_s / config.ct_substep_s;
    const double rounded = std::round(ratio);
    if (std::abs(ratio - rounded) > 1e-9 * ratio || rounded < 1.0) {
        result.add(Issue::bad_interval, "comm_interval_s",
                   "comm_interval_s must divide into whole ct substeps");
    }
    if (!(config.t_max_s > 0.0)) {
        result.add(Issue::bad_time_limit, "t_max_s", "t_max_s must be positive");
    }
    return result;
}

}  // namespace feedsim
