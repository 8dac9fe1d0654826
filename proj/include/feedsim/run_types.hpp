#pragma once

#include "feedsim/arm.hpp"
#include "feedsim/geometry.hpp"

namespace feedsim {

/// One completed pump pulse: the mass-weighted ground centroid of the fodder
/// placed while the pump was on.
struct DispenseEvent {
    double t = 0.0;
    Vec2 position;
    Side side = Side::right;
    double amount_kg = 0.0;
    int row_index = 0;
    CandidateId candidate = CandidateId::single_translatory;

    friend bool operator==(const DispenseEvent&, const DispenseEvent&) = default;
};

/// Vehicle pose and speed sampled at a synchronization boundary.
struct PoseSample {
    double t = 0.0;
    double x_m = 0.0;
    double y_m = 0.0;
    double heading_rad = 0.0;
    double speed_m_s = 0.0;

    friend bool operator==(const PoseSample&, const PoseSample&) = default;
};

}  // namespace feedsim
