#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "feedsim/arm.hpp"
#include "feedsim/contract.hpp"
#include "feedsim/geometry.hpp"
#include "feedsim/rng.hpp"
#include "feedsim/run_types.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/sensors.hpp"
#include "feedsim/validation.hpp"
#include "feedsim/vehicle.hpp"

namespace feedsim {

/// Integrates one side's pump pulse: total mass and the position integral
/// weighted by dispensed mass.
struct PulseAccumulator {
    bool active = false;
    double start_t = 0.0;
    double mass_kg = 0.0;
    Vec2 weighted_position;  // integral of nozzle position d(mass)

    friend bool operator==(const PulseAccumulator&, const PulseAccumulator&) = default;
};

/// Full continuous-time state of the robot.
struct PlantState {
    Pose pose;
    double speed_m_s = 0.0;
    double steer_angle_rad = 0.0;
    std::vector<double> arm_joints;  // side-major layout per the candidate
    double hopper_kg = 0.0;
    double wheel_angle_left_rad = 0.0;
    double wheel_angle_right_rad = 0.0;
    std::array<PulseAccumulator, 2> pulses;  // [left, right]

    bool pump_active(Side s) const { return pulses[side_index(s)].active; }

    bool finite() const {
        bool ok = std::isfinite(pose.x) && std::isfinite(pose.y) && std::isfinite(pose.heading) &&
                  std::isfinite(speed_m_s) && std::isfinite(steer_angle_rad) &&
                  std::isfinite(hopper_kg) && std::isfinite(wheel_angle_left_rad) &&
                  std::isfinite(wheel_angle_right_rad);
        for (double q : arm_joints) ok = ok && std::isfinite(q);
        return ok;
    }

    friend bool operator==(const PlantState&, const PlantState&) = default;
};

/// The controlled side of the contract, parsed into plant inputs.
struct ControlledInputs {
    double speed_set_m_s = 0.0;
    double steer_set_rad = 0.0;
    std::array<bool, 2> pump{false, false};  // [left, right]
    std::vector<double> joint_setpoints;

    friend bool operator==(const ControlledInputs&, const ControlledInputs&) = default;
};

inline std::string arm_signal_name(Side side, int joint) {
    return std::string("arm_") + side_key(side) + "_q" + std::to_string(joint);
}

inline std::string pump_signal_name(Side side) {
    return std::string("pump_") + side_key(side);
}

/// The signal contract for a given arm candidate. Both models derive their
/// contract from this single definition.
inline ContractSchema build_contract(const ArmCandidate& candidate) {
    ContractSchema schema;
    schema.monitored = {
        {"encoder_left_ticks", "ticks", SignalKind::integer},
        {"encoder_right_ticks", "ticks", SignalKind::integer},
        {"kingpin_angle_rad", "rad", SignalKind::real},
        {"vision_lateral_m", "m", SignalKind::real},
        {"vision_heading_rad", "rad", SignalKind::real},
        {"imu_yaw_rate_rad_s", "rad/s", SignalKind::real},
        {"rfid_tag", "id", SignalKind::tag},
        {"hopper_kg", "kg", SignalKind::real},
    };
    schema.controlled = {
        {"speed_set_m_s", "m/s", SignalKind::real},
        {"steer_set_rad", "rad", SignalKind::real},
    };
    const char* joint_unit = candidate.joint_type == JointType::rotary ? "rad" : "m";
    for (const ArmSideConfig& sc : candidate.sides) {
        for (int j = 0; j < candidate.joints_per_side(); ++j) {
            schema.monitored.push_back({arm_signal_name(sc.side, j), joint_unit, SignalKind::real});
            schema.controlled.push_back(
                {arm_signal_name(sc.side, j) + "_set", joint_unit, SignalKind::real});
        }
        schema.controlled.push_back({pump_signal_name(sc.side), "on", SignalKind::boolean});
    }
    return schema;
}

inline ControlledInputs parse_controlled(const SignalMap& values, const ArmCandidate& candidate) {
    ControlledInputs in;
    in.speed_set_m_s = get_real(values, "speed_set_m_s");
    in.steer_set_rad = get_real(values, "steer_set_rad");
    in.joint_setpoints.resize(static_cast<std::size_t>(candidate.joint_count()), 0.0);
    for (const ArmSideConfig& sc : candidate.sides) {
        in.pump[side_index(sc.side)] = get_boolean(values, pump_signal_name(sc.side));
        const int base = candidate.joint_base_index(sc.side);
        for (int j = 0; j < candidate.joints_per_side(); ++j) {
            in.joint_setpoints[static_cast<std::size_t>(base + j)] =
                get_real(values, arm_signal_name(sc.side, j) + "_set");
        }
    }
    return in;
}

namespace detail {

// State vector layout for the integrator.
constexpr int sv_x = 0;
constexpr int sv_y = 1;
constexpr int sv_heading = 2;
constexpr int sv_speed = 3;
constexpr int sv_steer = 4;
constexpr int sv_wheel_left = 5;
constexpr int sv_wheel_right = 6;
constexpr int sv_joints = 7;
constexpr int sv_max = sv_joints + 4;

using StateVec = std::array<double, sv_max>;

struct DerivContext {
    const VehicleParams* vehicle;
    const ArmCandidate* candidate;
    ControlledInputs inputs;  // setpoints pre-clamped to actuator limits
    int dim;
};

inline StateVec pack(const PlantState& s) {
    StateVec v{};
    v[sv_x] = s.pose.x;
    v[sv_y] = s.pose.y;
    v[sv_heading] = s.pose.heading;
    v[sv_speed] = s.speed_m_s;
    v[sv_steer] = s.steer_angle_rad;
    v[sv_wheel_left] = s.wheel_angle_left_rad;
    v[sv_wheel_right] = s.wheel_angle_right_rad;
    for (std::size_t j = 0; j < s.arm_joints.size(); ++j) v[sv_joints + j] = s.arm_joints[j];
    return v;
}

inline void unpack(const StateVec& v, PlantState& s) {
    s.pose.x = v[sv_x];
    s.pose.y = v[sv_y];
    s.pose.heading = v[sv_heading];
    s.speed_m_s = v[sv_speed];
    s.steer_angle_rad = v[sv_steer];
    s.wheel_angle_left_rad = v[sv_wheel_left];
    s.wheel_angle_right_rad = v[sv_wheel_right];
    for (std::size_t j = 0; j < s.arm_joints.size(); ++j) s.arm_joints[j] = v[sv_joints + j];
}

inline StateVec derivatives(const StateVec& s, const DerivContext& ctx) {
    const VehicleParams& veh = *ctx.vehicle;
    const ArmCandidate& cand = *ctx.candidate;
    StateVec d{};

    const double v = s[sv_speed];
    const double steer = s[sv_steer];
    const double tan_steer = std::tan(steer);
    const double turn_rate = v * tan_steer / veh.wheelbase_m;

    d[sv_x] = v * std::cos(s[sv_heading]);
    d[sv_y] = v * std::sin(s[sv_heading]);
    d[sv_heading] = turn_rate;

    if (veh.speed_time_constant_s > 0.0) {
        d[sv_speed] = std::clamp((ctx.inputs.speed_set_m_s - v) / veh.speed_time_constant_s,
                                 -veh.accel_limit_m_s2, veh.accel_limit_m_s2);
    }
    if (veh.steer_time_constant_s > 0.0) {
        d[sv_steer] = std::clamp((ctx.inputs.steer_set_rad - steer) / veh.steer_time_constant_s,
                                 -veh.steer_rate_limit_rad_s, veh.steer_rate_limit_rad_s);
    }

    // Differential rear drive: symmetric split around the common speed.
    const double differential = (veh.track_width_m / 2.0) * tan_steer / veh.wheelbase_m;
    d[sv_wheel_left] = v * (1.0 - differential) / veh.wheel_radius_m;
    d[sv_wheel_right] = v * (1.0 + differential) / veh.wheel_radius_m;

    if (cand.joint_time_constant_s > 0.0) {
        for (int j = 0; j < cand.joint_count(); ++j) {
            d[sv_joints + j] =
                std::clamp((ctx.inputs.joint_setpoints[static_cast<std::size_t>(j)] -
                            s[sv_joints + j]) / cand.joint_time_constant_s,
                           -cand.joint_rate_limit, cand.joint_rate_limit);
        }
    }
    return d;
}

inline ControlledInputs clamp_inputs(const ControlledInputs& raw, const VehicleParams& veh,
                                     const ArmCandidate& cand) {
    ControlledInputs in = raw;
    in.speed_set_m_s = std::max(0.0, in.speed_set_m_s);
    in.steer_set_rad = std::clamp(in.steer_set_rad, -veh.max_steer_rad, veh.max_steer_rad);
    if (cand.joint_type == JointType::translatory) {
        for (double& q : in.joint_setpoints) {
            q = std::clamp(q, cand.travel_limits_m[0], cand.travel_limits_m[1]);
        }
    }
    return in;
}

}  // namespace detail

/// Advances the vehicle/arm state one CT substep with classic fixed-step RK4.
/// Kinematic bicycle model, first-order actuator lags with rate limits, and
/// differential rear-wheel angle accumulation. Hopper and pulse bookkeeping
/// are handled separately by dispense_update().
inline PlantState step_plant(const PlantState& state, const ControlledInputs& controlled,
                             const VehicleParams& vehicle, const ArmCandidate& candidate,
                             double dt) {
    detail::DerivContext ctx{&vehicle, &candidate,
                             detail::clamp_inputs(controlled, vehicle, candidate),
                             detail::sv_joints + candidate.joint_count()};

    PlantState next = state;
    // A zero time constant means the actuator tracks its setpoint directly.
    if (vehicle.speed_time_constant_s <= 0.0) next.speed_m_s = ctx.inputs.speed_set_m_s;
    if (vehicle.steer_time_constant_s <= 0.0) next.steer_angle_rad = ctx.inputs.steer_set_rad;
    if (candidate.joint_time_constant_s <= 0.0) next.arm_joints = ctx.inputs.joint_setpoints;

    detail::StateVec y0 = detail::pack(next);
    const detail::StateVec k1 = detail::derivatives(y0, ctx);
    detail::StateVec tmp{};
    for (int i = 0; i < ctx.dim; ++i) tmp[i] = y0[i] + 0.5 * dt * k1[i];
    const detail::StateVec k2 = detail::derivatives(tmp, ctx);
    for (int i = 0; i < ctx.dim; ++i) tmp[i] = y0[i] + 0.5 * dt * k2[i];
    const detail::StateVec k3 = detail::derivatives(tmp, ctx);
    for (int i = 0; i < ctx.dim; ++i) tmp[i] = y0[i] + dt * k3[i];
    const detail::StateVec k4 = detail::derivatives(tmp, ctx);
    for (int i = 0; i < ctx.dim; ++i) {
        y0[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    }
    detail::unpack(y0, next);

    next.speed_m_s = std::max(0.0, next.speed_m_s);
    next.steer_angle_rad =
        std::clamp(next.steer_angle_rad, -vehicle.max_steer_rad, vehicle.max_steer_rad);
    if (candidate.joint_type == JointType::translatory) {
        for (double& q : next.arm_joints) {
            q = std::clamp(q, candidate.travel_limits_m[0], candidate.travel_limits_m[1]);
        }
    }
    if (!next.finite()) throw Error("NonFiniteState after plant step");
    return next;
}

/// Pump-flow bookkeeping over one substep [t, t+dt]. While a side's pump
/// command is on, fodder flows at pump_rate and the accumulator integrates
/// nozzle ground position weighted by dispensed mass (midpoint rule between
/// the pre- and post-step nozzle positions). When the command is off and a
/// pulse was active, the finished DispenseEvent is emitted with t as its
/// cut-off time. An empty hopper stops the flow but not the run.
inline std::vector<DispenseEvent> dispense_update(const PlantState& before, PlantState& state,
                                                  const ControlledInputs& controlled,
                                                  const ArmCandidate& candidate,
                                                  const WorldScenario& scenario,
                                                  double pump_rate_kg_s, double dt, double t) {
    std::vector<DispenseEvent> events;
    for (const ArmSideConfig& sc : candidate.sides) {
        const std::size_t i = side_index(sc.side);
        PulseAccumulator& acc = state.pulses[i];
        if (controlled.pump[i]) {
            if (!acc.active) acc = {true, t, 0.0, {0.0, 0.0}};
            const double dm = std::min(pump_rate_kg_s * dt, state.hopper_kg);
            if (dm > 0.0) {
                const Vec2 p0 = nozzle_position(before.pose, candidate, sc.side, before.arm_joints);
                const Vec2 p1 = nozzle_position(state.pose, candidate, sc.side, state.arm_joints);
                acc.mass_kg += dm;
                acc.weighted_position += dm * (0.5 * (p0 + p1));
                state.hopper_kg -= dm;
            }
        } else if (acc.active) {
            if (acc.mass_kg > 0.0) {
                const Vec2 centroid = (1.0 / acc.mass_kg) * acc.weighted_position;
                events.push_back({t, centroid, sc.side, acc.mass_kg,
                                  scenario.nearest_row(centroid), candidate.id});
            }
            acc = PulseAccumulator{};
        }
    }
    return events;
}

/// Synthesizes the full monitored signal set from the plant state. The RFID
/// reading can be overridden with a detection latched mid-interval.
inline SignalMap sample_sensors(const PlantState& state, const WorldScenario& scenario,
                                const SensorParams& sensors, const ArmCandidate& candidate,
                                double wheelbase_m, Rng& rng,
                                std::optional<std::int64_t> latched_tag = std::nullopt) {
    SignalMap values;
    values["encoder_left_ticks"] =
        encoder_ticks(state.wheel_angle_left_rad, sensors.encoder_ticks_per_rev);
    values["encoder_right_ticks"] =
        encoder_ticks(state.wheel_angle_right_rad, sensors.encoder_ticks_per_rev);
    values["kingpin_angle_rad"] =
        quantize(state.steer_angle_rad, sensors.kingpin_quantization_rad);

    double lateral = 0.0;
    double heading = 0.0;
    if (sensors.vision_enabled) {
        const int row = scenario.nearest_row(state.pose.position());
        const GuidanceError err =
            guidance_error(scenario.rows[static_cast<std::size_t>(row)], state.pose);
        lateral = err.lateral_m;
        heading = err.heading_rad;
        if (sensors.vision_noise_std_m > 0.0) {
            lateral += sensors.vision_noise_std_m * rng.next_gaussian();
            heading += sensors.vision_noise_std_m * rng.next_gaussian();
        }
    }
    values["vision_lateral_m"] = lateral;
    values["vision_heading_rad"] = heading;

    double yaw_rate = state.speed_m_s * std::tan(state.steer_angle_rad) / wheelbase_m;
    if (sensors.imu_noise_std_rad_s > 0.0) {
        yaw_rate += sensors.imu_noise_std_rad_s * rng.next_gaussian();
    }
    values["imu_yaw_rate_rad_s"] = yaw_rate;

    TagReading tag;
    if (latched_tag) {
        tag.id = latched_tag;
    } else {
        tag.id = rfid_probe(scenario, world_from_body(state.pose, sensors.rfid_reader_offset),
                            sensors.rfid_range_m);
    }
    values["rfid_tag"] = tag;
    values["hopper_kg"] = state.hopper_kg;

    for (const ArmSideConfig& sc : candidate.sides) {
        const int base = candidate.joint_base_index(sc.side);
        for (int j = 0; j < candidate.joints_per_side(); ++j) {
            values[arm_signal_name(sc.side, j)] =
                state.arm_joints[static_cast<std::size_t>(base + j)];
        }
    }
    return values;
}

/// The continuous-time robot model. Owns the plant state, the sensor RNG and
/// the mid-interval RFID latch; satisfies the kernel's CT-model interface.
class RobotPlant {
  public:
    RobotPlant(const WorldScenario& scenario, const ArmCandidate& candidate,
               const VehicleParams& vehicle, const SensorParams& sensors,
               double pump_rate_kg_s, std::uint64_t seed, const Pose& start_pose)
        : scenario_(&scenario),
          candidate_(candidate),
          vehicle_(vehicle),
          sensors_(sensors),
          pump_rate_kg_s_(pump_rate_kg_s),
          contract_(build_contract(candidate)),
          rng_(seed) {
        if (!scenario.finalized) throw Error("scenario must be finalized before simulation");
        state_.pose = start_pose;
        state_.hopper_kg = vehicle.hopper_capacity_kg;
        state_.arm_joints.assign(static_cast<std::size_t>(candidate_.joint_count()), 0.0);
        for (const ArmSideConfig& sc : candidate_.sides) {
            const std::vector<double> per_side = stowed_joint_setpoints(candidate_);
            const int base = candidate_.joint_base_index(sc.side);
            for (int j = 0; j < candidate_.joints_per_side(); ++j) {
                state_.arm_joints[static_cast<std::size_t>(base + j)] =
                    per_side[static_cast<std::size_t>(j)];
            }
        }
        inputs_.joint_setpoints = state_.arm_joints;
    }

    const ContractSchema& contract() const { return contract_; }
    const PlantState& state() const { return state_; }
    double wheelbase_m() const { return vehicle_.wheelbase_m; }

    void apply_controlled(const SignalMap& values, double /*t*/) {
        inputs_ = parse_controlled(values, candidate_);
    }

    /// Integrates one communication interval in CT substeps under the latched
    /// (zero-order-hold) controlled inputs.
    void advance(double t, double interval_s, double substep_s) {
        const int n = static_cast<int>(std::llround(interval_s / substep_s));
        const double dt = interval_s / n;
        for (int i = 0; i < n && healthy_; ++i) {
            const double t_sub = t + i * dt;
            PlantState before = state_;
            try {
                state_ = step_plant(state_, inputs_, vehicle_, candidate_, dt);
            } catch (const Error&) {
                healthy_ = false;
                break;
            }
            auto emitted = dispense_update(before, state_, inputs_, candidate_, *scenario_,
                                           pump_rate_kg_s_, dt, t_sub);
            pending_events_.insert(pending_events_.end(), emitted.begin(), emitted.end());
            if (!rfid_latch_) {
                rfid_latch_ = rfid_probe(
                    *scenario_, world_from_body(state_.pose, sensors_.rfid_reader_offset),
                    sensors_.rfid_range_m);
            }
            if (!state_.finite()) healthy_ = false;
        }
    }

    SignalMap sample_monitored(double /*t*/) {
        std::optional<std::int64_t> latched = rfid_latch_;
        rfid_latch_.reset();
        return sample_sensors(state_, *scenario_, sensors_, candidate_, vehicle_.wheelbase_m,
                              rng_, latched);
    }

    PoseSample pose_sample(double t) const {
        return {t, state_.pose.x, state_.pose.y, state_.pose.heading, state_.speed_m_s};
    }

    std::vector<DispenseEvent> take_dispense_events() {
        std::vector<DispenseEvent> out;
        out.swap(pending_events_);
        return out;
    }

    bool healthy() const { return healthy_; }

    /// Unfinished pulse mass still in the accumulators (for mass accounting).
    double pulse_residue_kg() const {
        return state_.pulses[0].mass_kg * (state_.pulses[0].active ? 1.0 : 0.0) +
               state_.pulses[1].mass_kg * (state_.pulses[1].active ? 1.0 : 0.0);
    }

  private:
    const WorldScenario* scenario_;
    ArmCandidate candidate_;
    VehicleParams vehicle_;
    SensorParams sensors_;
    double pump_rate_kg_s_;
    ContractSchema contract_;
    Rng rng_;
    PlantState state_;
    ControlledInputs inputs_;
    std::vector<DispenseEvent> pending_events_;
    std::optional<std::int64_t> rfid_latch_;
    bool healthy_ = true;
};

}  // namespace feedsim
