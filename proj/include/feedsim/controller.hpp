#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numbers>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "feedsim/arm.hpp"
#include "feedsim/contract.hpp"
#include "feedsim/plant.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/sensors.hpp"
#include "feedsim/validation.hpp"
#include "feedsim/vehicle.hpp"

namespace feedsim {

/// Hard speed demand; no controller output may command more than this.
constexpr double speed_cap_m_s = 0.25;

struct ControllerParams {
    double cruise_speed_m_s = 0.20;
    double steer_gain_lateral = 12.0;  // rad per m of lateral offset
    double steer_gain_heading = 8.0;
    double pulse_duration_s = 0.5;
    double pump_rate_kg_s = 0.2;
    double trigger_lead_m = 0.0;
    double deploy_zone_m = 0.5;
    bool steering_enabled = true;

    friend bool operator==(const ControllerParams&, const ControllerParams&) = default;
};

inline ValidationResult validate_controller_params(const ControllerParams& p) {
    ValidationResult result;
    if (!(p.cruise_speed_m_s > 0.0) || p.cruise_speed_m_s > speed_cap_m_s) {
        result.add(Issue::bad_params, "cruise_speed_m_s",
                   "must be positive and at most the 0.25 m/s cap");
    }
    if (!(p.steer_gain_lateral > 0.0)) result.add(Issue::bad_params, "steer_gain_lateral");
    if (!(p.steer_gain_heading > 0.0)) result.add(Issue::bad_params, "steer_gain_heading");
    if (!(p.pulse_duration_s > 0.0)) result.add(Issue::bad_params, "pulse_duration_s");
    if (!(p.pump_rate_kg_s > 0.0)) result.add(Issue::bad_params, "pump_rate_kg_s");
    if (p.trigger_lead_m < 0.0) result.add(Issue::bad_params, "trigger_lead_m");
    if (!(p.deploy_zone_m > 0.0)) result.add(Issue::bad_params, "deploy_zone_m");
    return result;
}

enum class Mode { approach, deploy_arm, feed_row, stow_arm, between_rows, done };

inline const char* mode_name(Mode m) {
    switch (m) {
        case Mode::approach: return "Approach";
        case Mode::deploy_arm: return "DeployArm";
        case Mode::feed_row: return "FeedRow";
        case Mode::stow_arm: return "StowArm";
        case Mode::between_rows: return "BetweenRows";
        case Mode::done: return "Done";
    }
    return "?";
}

enum class DeEventKind { control_tick, pulse_end };

struct DeEvent {
    double t = 0.0;
    std::uint64_t seq = 0;  // FIFO tie-break for equal times
    DeEventKind kind = DeEventKind::control_tick;
    Side side = Side::right;
};

/// Time-ordered DE event queue with FIFO tie-breaking. Events may never be
/// scheduled before the current sync time.
class DeEventQueue {
  public:
    void push(double t, DeEventKind kind, Side side = Side::right) {
        if (t < current_time_ - 1e-9) {
            throw Error("event scheduled before the current sync time");
        }
        queue_.push({t, next_seq_++, kind, side});
    }

    /// Pops every event due at or before t, in (time, insertion) order.
    std::vector<DeEvent> pop_due(double t) {
        current_time_ = std::max(current_time_, t);
        std::vector<DeEvent> due;
        while (!queue_.empty() && queue_.top().t <= t + 1e-9) {
            due.push_back(queue_.top());
            queue_.pop();
        }
        return due;
    }

    std::size_t size() const { return queue_.size(); }

  private:
    struct Later {
        bool operator()(const DeEvent& a, const DeEvent& b) const {
            if (a.t != b.t) return a.t > b.t;
            return a.seq > b.seq;
        }
    };
    std::priority_queue<DeEvent, std::vector<DeEvent>, Later> queue_;
    std::uint64_t next_seq_ = 0;
    double current_time_ = 0.0;
};

/// Observable discrete state of the mission controller.
struct ControllerState {
    Mode mode = Mode::approach;
    int row_index = 0;
    double s_est = 0.0;  // along-track position estimate of the rear axle
    std::array<std::int64_t, 2> last_ticks{0, 0};
    std::array<int, 2> next_target{0, 0};       // per side, into the row's trigger list
    std::array<bool, 2> pump_cmd{false, false};
    std::optional<std::int64_t> last_tag;
    DeEventQueue event_queue;
};

/// Dead-reckons the along-track estimate from the mean rear-encoder delta and
/// snaps it to a known anchor position when a fresh RFID tag is observed.
inline void update_odometry(ControllerState& st, std::array<std::int64_t, 2> ticks,
                            const TagReading& tag,
                            const std::map<std::int64_t, double>& tag_anchor_track_s,
                            int ticks_per_rev, double wheel_radius_m) {
    const double dl = static_cast<double>(ticks[0] - st.last_ticks[0]);
    const double dr = static_cast<double>(ticks[1] - st.last_ticks[1]);
    st.last_ticks = ticks;
    st.s_est += 0.5 * (dl + dr) * 2.0 * std::numbers::pi * wheel_radius_m / ticks_per_rev;
    if (tag.id) {
        if (st.last_tag != tag.id) {
            const auto it = tag_anchor_track_s.find(*tag.id);
            if (it == tag_anchor_track_s.end()) {
                throw Error("UnknownTag: " + std::to_string(*tag.id));
            }
            st.s_est = it->second;
        }
        st.last_tag = tag.id;
    } else {
        st.last_tag.reset();
    }
}

/// Proportional line-following law on lateral offset and heading error,
/// clamped to the steering range.
inline double steering_law(double lateral_m, double heading_rad, const ControllerParams& params,
                           double max_steer_rad) {
    const double raw =
        -(params.steer_gain_lateral * lateral_m + params.steer_gain_heading * heading_rad);
    return std::clamp(raw, -max_steer_rad, max_steer_rad);
}

/// Per-side pump trigger positions (vehicle track coordinate, increasing) for
/// one row. Triggers are placed so the moving pulse centroid lands on the
/// target: trigger = target - trigger_lead - pulse_path/2 - nozzle offset.
struct DispensePlan {
    std::array<std::vector<double>, 2> trigger_vehicle_s;  // [left, right]
};

inline DispensePlan plan_dispense(const WorldScenario& scn, int row_index,
                                  const ArmCandidate& candidate,
                                  const ControllerParams& params) {
    const CageRow& row = scn.rows[static_cast<std::size_t>(row_index)];
    const double row_start = scn.row_start_track_s[static_cast<std::size_t>(row_index)];
    const double row_end = scn.row_end_track_s[static_cast<std::size_t>(row_index)];
    const double pulse_path_m = params.cruise_speed_m_s * params.pulse_duration_s;

    DispensePlan plan;
    ValidationResult issues;
    for (Side s : fed_sides(row.side)) {
        if (!candidate.has_side(s)) continue;
        const double nozzle_long = candidate.side_config(s).base_offset.x;
        auto& triggers = plan.trigger_vehicle_s[side_index(s)];
        for (const PlacementTarget& target : scn.targets) {
            if (target.row != row_index || target.side != s) continue;
            triggers.push_back(target.s_track - params.trigger_lead_m - pulse_path_m / 2.0 -
                               nozzle_long);
        }
        std::sort(triggers.begin(), triggers.end());
        for (double trig : triggers) {
            if (trig < row_start - 1e-9 || trig > row_end + 1e-9) {
                issues.add(Issue::bad_params, side_name(s),
                           "trigger falls outside the row span");
                break;
            }
        }
    }

    // Pulse windows must not collide; with a shared pump the two sides'
    // windows interleave and are checked together.
    std::vector<std::pair<double, const char*>> windows;
    auto check_sequence = [&](const std::vector<double>& triggers, const char* label) {
        for (std::size_t i = 1; i < triggers.size(); ++i) {
            if (triggers[i] < triggers[i - 1] + pulse_path_m - 1e-9) {
                issues.add(Issue::overlapping_pulses, label,
                           "pulse windows collide at cruise speed");
                return;
            }
        }
    };
    if (candidate.half_cage_shift) {
        std::vector<double> merged;
        for (const auto& side_triggers : plan.trigger_vehicle_s) {
            merged.insert(merged.end(), side_triggers.begin(), side_triggers.end());
        }
        std::sort(merged.begin(), merged.end());
        check_sequence(merged, "shared_pump");
    } else {
        check_sequence(plan.trigger_vehicle_s[0], "Left");
        check_sequence(plan.trigger_vehicle_s[1], "Right");
    }
    throw_if_invalid(issues);
    return plan;
}

/// Joint setpoints for a mission mode: the feeding configuration while the
/// arm is deployed or feeding, the stowed configuration everywhere else.
inline std::vector<double> arm_plan(Mode mode, const std::vector<double>& feeding_setpoints,
                                    const std::vector<double>& stowed_setpoints) {
    if (mode == Mode::deploy_arm || mode == Mode::feed_row) return feeding_setpoints;
    return stowed_setpoints;
}

/// The sampled-data mission controller: mode machine, RFID-anchored odometry,
/// proportional steering, and candidate-specific dispense triggering.
/// One control tick is processed per synchronization point.
class FeedController {
  public:
    FeedController(const WorldScenario& scenario, const ArmCandidate& candidate,
                   const ControllerParams& params, const VehicleParams& vehicle,
                   const SensorParams& sensors, double control_period_s)
        : scenario_(&scenario),
          candidate_(candidate),
          params_(params),
          vehicle_(vehicle),
          sensors_(sensors),
          control_period_s_(control_period_s),
          contract_(build_contract(candidate)) {
        if (!scenario.finalized) throw Error("scenario must be finalized before simulation");
        throw_if_invalid(validate_controller_params(params));

        for (int r = 0; r < static_cast<int>(scenario.rows.size()); ++r) {
            plans_.push_back(plan_dispense(scenario, r, candidate, params));
            feeding_configs_.push_back(feeding_configuration(r));
        }
        stowed_config_.assign(static_cast<std::size_t>(candidate_.joint_count()), 0.0);
        for (const ArmSideConfig& sc : candidate_.sides) {
            const std::vector<double> per_side = stowed_joint_setpoints(candidate_);
            const int base = candidate_.joint_base_index(sc.side);
            for (int j = 0; j < candidate_.joints_per_side(); ++j) {
                stowed_config_[static_cast<std::size_t>(base + j)] =
                    per_side[static_cast<std::size_t>(j)];
            }
        }
        arm_setpoints_ = stowed_config_;
        build_tag_anchors();

        state_.s_est = scenario.track_s(scenario.start_pose_nominal.position());
        state_.event_queue.push(0.0, DeEventKind::control_tick);
    }

    const ContractSchema& contract() const { return contract_; }
    const ControllerState& state() const { return state_; }

    ControllerOutput step(const SignalMap& monitored, double t) {
        for (const DeEvent& event : state_.event_queue.pop_due(t)) {
            switch (event.kind) {
                case DeEventKind::control_tick:
                    control_tick(monitored, t);
                    state_.event_queue.push(event.t + control_period_s_,
                                            DeEventKind::control_tick);
                    break;
                case DeEventKind::pulse_end:
                    state_.pump_cmd[side_index(event.side)] = false;
                    break;
            }
        }
        return {build_outputs(), state_.mode == Mode::done};
    }

  private:
    std::vector<double> feeding_configuration(int row_index) const {
        const CageRow& row = scenario_->rows[static_cast<std::size_t>(row_index)];
        std::vector<double> config(static_cast<std::size_t>(candidate_.joint_count()), 0.0);
        for (const ArmSideConfig& sc : candidate_.sides) {
            const int base = candidate_.joint_base_index(sc.side);
            std::vector<double> per_side;
            bool feeds = false;
            for (Side s : fed_sides(row.side)) feeds = feeds || (s == sc.side);
            if (feeds) {
                per_side = feeding_joint_setpoints(candidate_, sc.side,
                                                   row.feed_line_lateral(sc.side));
            } else {
                per_side = stowed_joint_setpoints(candidate_);
            }
            for (int j = 0; j < candidate_.joints_per_side(); ++j) {
                config[static_cast<std::size_t>(base + j)] = per_side[static_cast<std::size_t>(j)];
            }
        }
        return config;
    }

    /// Anchor positions are calibrated to the nominal first-detection point:
    /// the rear-axle track position at which the reader first sees the tag on
    /// a centered pass.
    void build_tag_anchors() {
        for (const TagInfo& tag : scenario_->tags) {
            const CageRow& row = scenario_->rows[static_cast<std::size_t>(tag.row)];
            const double tag_lat =
                (row.side == RowSide::left ? 1.0 : -1.0) * row.tag_lateral_offset_m;
            const double gap = std::abs(tag_lat - sensors_.rfid_reader_offset.y);
            const double range = sensors_.rfid_range_m;
            const double chord =
                gap < range ? std::sqrt(range * range - gap * gap) : 0.0;
            tag_anchor_track_s_[tag.id] = tag.s_track - sensors_.rfid_reader_offset.x - chord;
        }
    }

    void control_tick(const SignalMap& monitored, double t) {
        const std::array<std::int64_t, 2> ticks{get_integer(monitored, "encoder_left_ticks"),
                                                get_integer(monitored, "encoder_right_ticks")};
        update_odometry(state_, ticks, get_tag(monitored, "rfid_tag"), tag_anchor_track_s_,
                        sensors_.encoder_ticks_per_rev, vehicle_.wheel_radius_m);

        steer_cmd_ = 0.0;
        if (params_.steering_enabled) {
            steer_cmd_ = steering_law(get_real(monitored, "vision_lateral_m"),
                                      get_real(monitored, "vision_heading_rad"), params_,
                                      vehicle_.max_steer_rad);
        }

        update_mode();
        if (state_.mode == Mode::feed_row) fire_due_triggers(t);
        arm_setpoints_ = arm_plan(state_.mode,
                                  feeding_configs_[static_cast<std::size_t>(state_.row_index)],
                                  stowed_config_);
    }

    void update_mode() {
        const std::size_t k = static_cast<std::size_t>(state_.row_index);
        const double row_start = scenario_->row_start_track_s[k];
        const double row_end = scenario_->row_end_track_s[k];
        switch (state_.mode) {
            case Mode::approach:
            case Mode::between_rows:
                if (state_.s_est >= row_start - params_.deploy_zone_m) {
                    state_.mode = Mode::deploy_arm;
                }
                break;
            case Mode::deploy_arm:
                if (state_.s_est >= row_start) state_.mode = Mode::feed_row;
                break;
            case Mode::feed_row:
                // The last pulse may still be running just past the row end;
                // the arm must not move before it finishes.
                if (state_.s_est >= row_end && !state_.pump_cmd[0] && !state_.pump_cmd[1]) {
                    state_.mode = Mode::stow_arm;
                }
                break;
            case Mode::stow_arm:
                if (state_.s_est >= row_end + params_.deploy_zone_m) {
                    if (k + 1 < scenario_->rows.size()) {
                        state_.mode = Mode::between_rows;
                        state_.row_index += 1;
                        state_.next_target = {0, 0};
                    } else {
                        state_.mode = Mode::done;
                    }
                }
                break;
            case Mode::done:
                break;
        }
    }

    void fire_due_triggers(double t) {
        const DispensePlan& plan = plans_[static_cast<std::size_t>(state_.row_index)];
        for (const ArmSideConfig& sc : candidate_.sides) {
            const std::size_t i = side_index(sc.side);
            const auto& triggers = plan.trigger_vehicle_s[i];
            const int idx = state_.next_target[i];
            if (idx >= static_cast<int>(triggers.size())) continue;
            if (state_.s_est < triggers[static_cast<std::size_t>(idx)]) continue;
            if (state_.pump_cmd[i]) continue;
            if (candidate_.half_cage_shift && state_.pump_cmd[1 - i]) continue;
            state_.pump_cmd[i] = true;
            state_.next_target[i] = idx + 1;
            state_.event_queue.push(t + params_.pulse_duration_s, DeEventKind::pulse_end,
                                    sc.side);
        }
    }

    SignalMap build_outputs() const {
        SignalMap out;
        const bool finished = state_.mode == Mode::done;
        out["speed_set_m_s"] =
            finished ? 0.0 : std::min(params_.cruise_speed_m_s, speed_cap_m_s);
        out["steer_set_rad"] = finished ? 0.0 : steer_cmd_;
        for (const ArmSideConfig& sc : candidate_.sides) {
            const std::size_t i = side_index(sc.side);
            out[pump_signal_name(sc.side)] = !finished && state_.pump_cmd[i];
            const int base = candidate_.joint_base_index(sc.side);
            for (int j = 0; j < candidate_.joints_per_side(); ++j) {
                out[arm_signal_name(sc.side, j) + "_set"] =
                    arm_setpoints_[static_cast<std::size_t>(base + j)];
            }
        }
        return out;
    }

    const WorldScenario* scenario_;
    ArmCandidate candidate_;
    ControllerParams params_;
    VehicleParams vehicle_;
    SensorParams sensors_;
    double control_period_s_;
    ContractSchema contract_;
    std::vector<DispensePlan> plans_;
    std::vector<std::vector<double>> feeding_configs_;
    std::vector<double> stowed_config_;
    std::vector<double> arm_setpoints_;
    std::map<std::int64_t, double> tag_anchor_track_s_;
    double steer_cmd_ = 0.0;
    ControllerState state_;
};

}  // namespace feedsim
