#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>
#include <vector>

#include "feedsim/plant.hpp"
#include "feedsim/rng.hpp"
#include "test_helpers.hpp"

using namespace feedsim;
using Catch::Approx;

namespace {

VehicleParams lagless_vehicle() {
    VehicleParams v;
    v.speed_time_constant_s = 0.0;
    v.steer_time_constant_s = 0.0;
    return v;
}

ControlledInputs drive_inputs(const ArmCandidate& candidate, double speed, double steer) {
    ControlledInputs in;
    in.speed_set_m_s = speed;
    in.steer_set_rad = steer;
    in.joint_setpoints.assign(static_cast<std::size_t>(candidate.joint_count()), 0.0);
    return in;
}

PlantState initial_state(const ArmCandidate& candidate) {
    PlantState s;
    s.hopper_kg = 5.0;
    s.arm_joints.assign(static_cast<std::size_t>(candidate.joint_count()), 0.0);
    return s;
}

/// Independent oracle: explicit-Euler integration of the same kinematics.
struct EulerEndpoint {
    double x, y, heading, wheel_left, wheel_right;
};

EulerEndpoint euler_oracle(double speed, double steer, const VehicleParams& veh,
                           double duration, double dt) {
    EulerEndpoint s{0, 0, 0, 0, 0};
    const long steps = std::lround(duration / dt);
    for (long i = 0; i < steps; ++i) {
        const double turn = speed * std::tan(steer) / veh.wheelbase_m;
        const double diff = (veh.track_width_m / 2.0) * std::tan(steer) / veh.wheelbase_m;
        s.x += dt * speed * std::cos(s.heading);
        s.y += dt * speed * std::sin(s.heading);
        s.heading += dt * turn;
        s.wheel_left += dt * speed * (1.0 - diff) / veh.wheel_radius_m;
        s.wheel_right += dt * speed * (1.0 + diff) / veh.wheel_radius_m;
    }
    return s;
}

}  // namespace

TEST_CASE("plant at rest stays at rest") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const VehicleParams veh;
    PlantState s = initial_state(candidate);
    const PlantState next = step_plant(s, drive_inputs(candidate, 0.0, 0.0), veh, candidate, 0.05);
    CHECK(next.pose == s.pose);
    CHECK(next.speed_m_s == 0.0);
    CHECK(next.wheel_angle_left_rad == 0.0);
    CHECK(next.wheel_angle_right_rad == 0.0);
}

TEST_CASE("straight line at held speed matches the closed form and the Euler oracle") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const VehicleParams veh = lagless_vehicle();
    const ControlledInputs in = drive_inputs(candidate, 0.25, 0.0);
    PlantState s = initial_state(candidate);
    for (int i = 0; i < 1000; ++i) s = step_plant(s, in, veh, candidate, 1e-3);

    CHECK(s.pose.x == Approx(0.25).margin(1e-6));
    CHECK(s.pose.y == Approx(0.0).margin(1e-12));
    CHECK(s.pose.heading == Approx(0.0).margin(1e-12));

    const EulerEndpoint oracle = euler_oracle(0.25, 0.0, veh, 1.0, 1e-5);
    CHECK(std::abs(s.pose.x - oracle.x) <= 1e-6);
    CHECK(std::abs(s.pose.y - oracle.y) <= 1e-6);
}

TEST_CASE("constant-steer heading matches v*tan(steer)/L and the Euler oracle") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    VehicleParams veh = lagless_vehicle();
    veh.wheelbase_m = 1.0;
    const ControlledInputs in = drive_inputs(candidate, 0.25, 0.1);
    PlantState s = initial_state(candidate);
    for (int i = 0; i < 10000; ++i) s = step_plant(s, in, veh, candidate, 1e-3);

    const double expected = 0.25 * 10.0 * std::tan(0.1) / 1.0;
    CHECK(expected == Approx(0.2508366802).margin(1e-9));
    CHECK(s.pose.heading == Approx(expected).margin(1e-9));

    const EulerEndpoint oracle = euler_oracle(0.25, 0.1, veh, 10.0, 1e-5);
    CHECK(std::abs(s.pose.heading - oracle.heading) <= 1e-5);
}

TEST_CASE("differential wheel rates always sum to 2v/r") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const VehicleParams veh = lagless_vehicle();
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        const double speed = 0.25 * rng.next_unit();
        const double steer = (rng.next_unit() - 0.5) * 0.9;
        PlantState s = initial_state(candidate);
        const double dt = 0.01;
        const PlantState next =
            step_plant(s, drive_inputs(candidate, speed, steer), veh, candidate, dt);
        const double sum_rate =
            (next.wheel_angle_left_rad + next.wheel_angle_right_rad) / dt;
        CHECK(sum_rate == Approx(2.0 * speed / veh.wheel_radius_m).margin(1e-12));
    }
}

TEST_CASE("halving the substep moves a 60 s endpoint by less than 1e-6 m") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    VehicleParams veh;
    veh.accel_limit_m_s2 = 10.0;       // keep the lag responses smooth (no clamping)
    veh.steer_rate_limit_rad_s = 10.0;
    const ControlledInputs in = drive_inputs(candidate, 0.25, 0.1);

    auto endpoint = [&](double dt) {
        PlantState s = initial_state(candidate);
        const long steps = std::lround(60.0 / dt);
        for (long i = 0; i < steps; ++i) s = step_plant(s, in, veh, candidate, dt);
        return s;
    };
    const PlantState coarse = endpoint(1e-3);
    const PlantState fine = endpoint(5e-4);
    CHECK(std::hypot(coarse.pose.x - fine.pose.x, coarse.pose.y - fine.pose.y) < 1e-6);
}

TEST_CASE("encoder counts never decrease while speed stays non-negative") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const VehicleParams veh;
    const SensorParams sensors;
    PlantState s = initial_state(candidate);
    std::int64_t last_left = 0;
    std::int64_t last_right = 0;
    for (int i = 0; i < 2000; ++i) {
        // Accelerate, cruise, then brake to rest.
        const double setpoint = i < 800 ? 0.25 : (i < 1400 ? 0.1 : 0.0);
        s = step_plant(s, drive_inputs(candidate, setpoint, 0.2), veh, candidate, 5e-3);
        REQUIRE(s.speed_m_s >= 0.0);
        const std::int64_t left = encoder_ticks(s.wheel_angle_left_rad, sensors.encoder_ticks_per_rev);
        const std::int64_t right =
            encoder_ticks(s.wheel_angle_right_rad, sensors.encoder_ticks_per_rev);
        REQUIRE(left >= last_left);
        REQUIRE(right >= last_right);
        last_left = left;
        last_right = right;
    }
}

TEST_CASE("non-finite state is rejected") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const VehicleParams veh;
    PlantState s = initial_state(candidate);
    s.pose.x = std::numeric_limits<double>::quiet_NaN();
    CHECK_FALSE(s.finite());
    CHECK_THROWS_AS(step_plant(s, drive_inputs(candidate, 0.1, 0.0), veh, candidate, 1e-3),
                    Error);
}

// ---------------------------------------------------------------------------
// Forward kinematics

TEST_CASE("translatory nozzle at zero extension sits at the base offset") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const Vec2 nozzle = nozzle_position({0, 0, 0}, candidate, Side::right, {0.0});
    CHECK(nozzle.x == Approx(0.0).margin(1e-15));
    CHECK(nozzle.y == Approx(-0.30).margin(1e-15));
}

TEST_CASE("rotary nozzle at the zero pose extends along the arm axis") {
    ArmCandidate candidate = make_default_candidate(CandidateId::single_rotary);
    candidate.sides[0].base_offset = {0.0, 0.0};
    const Vec2 nozzle = nozzle_position({0, 0, 0}, candidate, Side::right, {0.0, 0.0});
    CHECK(nozzle.x == Approx(0.7).margin(1e-15));
    CHECK(nozzle.y == Approx(0.0).margin(1e-15));
}

TEST_CASE("rotary nozzle matches hand-computed joint configurations") {
    ArmCandidate candidate = make_default_candidate(CandidateId::single_rotary);
    candidate.sides[0].base_offset = {0.0, 0.0};
    // q1 = pi/2, q2 = -pi/2: shoulder points +y, elbow folds back to +x.
    const Vec2 bent = nozzle_position({0, 0, 0}, candidate, Side::right,
                                      {std::numbers::pi / 2.0, -std::numbers::pi / 2.0});
    CHECK(bent.x == Approx(0.3).margin(1e-12));
    CHECK(bent.y == Approx(0.4).margin(1e-12));
    // Fully folded: q2 = pi doubles the arm back over itself.
    const Vec2 folded = nozzle_position({0, 0, 0}, candidate, Side::right, {0.0, std::numbers::pi});
    CHECK(folded.x == Approx(0.1).margin(1e-12));
    CHECK(folded.y == Approx(0.0).margin(1e-12));
}

TEST_CASE("nozzle position commutes with rigid-body transforms of the pose") {
    Rng rng(11);
    for (CandidateId id : {CandidateId::single_rotary, CandidateId::double_translatory}) {
        const ArmCandidate candidate = make_default_candidate(id);
        for (int trial = 0; trial < 25; ++trial) {
            std::vector<double> joints;
            for (int j = 0; j < candidate.joint_count(); ++j) {
                joints.push_back(rng.next_unit());
            }
            const Pose pose{4.0 * (rng.next_unit() - 0.5), 4.0 * (rng.next_unit() - 0.5),
                            2.0 * std::numbers::pi * rng.next_unit()};
            for (const ArmSideConfig& sc : candidate.sides) {
                const Vec2 direct = nozzle_position(pose, candidate, sc.side, joints);
                const Vec2 body = nozzle_position({0, 0, 0}, candidate, sc.side, joints);
                const Vec2 transformed = pose.position() + rotated(body, pose.heading);
                CHECK(direct.x == Approx(transformed.x).margin(1e-12));
                CHECK(direct.y == Approx(transformed.y).margin(1e-12));
            }
        }
    }
}

TEST_CASE("quarter-turn pose rotates the nozzle about the vehicle origin") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    const std::vector<double> joints{0.5};
    const Vec2 flat = nozzle_position({0, 0, 0}, candidate, Side::right, joints);
    const Vec2 turned = nozzle_position({0, 0, std::numbers::pi / 2.0}, candidate, Side::right, joints);
    CHECK(turned.x == Approx(-flat.y).margin(1e-12));
    CHECK(turned.y == Approx(flat.x).margin(1e-12));
}

TEST_CASE("asking for an absent side is an error") {
    const ArmCandidate candidate = make_default_candidate(CandidateId::single_translatory);
    CHECK_THROWS_AS(nozzle_position({0, 0, 0}, candidate, Side::left, {0.0}), Error);
}

TEST_CASE("the half-cage shift moves only the left base and applies once") {
    const ArmCandidate raw = make_default_candidate(CandidateId::double_translatory);
    const ArmCandidate once = resolved_candidate(raw, 0.5);
    const ArmCandidate twice = resolved_candidate(once, 0.5);
    CHECK(once.shift_applied);
    CHECK(once == twice);
    CHECK(once.side_config(Side::left).base_offset.x ==
          Approx(raw.side_config(Side::left).base_offset.x - 0.25).margin(1e-15));
    CHECK(once.side_config(Side::right).base_offset ==
          raw.side_config(Side::right).base_offset);

    const ArmCandidate single =
        resolved_candidate(make_default_candidate(CandidateId::single_translatory), 0.5);
    CHECK(single.sides == make_default_candidate(CandidateId::single_translatory).sides);
}

// ---------------------------------------------------------------------------
// Dispensing

namespace {

struct DispenseHarness {
    ScenarioDoc doc = testing::ready_default_doc();
    ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    VehicleParams veh = lagless_vehicle();
    PlantState state;
    std::vector<DispenseEvent> events;
    double t = 0.0;

    DispenseHarness() {
        state = initial_state(candidate);
        state.arm_joints = {0.5};  // nozzle on the feeding line
    }

    void run(double duration, double speed, bool pump_on, double dt = 1e-3) {
        ControlledInputs in = drive_inputs(candidate, speed, 0.0);
        in.joint_setpoints = {0.5};
        in.pump[side_index(Side::right)] = pump_on;
        const long steps = std::lround(duration / dt);
        for (long i = 0; i < steps; ++i) {
            PlantState before = state;
            state = step_plant(state, in, veh, candidate, dt);
            auto emitted = dispense_update(before, state, in, candidate, doc.scenario,
                                           doc.controller.pump_rate_kg_s, dt, t);
            events.insert(events.end(), emitted.begin(), emitted.end());
            t += dt;
        }
    }
};

}  // namespace

TEST_CASE("stationary pulse lands the full mass at the nozzle point") {
    DispenseHarness h;
    const Vec2 nozzle = nozzle_position(h.state.pose, h.candidate, Side::right, {0.5});
    h.run(0.5, 0.0, true);
    h.run(0.05, 0.0, false);
    REQUIRE(h.events.size() == 1);
    CHECK(h.events[0].amount_kg == Approx(0.5 * 0.2).margin(1e-12));
    CHECK(h.events[0].position.x == Approx(nozzle.x).margin(1e-12));
    CHECK(h.events[0].position.y == Approx(nozzle.y).margin(1e-12));
    CHECK(h.events[0].side == Side::right);
}

TEST_CASE("pump never on emits nothing and leaves the hopper untouched") {
    DispenseHarness h;
    const double hopper0 = h.state.hopper_kg;
    h.run(1.0, 0.2, false);
    CHECK(h.events.empty());
    CHECK(h.state.hopper_kg == hopper0);
}

TEST_CASE("moving pulse centroid lands at the path midpoint of the nozzle track") {
    DispenseHarness h;
    h.run(2.0, 0.25, false);  // reach x = 0.5 before the pulse
    const Vec2 start_nozzle = nozzle_position(h.state.pose, h.candidate, Side::right, {0.5});
    h.run(0.4, 0.25, true);
    const Vec2 end_nozzle = nozzle_position(h.state.pose, h.candidate, Side::right, {0.5});
    h.run(0.05, 0.25, false);
    REQUIRE(h.events.size() == 1);

    const Vec2 midpoint = 0.5 * (start_nozzle + end_nozzle);
    CHECK(h.events[0].position.x == Approx(midpoint.x).margin(1e-9));
    CHECK(h.events[0].position.y == Approx(midpoint.y).margin(1e-9));

    // Independent oracle: fine-step mass-weighted average of the nozzle track.
    double mass = 0.0;
    Vec2 weighted{0, 0};
    const double dt = 1e-5;
    for (double tau = 0.0; tau < 0.4 - dt / 2; tau += dt) {
        const Vec2 p{start_nozzle.x + 0.25 * (tau + dt / 2), start_nozzle.y};
        const double dm = 0.2 * dt;
        weighted += dm * p;
        mass += dm;
    }
    const Vec2 oracle = (1.0 / mass) * weighted;
    CHECK(h.events[0].position.x == Approx(oracle.x).margin(1e-5));
    CHECK(h.events[0].position.y == Approx(oracle.y).margin(1e-5));
}

TEST_CASE("hopper exhaustion stops the flow but not the run") {
    DispenseHarness h;
    h.state.hopper_kg = 0.03;
    h.run(0.5, 0.0, true);  // demands 0.1 kg, only 0.03 available
    h.run(0.05, 0.0, false);
    REQUIRE(h.events.size() == 1);
    CHECK(h.events[0].amount_kg == Approx(0.03).margin(1e-12));
    CHECK(h.state.hopper_kg == Approx(0.0).margin(1e-15));
}

TEST_CASE("mass is conserved across pulses and residue") {
    DispenseHarness h;
    const double hopper0 = h.state.hopper_kg;
    for (int pulse = 0; pulse < 3; ++pulse) {
        h.run(0.5, 0.2, true);
        h.run(0.3, 0.2, false);
    }
    h.run(0.25, 0.2, true);  // leave a pulse in flight
    double dispensed = 0.0;
    for (const DispenseEvent& e : h.events) dispensed += e.amount_kg;
    const double residue = h.state.pulses[side_index(Side::right)].mass_kg;
    CHECK(h.events.size() == 3);
    CHECK(hopper0 - h.state.hopper_kg == Approx(dispensed + residue).margin(1e-9));
}

// ---------------------------------------------------------------------------
// Sensors

TEST_CASE("one full wheel revolution gives exactly ticks_per_rev counts") {
    CHECK(encoder_ticks(2.0 * std::numbers::pi, 2048) == 2048);
    CHECK(encoder_ticks(2.0 * std::numbers::pi - 1e-9, 2048) == 2047);
    CHECK(encoder_ticks(0.0, 2048) == 0);
}

TEST_CASE("vision reads zero on the guidance line and signed offsets off it") {
    const auto doc = testing::ready_default_doc();
    const ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    const SensorParams sensors;
    Rng rng(1);

    PlantState s = initial_state(candidate);
    s.pose = {1.0, 0.0, 0.0};
    SignalMap on_line = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, rng);
    CHECK(get_real(on_line, "vision_lateral_m") == Approx(0.0).margin(1e-15));
    CHECK(get_real(on_line, "vision_heading_rad") == Approx(0.0).margin(1e-15));

    s.pose = {1.0, 0.25, 0.1};
    SignalMap offset = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, rng);
    CHECK(get_real(offset, "vision_lateral_m") == Approx(0.25).margin(1e-12));
    CHECK(get_real(offset, "vision_heading_rad") == Approx(0.1).margin(1e-12));
}

TEST_CASE("rfid reports the nearest tag within range and nothing outside it") {
    const auto doc = testing::ready_default_doc();
    const SensorParams sensors;
    // Tag 100 sits at s=0 on the tag line (y = -0.55).
    CHECK(rfid_probe(doc.scenario, {0.0, -0.45}, 0.25).value() == 100);
    CHECK(rfid_probe(doc.scenario, {0.0, -0.55 + 0.10}, 0.25).value() == 100);
    CHECK_FALSE(rfid_probe(doc.scenario, {0.0, -0.55 + 0.30}, 0.25).has_value());
    // Between two tags, the closer one wins.
    CHECK(rfid_probe(doc.scenario, {0.6, -0.55}, 0.25).value() == 101);
}

TEST_CASE("kingpin angle is quantized and the imu reads the kinematic yaw rate") {
    const auto doc = testing::ready_default_doc();
    const ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    SensorParams sensors;
    Rng rng(1);
    PlantState s = initial_state(candidate);
    s.pose = {1.0, 0.0, 0.0};
    s.speed_m_s = 0.2;
    s.steer_angle_rad = 0.1001;

    const SignalMap values = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, rng);
    const double quantum = sensors.kingpin_quantization_rad;
    CHECK(get_real(values, "kingpin_angle_rad") ==
          Approx(std::round(0.1001 / quantum) * quantum).margin(1e-15));
    CHECK(get_real(values, "imu_yaw_rate_rad_s") ==
          Approx(0.2 * std::tan(0.1001) / 1.0).margin(1e-15));
}

TEST_CASE("a tag passed between sync points is latched for the next boundary") {
    // Shrink the reader range so the detection window (40 mm of travel) fits
    // strictly inside one long communication interval (75 mm of travel).
    ScenarioDoc doc = default_doc();
    doc.scenario.rows[0].rfid_tags = {{777, 1.0}};  // tag at (1.0, -0.55)
    doc.sensors.rfid_range_m = 0.201;               // in range for |x - 0.7| <= ~0.02
    doc.vehicle.speed_time_constant_s = 0.0;
    throw_if_invalid(finalize_scenario(doc.scenario));
    const ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);

    RobotPlant plant(doc.scenario, candidate, doc.vehicle, doc.sensors,
                     doc.controller.pump_rate_kg_s, 42, {0.65, 0.0, 0.0});
    SignalMap controls;
    controls["speed_set_m_s"] = 0.25;
    controls["steer_set_rad"] = 0.0;
    controls["pump_right"] = false;
    controls[arm_signal_name(Side::right, 0) + "_set"] = 0.0;
    plant.apply_controlled(controls, 0.0);

    plant.advance(0.0, 0.3, 0.001);  // x: 0.65 -> 0.725, window crossed inside
    // The boundary state itself is already out of range...
    Rng probe_rng(1);
    const SignalMap boundary = sample_sensors(plant.state(), doc.scenario, doc.sensors,
                                              candidate, doc.vehicle.wheelbase_m, probe_rng);
    CHECK_FALSE(get_tag(boundary, "rfid_tag").id.has_value());
    // ...but the latched mid-interval detection is still delivered.
    const SignalMap delivered = plant.sample_monitored(0.3);
    REQUIRE(get_tag(delivered, "rfid_tag").id.has_value());
    CHECK(get_tag(delivered, "rfid_tag").id.value() == 777);

    // The latch is consumed; the next interval reports nothing.
    plant.advance(0.3, 0.3, 0.001);
    CHECK_FALSE(get_tag(plant.sample_monitored(0.6), "rfid_tag").id.has_value());
}

TEST_CASE("seeded sensor noise is reproducible") {
    const auto doc = testing::ready_default_doc();
    const ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    SensorParams sensors;
    sensors.vision_noise_std_m = 0.01;
    sensors.imu_noise_std_rad_s = 0.001;
    PlantState s = initial_state(candidate);
    s.pose = {1.0, 0.0, 0.0};

    Rng a(42);
    Rng b(42);
    Rng c(43);
    const SignalMap first = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, a);
    const SignalMap second = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, b);
    const SignalMap other = sample_sensors(s, doc.scenario, sensors, candidate, 1.0, c);
    CHECK(first == second);
    CHECK(get_real(first, "vision_lateral_m") != get_real(other, "vision_lateral_m"));
}

// ---------------------------------------------------------------------------
// Scenario validation

TEST_CASE("duplicate tag ids across rows are rejected") {
    ScenarioDoc doc = default_doc();
    CageRow second = doc.scenario.rows[0];
    second.axis_origin = {7.0, 0.0};
    doc.scenario.rows.push_back(second);  // same auto ids would differ; force a clash
    doc.scenario.rows[0].rfid_tags = {{500, 0.0}};
    doc.scenario.rows[1].rfid_tags = {{500, 0.0}};
    const ValidationResult result = finalize_scenario(doc.scenario);
    CHECK(result.has(Issue::duplicate_tag, "500"));
}

TEST_CASE("a corridor narrower than the body is rejected") {
    ScenarioDoc doc = default_doc();
    doc.scenario.corridor_half_width_m = 0.39;  // body is 0.8 wide
    throw_if_invalid(finalize_scenario(doc.scenario));
    const ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    const ValidationResult result =
        validate_candidate_fit(doc.scenario, doc.vehicle, candidate);
    CHECK(result.has(Issue::corridor_too_narrow, "corridor_half_width_m"));
}

TEST_CASE("an arm that cannot reach the feeding line is rejected") {
    ScenarioDoc doc = default_doc();
    throw_if_invalid(finalize_scenario(doc.scenario));
    ArmCandidate candidate = testing::ready_candidate(doc, CandidateId::single_translatory);
    candidate.travel_limits_m = {0.0, 0.3};  // needs 0.5 m of extension
    const ValidationResult result =
        validate_candidate_fit(doc.scenario, doc.vehicle, candidate);
    CHECK(result.has(Issue::arm_cannot_reach));
}

TEST_CASE("misdeclared candidates are rejected") {
    ArmCandidate candidate = make_default_candidate(CandidateId::single_rotary);
    candidate.sides.push_back({Side::left, {0.0, 0.30}});  // two sides on a Single id
    CHECK(validate_candidate(candidate).has(Issue::invalid_candidate));
}

TEST_CASE("scenario without rows is rejected") {
    WorldScenario scn;
    scn.rows.clear();
    CHECK(finalize_scenario(scn).has(Issue::no_rows));
}
