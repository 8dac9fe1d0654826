#pragma once

#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include <json.hpp>

#include "feedsim/setup.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

using json = nlohmann::ordered_json;

namespace io_detail {

inline void require_keys(const json& obj, const std::string& context,
                         std::initializer_list<const char*> allowed) {
    if (!obj.is_object()) throw ParseError(context + " must be a JSON object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (const char* key : allowed) {
            if (item.key() == key) {
                known = true;
                break;
            }
        }
        if (!known) throw ParseError("unknown key '" + item.key() + "' in " + context);
    }
}

inline double as_number(const json& v, const std::string& context) {
    if (!v.is_number()) throw ParseError(context + " must be a number");
    return v.get<double>();
}

inline double number_field(const json& obj, const char* key, const std::string& context,
                           double fallback) {
    if (!obj.contains(key)) return fallback;
    return as_number(obj.at(key), context + "." + key);
}

inline double required_number(const json& obj, const char* key, const std::string& context) {
    if (!obj.contains(key)) throw ParseError(context + " is missing required key '" + key + "'");
    return as_number(obj.at(key), context + "." + key);
}

inline bool bool_field(const json& obj, const char* key, const std::string& context,
                       bool fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj.at(key).is_boolean()) throw ParseError(context + "." + key + " must be a boolean");
    return obj.at(key).get<bool>();
}

inline Vec2 as_vec2(const json& v, const std::string& context) {
    if (!v.is_array() || v.size() != 2) {
        throw ParseError(context + " must be an array of two numbers");
    }
    return {as_number(v[0], context + "[0]"), as_number(v[1], context + "[1]")};
}

inline RowSide row_side_from_name(const std::string& name, const std::string& context) {
    if (name == "Left") return RowSide::left;
    if (name == "Right") return RowSide::right;
    if (name == "Both") return RowSide::both;
    throw ParseError(context + ": unknown side '" + name + "'");
}

inline Side side_from_name(const std::string& name, const std::string& context) {
    if (name == "Left") return Side::left;
    if (name == "Right") return Side::right;
    throw ParseError(context + ": unknown side '" + name + "'");
}

}  // namespace io_detail

inline CageRow parse_row(const json& obj, const std::string& context) {
    using namespace io_detail;
    require_keys(obj, context,
                 {"axis_origin", "axis_direction", "cage_length_m", "cage_count", "side",
                  "feed_lateral_offset_m", "cage_front_offset_m", "tag_lateral_offset_m",
                  "placement_halfwidth_m", "rfid_tags"});
    CageRow row;
    if (!obj.contains("axis_origin") || !obj.contains("axis_direction")) {
        throw ParseError(context + " requires explicit axis_origin and axis_direction");
    }
    row.axis_origin = as_vec2(obj.at("axis_origin"), context + ".axis_origin");
    row.axis_direction = as_vec2(obj.at("axis_direction"), context + ".axis_direction");
    row.cage_length_m = required_number(obj, "cage_length_m", context);
    row.cage_count = static_cast<int>(required_number(obj, "cage_count", context));
    if (!obj.contains("side")) throw ParseError(context + " is missing required key 'side'");
    row.side = row_side_from_name(obj.at("side").get<std::string>(), context + ".side");
    row.feed_lateral_offset_m = required_number(obj, "feed_lateral_offset_m", context);
    row.cage_front_offset_m =
        number_field(obj, "cage_front_offset_m", context, row.feed_lateral_offset_m - 0.15);
    row.tag_lateral_offset_m =
        number_field(obj, "tag_lateral_offset_m", context, row.feed_lateral_offset_m - 0.25);
    row.placement_halfwidth_m = number_field(obj, "placement_halfwidth_m", context, 0.10);
    if (obj.contains("rfid_tags")) {
        if (!obj.at("rfid_tags").is_array()) throw ParseError(context + ".rfid_tags");
        for (std::size_t i = 0; i < obj.at("rfid_tags").size(); ++i) {
            const json& tag = obj.at("rfid_tags")[i];
            const std::string tag_context = context + ".rfid_tags[" + std::to_string(i) + "]";
            require_keys(tag, tag_context, {"id", "s_m"});
            row.rfid_tags.push_back(
                {static_cast<std::int64_t>(required_number(tag, "id", tag_context)),
                 required_number(tag, "s_m", tag_context)});
        }
    }
    return row;
}

inline WorldScenario parse_scenario_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "scenario";
    require_keys(obj, context, {"rows", "start_pose", "start_area", "corridor_half_width_m"});
    WorldScenario scn;
    if (!obj.contains("rows") || !obj.at("rows").is_array()) {
        throw ParseError("scenario.rows must be an array");
    }
    scn.rows.clear();
    for (std::size_t i = 0; i < obj.at("rows").size(); ++i) {
        scn.rows.push_back(parse_row(obj.at("rows")[i], "scenario.rows[" + std::to_string(i) + "]"));
    }
    if (!obj.contains("start_pose")) throw ParseError("scenario.start_pose is required");
    const json& pose = obj.at("start_pose");
    require_keys(pose, "scenario.start_pose", {"x_m", "y_m", "heading_rad"});
    scn.start_pose_nominal = {required_number(pose, "x_m", "scenario.start_pose"),
                              required_number(pose, "y_m", "scenario.start_pose"),
                              required_number(pose, "heading_rad", "scenario.start_pose")};
    if (obj.contains("start_area")) {
        const json& area = obj.at("start_area");
        require_keys(area, "scenario.start_area", {"lateral_m", "longitudinal_m", "heading_rad"});
        scn.start_area.lateral_m =
            number_field(area, "lateral_m", "scenario.start_area", scn.start_area.lateral_m);
        scn.start_area.longitudinal_m = number_field(area, "longitudinal_m", "scenario.start_area",
                                                     scn.start_area.longitudinal_m);
        scn.start_area.heading_rad =
            number_field(area, "heading_rad", "scenario.start_area", scn.start_area.heading_rad);
    }
    scn.corridor_half_width_m = required_number(obj, "corridor_half_width_m", context);
    return scn;
}

inline VehicleParams parse_vehicle_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "vehicle";
    require_keys(obj, context,
                 {"wheelbase_m", "track_width_m", "wheel_radius_m", "body_length_m",
                  "body_width_m", "max_steer_rad", "steer_rate_limit_rad_s", "accel_limit_m_s2",
                  "speed_time_constant_s", "steer_time_constant_s", "hopper_capacity_kg"});
    VehicleParams p;
    p.wheelbase_m = number_field(obj, "wheelbase_m", context, p.wheelbase_m);
    p.track_width_m = number_field(obj, "track_width_m", context, p.track_width_m);
    p.wheel_radius_m = number_field(obj, "wheel_radius_m", context, p.wheel_radius_m);
    p.body_length_m = number_field(obj, "body_length_m", context, p.body_length_m);
    p.body_width_m = number_field(obj, "body_width_m", context, p.body_width_m);
    p.max_steer_rad = number_field(obj, "max_steer_rad", context, p.max_steer_rad);
    p.steer_rate_limit_rad_s =
        number_field(obj, "steer_rate_limit_rad_s", context, p.steer_rate_limit_rad_s);
    p.accel_limit_m_s2 = number_field(obj, "accel_limit_m_s2", context, p.accel_limit_m_s2);
    p.speed_time_constant_s =
        number_field(obj, "speed_time_constant_s", context, p.speed_time_constant_s);
    p.steer_time_constant_s =
        number_field(obj, "steer_time_constant_s", context, p.steer_time_constant_s);
    p.hopper_capacity_kg = number_field(obj, "hopper_capacity_kg", context, p.hopper_capacity_kg);
    return p;
}

inline SensorParams parse_sensors_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "sensors";
    require_keys(obj, context,
                 {"encoder_ticks_per_rev", "rfid_range_m", "vision_noise_std_m",
                  "imu_noise_std_rad_s", "kingpin_quantization_rad", "vision_enabled",
                  "rfid_reader_offset"});
    SensorParams p;
    p.encoder_ticks_per_rev = static_cast<int>(
        number_field(obj, "encoder_ticks_per_rev", context, p.encoder_ticks_per_rev));
    p.rfid_range_m = number_field(obj, "rfid_range_m", context, p.rfid_range_m);
    p.vision_noise_std_m = number_field(obj, "vision_noise_std_m", context, p.vision_noise_std_m);
    p.imu_noise_std_rad_s =
        number_field(obj, "imu_noise_std_rad_s", context, p.imu_noise_std_rad_s);
    p.kingpin_quantization_rad =
        number_field(obj, "kingpin_quantization_rad", context, p.kingpin_quantization_rad);
    p.vision_enabled = bool_field(obj, "vision_enabled", context, p.vision_enabled);
    if (obj.contains("rfid_reader_offset")) {
        p.rfid_reader_offset = as_vec2(obj.at("rfid_reader_offset"), context + ".rfid_reader_offset");
    }
    return p;
}

inline ControllerParams parse_controller_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "controller";
    require_keys(obj, context,
                 {"cruise_speed_m_s", "steer_gain_lateral", "steer_gain_heading",
                  "pulse_duration_s", "pump_rate_kg_s", "trigger_lead_m", "deploy_zone_m",
                  "steering_enabled"});
    ControllerParams p;
    p.cruise_speed_m_s = number_field(obj, "cruise_speed_m_s", context, p.cruise_speed_m_s);
    p.steer_gain_lateral = number_field(obj, "steer_gain_lateral", context, p.steer_gain_lateral);
    p.steer_gain_heading = number_field(obj, "steer_gain_heading", context, p.steer_gain_heading);
    p.pulse_duration_s = number_field(obj, "pulse_duration_s", context, p.pulse_duration_s);
    p.pump_rate_kg_s = number_field(obj, "pump_rate_kg_s", context, p.pump_rate_kg_s);
    p.trigger_lead_m = number_field(obj, "trigger_lead_m", context, p.trigger_lead_m);
    p.deploy_zone_m = number_field(obj, "deploy_zone_m", context, p.deploy_zone_m);
    p.steering_enabled = bool_field(obj, "steering_enabled", context, p.steering_enabled);
    return p;
}

inline ArmCandidate parse_candidate(const json& obj, const std::string& context) {
    using namespace io_detail;
    require_keys(obj, context,
                 {"id", "sides", "link_lengths_m", "travel_limits_m", "half_cage_shift",
                  "joint_time_constant_s", "joint_rate_limit"});
    if (!obj.contains("id")) throw ParseError(context + " is missing required key 'id'");
    ArmCandidate c = make_default_candidate(candidate_id_from_name(obj.at("id").get<std::string>()));
    if (obj.contains("sides")) {
        if (!obj.at("sides").is_array()) throw ParseError(context + ".sides must be an array");
        c.sides.clear();
        for (std::size_t i = 0; i < obj.at("sides").size(); ++i) {
            const json& side = obj.at("sides")[i];
            const std::string side_context = context + ".sides[" + std::to_string(i) + "]";
            require_keys(side, side_context, {"side", "base_offset"});
            ArmSideConfig sc;
            if (!side.contains("side")) throw ParseError(side_context + " requires 'side'");
            sc.side = side_from_name(side.at("side").get<std::string>(), side_context);
            if (side.contains("base_offset")) {
                sc.base_offset = as_vec2(side.at("base_offset"), side_context + ".base_offset");
            }
            c.sides.push_back(sc);
        }
    }
    if (obj.contains("link_lengths_m")) {
        const Vec2 v = as_vec2(obj.at("link_lengths_m"), context + ".link_lengths_m");
        c.link_lengths_m = {v.x, v.y};
    }
    if (obj.contains("travel_limits_m")) {
        const Vec2 v = as_vec2(obj.at("travel_limits_m"), context + ".travel_limits_m");
        c.travel_limits_m = {v.x, v.y};
    }
    c.half_cage_shift = bool_field(obj, "half_cage_shift", context, c.half_cage_shift);
    c.joint_time_constant_s =
        number_field(obj, "joint_time_constant_s", context, c.joint_time_constant_s);
    c.joint_rate_limit = number_field(obj, "joint_rate_limit", context, c.joint_rate_limit);
    return c;
}

inline CoSimConfig parse_cosim_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "cosim";
    require_keys(obj, context, {"comm_interval_s", "ct_substep_s", "t_max_s", "seed"});
    CoSimConfig c;
    c.comm_interval_s = number_field(obj, "comm_interval_s", context, c.comm_interval_s);
    c.ct_substep_s = number_field(obj, "ct_substep_s", context, c.ct_substep_s);
    c.t_max_s = number_field(obj, "t_max_s", context, c.t_max_s);
    c.seed = static_cast<std::uint64_t>(
        number_field(obj, "seed", context, static_cast<double>(c.seed)));
    return c;
}

inline SweepSpec parse_sweep_section(const json& obj) {
    using namespace io_detail;
    const std::string context = "sweep";
    require_keys(obj, context,
                 {"candidates", "lateral_offsets_m", "heading_offsets_rad", "seeds"});
    SweepSpec spec;
    if (obj.contains("candidates")) {
        spec.candidates.clear();
        for (const json& id : obj.at("candidates")) {
            spec.candidates.push_back(candidate_id_from_name(id.get<std::string>()));
        }
    }
    auto numbers = [&](const char* key, std::vector<double>& target) {
        if (!obj.contains(key)) return;
        target.clear();
        for (const json& v : obj.at(key)) {
            target.push_back(as_number(v, context + "." + key));
        }
    };
    numbers("lateral_offsets_m", spec.lateral_offsets_m);
    numbers("heading_offsets_rad", spec.heading_offsets_rad);
    if (obj.contains("seeds")) {
        spec.seeds.clear();
        for (const json& v : obj.at("seeds")) {
            spec.seeds.push_back(
                static_cast<std::uint64_t>(as_number(v, context + ".seeds")));
        }
    }
    return spec;
}

/// Parses a full scenario document. Unknown keys are rejected everywhere;
/// geometry must be explicit while tuning parameters fall back to defaults.
/// The scenario comes back finalized and geometry-validated.
inline ScenarioDoc parse_scenario_doc(const json& root) {
    io_detail::require_keys(
        root, "document",
        {"scenario", "vehicle", "sensors", "controller", "candidates", "cosim", "sweep"});
    if (!root.contains("scenario")) throw ParseError("document is missing the 'scenario' section");

    ScenarioDoc doc;
    doc.scenario = parse_scenario_section(root.at("scenario"));
    if (root.contains("vehicle")) doc.vehicle = parse_vehicle_section(root.at("vehicle"));
    if (root.contains("sensors")) doc.sensors = parse_sensors_section(root.at("sensors"));
    if (root.contains("controller")) {
        doc.controller = parse_controller_section(root.at("controller"));
    }
    if (root.contains("candidates")) {
        if (!root.at("candidates").is_array()) throw ParseError("'candidates' must be an array");
        doc.catalog.clear();
        for (std::size_t i = 0; i < root.at("candidates").size(); ++i) {
            doc.catalog.push_back(
                parse_candidate(root.at("candidates")[i], "candidates[" + std::to_string(i) + "]"));
        }
    } else {
        doc.catalog = default_catalog();
    }
    if (root.contains("cosim")) doc.cosim = parse_cosim_section(root.at("cosim"));
    if (root.contains("sweep")) doc.sweep = parse_sweep_section(root.at("sweep"));

    throw_if_invalid(finalize_scenario(doc.scenario));
    throw_if_invalid(validate_vehicle(doc.vehicle));
    throw_if_invalid(validate_sensors(doc.sensors));
    throw_if_invalid(validate_controller_params(doc.controller));
    throw_if_invalid(validate_config(doc.cosim));
    return doc;
}

inline ScenarioDoc load_scenario_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open scenario file: " + path);
    json root;
    try {
        in >> root;
    } catch (const json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    return parse_scenario_doc(root);
}

/// Serializes a document with every default made explicit; parsing the output
/// yields a semantically identical document.
inline json serialize_scenario_doc(const ScenarioDoc& doc) {
    json root;

    json rows = json::array();
    for (const CageRow& row : doc.scenario.rows) {
        json tags = json::array();
        for (const RfidTag& tag : row.rfid_tags) {
            tags.push_back({{"id", tag.id}, {"s_m", tag.s_m}});
        }
        rows.push_back({{"axis_origin", {row.axis_origin.x, row.axis_origin.y}},
                        {"axis_direction", {row.axis_direction.x, row.axis_direction.y}},
                        {"cage_length_m", row.cage_length_m},
                        {"cage_count", row.cage_count},
                        {"side", row_side_name(row.side)},
                        {"feed_lateral_offset_m", row.feed_lateral_offset_m},
                        {"cage_front_offset_m", row.cage_front_offset_m},
                        {"tag_lateral_offset_m", row.tag_lateral_offset_m},
                        {"placement_halfwidth_m", row.placement_halfwidth_m},
                        {"rfid_tags", tags}});
    }
    root["scenario"] = {
        {"rows", rows},
        {"start_pose",
         {{"x_m", doc.scenario.start_pose_nominal.x},
          {"y_m", doc.scenario.start_pose_nominal.y},
          {"heading_rad", doc.scenario.start_pose_nominal.heading}}},
        {"start_area",
         {{"lateral_m", doc.scenario.start_area.lateral_m},
          {"longitudinal_m", doc.scenario.start_area.longitudinal_m},
          {"heading_rad", doc.scenario.start_area.heading_rad}}},
        {"corridor_half_width_m", doc.scenario.corridor_half_width_m},
    };

    root["vehicle"] = {{"wheelbase_m", doc.vehicle.wheelbase_m},
                       {"track_width_m", doc.vehicle.track_width_m},
                       {"wheel_radius_m", doc.vehicle.wheel_radius_m},
                       {"body_length_m", doc.vehicle.body_length_m},
                       {"body_width_m", doc.vehicle.body_width_m},
                       {"max_steer_rad", doc.vehicle.max_steer_rad},
                       {"steer_rate_limit_rad_s", doc.vehicle.steer_rate_limit_rad_s},
                       {"accel_limit_m_s2", doc.vehicle.accel_limit_m_s2},
                       {"speed_time_constant_s", doc.vehicle.speed_time_constant_s},
                       {"steer_time_constant_s", doc.vehicle.steer_time_constant_s},
                       {"hopper_capacity_kg", doc.vehicle.hopper_capacity_kg}};

    root["sensors"] = {
        {"encoder_ticks_per_rev", doc.sensors.encoder_ticks_per_rev},
        {"rfid_range_m", doc.sensors.rfid_range_m},
        {"vision_noise_std_m", doc.sensors.vision_noise_std_m},
        {"imu_noise_std_rad_s", doc.sensors.imu_noise_std_rad_s},
        {"kingpin_quantization_rad", doc.sensors.kingpin_quantization_rad},
        {"vision_enabled", doc.sensors.vision_enabled},
        {"rfid_reader_offset",
         {doc.sensors.rfid_reader_offset.x, doc.sensors.rfid_reader_offset.y}}};

    root["controller"] = {{"cruise_speed_m_s", doc.controller.cruise_speed_m_s},
                          {"steer_gain_lateral", doc.controller.steer_gain_lateral},
                          {"steer_gain_heading", doc.controller.steer_gain_heading},
                          {"pulse_duration_s", doc.controller.pulse_duration_s},
                          {"pump_rate_kg_s", doc.controller.pump_rate_kg_s},
                          {"trigger_lead_m", doc.controller.trigger_lead_m},
                          {"deploy_zone_m", doc.controller.deploy_zone_m},
                          {"steering_enabled", doc.controller.steering_enabled}};

    json candidates = json::array();
    for (const ArmCandidate& c : doc.catalog) {
        json sides = json::array();
        for (const ArmSideConfig& sc : c.sides) {
            sides.push_back({{"side", side_name(sc.side)},
                             {"base_offset", {sc.base_offset.x, sc.base_offset.y}}});
        }
        candidates.push_back({{"id", candidate_name(c.id)},
                              {"sides", sides},
                              {"link_lengths_m", {c.link_lengths_m[0], c.link_lengths_m[1]}},
                              {"travel_limits_m", {c.travel_limits_m[0], c.travel_limits_m[1]}},
                              {"half_cage_shift", c.half_cage_shift},
                              {"joint_time_constant_s", c.joint_time_constant_s},
                              {"joint_rate_limit", c.joint_rate_limit}});
    }
    root["candidates"] = candidates;

    root["cosim"] = {{"comm_interval_s", doc.cosim.comm_interval_s},
                     {"ct_substep_s", doc.cosim.ct_substep_s},
                     {"t_max_s", doc.cosim.t_max_s},
                     {"seed", doc.cosim.seed}};

    json sweep_candidates = json::array();
    for (CandidateId id : doc.sweep.candidates) sweep_candidates.push_back(candidate_name(id));
    root["sweep"] = {{"candidates", sweep_candidates},
                     {"lateral_offsets_m", doc.sweep.lateral_offsets_m},
                     {"heading_offsets_rad", doc.sweep.heading_offsets_rad},
                     {"seeds", doc.sweep.seeds}};
    return root;
}

inline void save_scenario_file(const ScenarioDoc& doc, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write scenario file: " + path);
    out << serialize_scenario_doc(doc).dump(2) << "\n";
}

}  // namespace feedsim
