#pragma once

#include <algorithm>
#include <charconv>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "feedsim/cosim.hpp"
#include "feedsim/dse.hpp"
#include "feedsim/evaluator.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

/// Locale-independent shortest round-trip decimal formatting; keeps every
/// emitted file bit-stable across runs and platforms.
inline std::string fmt_double(double v) {
    char buffer[32];
    const std::to_chars_result res = std::to_chars(buffer, buffer + sizeof(buffer), v);
    return std::string(buffer, res.ptr);
}

inline nlohmann::ordered_json report_to_json(const DemandReport& report) {
    nlohmann::ordered_json checks = nlohmann::ordered_json::array();
    for (const DispenseCheck& c : report.dispense_checks) {
        checks.push_back({{"t_s", c.t},
                          {"x_m", c.position.x},
                          {"y_m", c.position.y},
                          {"row", c.row},
                          {"side", side_name(c.side)},
                          {"target_index", c.target_index},
                          {"along_error_m", c.along_error_m},
                          {"inside_area", c.inside_area}});
    }
    return {{"max_speed_m_s", report.max_speed_m_s},
            {"speed_ok", report.speed_ok},
            {"dispense_checks", checks},
            {"missed_targets", report.missed_targets},
            {"worst_abs_error_m", report.worst_abs_error_m},
            {"precision_ok", report.precision_ok},
            {"min_clearance_m", report.min_clearance_m},
            {"collision_ok", report.collision_ok},
            {"overall_pass", report.overall_pass}};
}

inline nlohmann::ordered_json overview_to_json(const CandidateOverview& overview) {
    nlohmann::ordered_json candidates = nlohmann::ordered_json::array();
    for (const CandidateSummary& s : overview.candidates) {
        candidates.push_back({{"id", candidate_name(s.id)},
                              {"runs", s.runs},
                              {"pass_rate", s.pass_rate},
                              {"worst_abs_error_m", s.worst_abs_error_m},
                              {"max_speed_m_s", s.max_speed_m_s},
                              {"min_clearance_m", s.min_clearance_m},
                              {"dispenses_per_pass", s.dispenses_per_pass},
                              {"pass", s.demands_pass}});
    }
    return {{"candidates", candidates}};
}

inline CandidateOverview overview_from_json(const nlohmann::ordered_json& root) {
    CandidateOverview overview;
    if (!root.contains("candidates") || !root.at("candidates").is_array()) {
        throw ParseError("overview.json: missing 'candidates' array");
    }
    for (const auto& c : root.at("candidates")) {
        CandidateSummary s;
        s.id = candidate_id_from_name(c.at("id").get<std::string>());
        s.runs = c.at("runs").get<int>();
        s.pass_rate = c.at("pass_rate").get<double>();
        s.worst_abs_error_m = c.at("worst_abs_error_m").get<double>();
        s.max_speed_m_s = c.at("max_speed_m_s").get<double>();
        s.min_clearance_m = c.at("min_clearance_m").get<double>();
        s.dispenses_per_pass = c.at("dispenses_per_pass").get<int>();
        s.demands_pass = c.at("pass").get<bool>();
        overview.candidates.push_back(s);
    }
    return overview;
}

inline std::string events_csv(const std::vector<DispenseEvent>& events) {
    std::string out = "t_s,x_m,y_m,side,amount_kg,row,candidate\n";
    for (const DispenseEvent& e : events) {
        out += fmt_double(e.t) + "," + fmt_double(e.position.x) + "," + fmt_double(e.position.y) +
               "," + side_name(e.side) + "," + fmt_double(e.amount_kg) + "," +
               std::to_string(e.row_index) + "," + candidate_name(e.candidate) + "\n";
    }
    return out;
}

inline std::string trace_csv(const std::vector<PoseSample>& trace) {
    std::string out = "t_s,x_m,y_m,heading_rad,speed_m_s\n";
    for (const PoseSample& p : trace) {
        out += fmt_double(p.t) + "," + fmt_double(p.x_m) + "," + fmt_double(p.y_m) + "," +
               fmt_double(p.heading_rad) + "," + fmt_double(p.speed_m_s) + "\n";
    }
    return out;
}

inline std::string overview_csv(const CandidateOverview& overview) {
    std::string out =
        "id,pass_rate,worst_abs_error_m,max_speed_m_s,min_clearance_m,dispenses_per_pass,pass\n";
    for (const CandidateSummary& s : overview.candidates) {
        out += std::string(candidate_name(s.id)) + "," + fmt_double(s.pass_rate) + "," +
               fmt_double(s.worst_abs_error_m) + "," + fmt_double(s.max_speed_m_s) + "," +
               fmt_double(s.min_clearance_m) + "," + std::to_string(s.dispenses_per_pass) + "," +
               (s.demands_pass ? "true" : "false") + "\n";
    }
    return out;
}

namespace svg_detail {

struct Mapper {
    double min_x, max_y, scale;
    double sx(double x) const { return (x - min_x) * scale; }
    double sy(double y) const { return (max_y - y) * scale; }
};

inline std::string line(const Mapper& m, Vec2 a, Vec2 b, const char* style) {
    return "  <line x1=\"" + fmt_double(m.sx(a.x)) + "\" y1=\"" + fmt_double(m.sy(a.y)) +
           "\" x2=\"" + fmt_double(m.sx(b.x)) + "\" y2=\"" + fmt_double(m.sy(b.y)) + "\" " +
           style + "/>\n";
}

inline std::string circle(const Mapper& m, Vec2 c, double r_world, const char* style) {
    return "  <circle cx=\"" + fmt_double(m.sx(c.x)) + "\" cy=\"" + fmt_double(m.sy(c.y)) +
           "\" r=\"" + fmt_double(r_world * m.scale) + "\" " + style + "/>\n";
}

}  // namespace svg_detail

/// Self-contained plot: row geometry, placement targets with their tolerance
/// radius, the trajectory polyline, and dispense markers.
inline std::string trajectory_svg(const RunLog& log, const WorldScenario& scenario) {
    using namespace svg_detail;
    double min_x = scenario.start_pose_nominal.x;
    double max_x = min_x;
    double min_y = -scenario.corridor_half_width_m;
    double max_y = scenario.corridor_half_width_m;
    auto grow = [&](Vec2 p) {
        min_x = std::min(min_x, p.x);
        max_x = std::max(max_x, p.x);
        min_y = std::min(min_y, p.y);
        max_y = std::max(max_y, p.y);
    };
    for (const Segment& s : scenario.obstacles) {
        grow(s.a);
        grow(s.b);
    }
    for (const PlacementTarget& t : scenario.targets) grow(t.position);
    for (const PoseSample& p : log.pose_trace) grow({p.x_m, p.y_m});
    const double pad = 0.4;
    min_x -= pad;
    max_x += pad;
    min_y -= pad;
    max_y += pad;

    const double scale = 120.0;
    const Mapper m{min_x, max_y, scale};
    const double width = (max_x - min_x) * scale;
    const double height = (max_y - min_y) * scale;

    std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt_double(width) +
                      "\" height=\"" + fmt_double(height) + "\" viewBox=\"0 0 " +
                      fmt_double(width) + " " + fmt_double(height) + "\">\n";
    svg += "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    for (const Segment& s : scenario.obstacles) {
        svg += line(m, s.a, s.b, "stroke=\"#555555\" stroke-width=\"2\"");
    }
    for (const CageRow& row : scenario.rows) {
        for (Side s : fed_sides(row.side)) {
            const Vec2 normal = perp_left(row.axis_direction);
            const Vec2 a = row.axis_origin + row.feed_line_lateral(s) * normal;
            const Vec2 b = a + row.length_m() * row.axis_direction;
            svg += line(m, a, b,
                        "stroke=\"#88aa88\" stroke-width=\"1\" stroke-dasharray=\"6,4\"");
        }
    }
    for (const PlacementTarget& t : scenario.targets) {
        svg += circle(m, t.position, placement_tolerance_m,
                      "fill=\"none\" stroke=\"#2e8b57\" stroke-width=\"1\"");
    }

    if (!log.pose_trace.empty()) {
        std::string points;
        for (const PoseSample& p : log.pose_trace) {
            points += fmt_double(m.sx(p.x_m)) + "," + fmt_double(m.sy(p.y_m)) + " ";
        }
        svg += "  <polyline points=\"" + points +
               "\" fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\"/>\n";
    }
    for (const DispenseEvent& e : log.dispense_events) {
        svg += circle(m, e.position, 0.02, "fill=\"#d62728\"");
    }
    svg += "</svg>\n";
    return svg;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write file: " + path);
    out << content;
}

}  // namespace feedsim
