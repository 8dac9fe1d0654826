#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "feedsim/arm.hpp"
#include "feedsim/config.hpp"
#include "feedsim/controller.hpp"
#include "feedsim/scenario.hpp"
#include "feedsim/sensors.hpp"
#include "feedsim/validation.hpp"
#include "feedsim/vehicle.hpp"

namespace feedsim {

/// Which candidates to sweep and the operator-placement perturbation grid.
struct SweepSpec {
    std::vector<CandidateId> candidates{
        CandidateId::single_rotary,
        CandidateId::single_translatory,
        CandidateId::double_rotary,
        CandidateId::double_translatory,
    };
    std::vector<double> lateral_offsets_m{-0.1, 0.0, 0.1};
    std::vector<double> heading_offsets_rad{-0.087, 0.0, 0.087};
    std::vector<std::uint64_t> seeds{42};

    friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

inline ValidationResult validate_sweep(const SweepSpec& spec, const WorldScenario& scenario) {
    ValidationResult result;
    if (spec.candidates.empty() || spec.lateral_offsets_m.empty() ||
        spec.heading_offsets_rad.empty() || spec.seeds.empty()) {
        result.add(Issue::empty_sweep, "sweep");
    }
    for (double lat : spec.lateral_offsets_m) {
        if (std::abs(lat) > scenario.start_area.lateral_m + 1e-12) {
            result.add(Issue::offset_outside_start_area, "lateral_offsets_m");
            break;
        }
    }
    for (double head : spec.heading_offsets_rad) {
        if (std::abs(head) > scenario.start_area.heading_rad + 1e-12) {
            result.add(Issue::offset_outside_start_area, "heading_offsets_rad");
            break;
        }
    }
    return result;
}

/// Everything one run or sweep needs: the world, the machine, the sensor
/// suite, the controller tuning, the candidate catalog, and timing.
struct ScenarioDoc {
    WorldScenario scenario;
    VehicleParams vehicle;
    SensorParams sensors;
    ControllerParams controller;
    std::vector<ArmCandidate> catalog;
    CoSimConfig cosim;
    SweepSpec sweep;
};

inline ArmCandidate make_default_candidate(CandidateId id) {
    ArmCandidate c;
    c.id = id;
    c.joint_type = candidate_joint_type(id);
    c.sides = {{Side::right, {0.0, -0.30}}};
    if (candidate_is_double(id)) {
        c.sides.push_back({Side::left, {0.0, 0.30}});
        c.half_cage_shift = true;
    }
    return c;
}

inline std::vector<ArmCandidate> default_catalog() {
    return {
        make_default_candidate(CandidateId::single_rotary),
        make_default_candidate(CandidateId::single_translatory),
        make_default_candidate(CandidateId::double_rotary),
        make_default_candidate(CandidateId::double_translatory),
    };
}

/// The stock desk-scale site: one row of ten 0.5 m cages on the right of a
/// 2 m corridor, RFID tag at every cage start, start area 1.5 m before the
/// row. All values are plain configuration, not normative.
inline ScenarioDoc default_doc() {
    ScenarioDoc doc;
    doc.scenario.rows = {CageRow{}};
    doc.scenario.start_pose_nominal = {-1.5, 0.0, 0.0};
    doc.scenario.corridor_half_width_m = 1.0;
    doc.catalog = default_catalog();
    return doc;
}

inline CandidateId candidate_id_from_name(const std::string& name) {
    for (CandidateId id :
         {CandidateId::single_rotary, CandidateId::single_translatory,
          CandidateId::double_rotary, CandidateId::double_translatory}) {
        if (name == candidate_name(id)) return id;
    }
    throw ParseError("unknown candidate id: " + name);
}

inline const ArmCandidate& find_candidate(const ScenarioDoc& doc, CandidateId id) {
    for (const ArmCandidate& c : doc.catalog) {
        if (c.id == id) return c;
    }
    ValidationResult result;
    result.add(Issue::invalid_candidate, candidate_name(id), "not present in the catalog");
    throw ValidationError(result);
}

/// Enumerates the catalog candidates to run, optionally filtered; preserves
/// catalog order and validates every entry.
inline std::vector<ArmCandidate> enumerate_candidates(
    const std::vector<ArmCandidate>& catalog, const std::vector<CandidateId>& filter = {}) {
    std::vector<ArmCandidate> out;
    for (const ArmCandidate& c : catalog) {
        if (!filter.empty() &&
            std::find(filter.begin(), filter.end(), c.id) == filter.end()) {
            continue;
        }
        throw_if_invalid(validate_candidate(c));
        out.push_back(c);
    }
    return out;
}

}  // namespace feedsim
