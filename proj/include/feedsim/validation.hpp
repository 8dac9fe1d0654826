#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace feedsim {

enum class Issue {
    // Contract schema / snapshot exchange.
    duplicate_name,
    role_overlap,
    empty_schema,
    empty_name,
    missing_signal,
    unknown_signal,
    non_finite_value,
    kind_mismatch,
    // Co-simulation configuration.
    bad_interval,
    bad_time_limit,
    // Scenario geometry.
    no_rows,
    corridor_too_narrow,
    row_overlap,
    non_parallel_rows,
    duplicate_tag,
    tag_out_of_range,
    bad_row_geometry,
    bad_start_area,
    // Candidates and plans.
    invalid_candidate,
    arm_cannot_reach,
    overlapping_pulses,
    bad_params,
    // Sweep setup.
    empty_sweep,
    offset_outside_start_area,
};

inline const char* issue_name(Issue code) {
    switch (code) {
        case Issue::duplicate_name: return "DuplicateName";
        case Issue::role_overlap: return "RoleOverlap";
        case Issue::empty_schema: return "EmptySchema";
        case Issue::empty_name: return "EmptyName";
        case Issue::missing_signal: return "MissingSignal";
        case Issue::unknown_signal: return "UnknownSignal";
        case Issue::non_finite_value: return "NonFiniteValue";
        case Issue::kind_mismatch: return "KindMismatch";
        case Issue::bad_interval: return "BadInterval";
        case Issue::bad_time_limit: return "BadTimeLimit";
        case Issue::no_rows: return "NoRows";
        case Issue::corridor_too_narrow: return "CorridorTooNarrow";
        case Issue::row_overlap: return "RowOverlap";
        case Issue::non_parallel_rows: return "NonParallelRows";
        case Issue::duplicate_tag: return "DuplicateTag";
        case Issue::tag_out_of_range: return "TagOutOfRange";
        case Issue::bad_row_geometry: return "BadRowGeometry";
        case Issue::bad_start_area: return "BadStartArea";
        case Issue::invalid_candidate: return "InvalidCandidate";
        case Issue::arm_cannot_reach: return "ArmCannotReach";
        case Issue::overlapping_pulses: return "OverlappingPulses";
        case Issue::bad_params: return "BadParams";
        case Issue::empty_sweep: return "EmptySweep";
        case Issue::offset_outside_start_area: return "OffsetOutsideStartArea";
    }
    return "Unknown";
}

/// One named violation; `subject` is the offending signal/tag/field name.
struct Violation {
    Issue code;
    std::string subject;
    std::string detail;
};

/// Collected validation outcome. Empty means the input is accepted.
class ValidationResult {
  public:
    bool ok() const { return violations_.empty(); }
    const std::vector<Violation>& violations() const { return violations_; }

    void add(Issue code, std::string subject, std::string detail = {}) {
        violations_.push_back({code, std::move(subject), std::move(detail)});
    }

    void merge(const ValidationResult& other) {
        violations_.insert(violations_.end(), other.violations_.begin(),
                           other.violations_.end());
    }

    bool has(Issue code) const {
        for (const auto& v : violations_) {
            if (v.code == code) return true;
        }
        return false;
    }

    bool has(Issue code, const std::string& subject) const {
        for (const auto& v : violations_) {
            if (v.code == code && v.subject == subject) return true;
        }
        return false;
    }

    std::string message() const {
        std::string out;
        for (const auto& v : violations_) {
            if (!out.empty()) out += "; ";
            out += issue_name(v.code);
            if (!v.subject.empty()) out += "(" + v.subject + ")";
            if (!v.detail.empty()) out += ": " + v.detail;
        }
        return out;
    }

  private:
    std::vector<Violation> violations_;
};

/// Base class for all library errors.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// File or document could not be read/parsed (CLI exit code 2).
struct ParseError : Error {
    using Error::Error;
};

/// Input failed validation (CLI exit code 3).
struct ValidationError : Error {
    explicit ValidationError(ValidationResult result)
        : Error(result.message()), result(std::move(result)) {}
    ValidationResult result;
};

/// Plant and controller disagree on the signal contract.
struct ContractMismatchError : Error {
    using Error::Error;
};

inline void throw_if_invalid(const ValidationResult& result) {
    if (!result.ok()) throw ValidationError(result);
}

}  // namespace feedsim
