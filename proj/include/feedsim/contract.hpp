#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "feedsim/validation.hpp"

namespace feedsim {

/// Value kinds a contract signal may carry. `tag` is an optional identifier
/// (an RFID reading that may legitimately be absent).
enum class SignalKind { real, integer, boolean, tag };

inline const char* signal_kind_name(SignalKind k) {
    switch (k) {
        case SignalKind::real: return "real";
        case SignalKind::integer: return "integer";
        case SignalKind::boolean: return "boolean";
        case SignalKind::tag: return "tag";
    }
    return "?";
}

/// An optional identifier reading; absence is a value, not an error.
struct TagReading {
    std::optional<std::int64_t> id;
    friend bool operator==(const TagReading&, const TagReading&) = default;
};

using SignalValue = std::variant<double, std::int64_t, bool, TagReading>;
using SignalMap = std::map<std::string, SignalValue>;

inline SignalKind kind_of(const SignalValue& v) {
    switch (v.index()) {
        case 0: return SignalKind::real;
        case 1: return SignalKind::integer;
        case 2: return SignalKind::boolean;
        default: return SignalKind::tag;
    }
}

inline bool value_is_finite(const SignalValue& v) {
    if (const auto* r = std::get_if<double>(&v)) return std::isfinite(*r);
    return true;
}

struct SignalDescriptor {
    std::string name;
    std::string unit;
    SignalKind kind = SignalKind::real;
    friend bool operator==(const SignalDescriptor&, const SignalDescriptor&) = default;
};

/// The set of signals crossing the DE/CT boundary. `monitored` flows from the
/// plant to the controller (sensors); `controlled` flows back (actuators).
struct ContractSchema {
    std::vector<SignalDescriptor> monitored;
    std::vector<SignalDescriptor> controlled;
    friend bool operator==(const ContractSchema&, const ContractSchema&) = default;
};

/// One synchronized exchange: both directions of the contract at time t.
struct ContractSnapshot {
    double t = 0.0;
    SignalMap monitored_values;
    SignalMap controlled_values;
    friend bool operator==(const ContractSnapshot&, const ContractSnapshot&) = default;
};

/// Accepts a schema iff names are non-empty, unique within each role, and the
/// monitored/controlled name sets are disjoint. Every violation is reported
/// by signal name.
inline ValidationResult validate_contract(const ContractSchema& schema) {
    ValidationResult result;
    if (schema.monitored.empty() && schema.controlled.empty()) {
        result.add(Issue::empty_schema, "");
        return result;
    }
    auto check_role = [&result](const std::vector<SignalDescriptor>& role) {
        std::set<std::string> seen;
        for (const auto& d : role) {
            if (d.name.empty()) {
                result.add(Issue::empty_name, "");
                continue;
            }
            if (!seen.insert(d.name).second) result.add(Issue::duplicate_name, d.name);
        }
        return seen;
    };
    const std::set<std::string> monitored_names = check_role(schema.monitored);
    const std::set<std::string> controlled_names = check_role(schema.controlled);
    for (const auto& name : monitored_names) {
        if (controlled_names.count(name) != 0) result.add(Issue::role_overlap, name);
    }
    return result;
}

namespace detail {

inline ValidationResult check_values(const SignalMap& values,
                                     const std::vector<SignalDescriptor>& descriptors) {
    ValidationResult result;
    for (const auto& d : descriptors) {
        const auto it = values.find(d.name);
        if (it == values.end()) {
            result.add(Issue::missing_signal, d.name);
            continue;
        }
        if (kind_of(it->second) != d.kind) {
            result.add(Issue::kind_mismatch, d.name,
                       std::string("expected ") + signal_kind_name(d.kind));
        }
        if (!value_is_finite(it->second)) result.add(Issue::non_finite_value, d.name);
    }
    for (const auto& [name, value] : values) {
        bool known = false;
        for (const auto& d : descriptors) {
            if (d.name == name) {
                known = true;
                break;
            }
        }
        if (!known) result.add(Issue::unknown_signal, name);
    }
    return result;
}

}  // namespace detail

/// Verifies a snapshot carries exactly the schema's names with finite values.
/// The snapshot itself passes through unchanged; only violations are returned.
inline ValidationResult exchange(const ContractSnapshot& snapshot,
                                 const ContractSchema& schema) {
    ValidationResult result = detail::check_values(snapshot.monitored_values, schema.monitored);
    result.merge(detail::check_values(snapshot.controlled_values, schema.controlled));
    return result;
}

/// What the DE side returns at a sync point: the controlled values plus the
/// mission-complete flag.
struct ControllerOutput {
    SignalMap controlled;
    bool done = false;
};

// Typed accessors used by the models when consuming a snapshot side.

inline double get_real(const SignalMap& values, const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end()) throw Error("missing real signal: " + name);
    if (const auto* v = std::get_if<double>(&it->second)) return *v;
    throw Error("signal is not real-valued: " + name);
}

inline std::int64_t get_integer(const SignalMap& values, const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end()) throw Error("missing integer signal: " + name);
    if (const auto* v = std::get_if<std::int64_t>(&it->second)) return *v;
    throw Error("signal is not integer-valued: " + name);
}

inline bool get_boolean(const SignalMap& values, const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end()) throw Error("missing boolean signal: " + name);
    if (const auto* v = std::get_if<bool>(&it->second)) return *v;
    throw Error("signal is not boolean-valued: " + name);
}

inline TagReading get_tag(const SignalMap& values, const std::string& name) {
    const auto it = values.find(name);
    if (it == values.end()) throw Error("missing tag signal: " + name);
    if (const auto* v = std::get_if<TagReading>(&it->second)) return *v;
    throw Error("signal is not tag-valued: " + name);
}

}  // namespace feedsim
