#pragma once

#include <concepts>
#include <utility>
#include <vector>

#include "feedsim/config.hpp"
#include "feedsim/contract.hpp"
#include "feedsim/run_types.hpp"
#include "feedsim/validation.hpp"

namespace feedsim {

enum class Termination { controller_done, time_limit, fault };

inline const char* termination_name(Termination t) {
    switch (t) {
        case Termination::controller_done: return "ControllerDone";
        case Termination::time_limit: return "TimeLimit";
        case Termination::fault: return "Fault";
    }
    return "?";
}

/// Complete record of one co-simulation run: every exchange, the sampled pose
/// trace, and every dispense event. Two runs with identical inputs (including
/// the seed) produce equal logs.
struct RunLog {
    std::vector<ContractSnapshot> snapshots;
    std::vector<PoseSample> pose_trace;
    std::vector<DispenseEvent> dispense_events;
    Termination termination = Termination::time_limit;

    friend bool operator==(const RunLog&, const RunLog&) = default;
};

/// Continuous-time side of a co-model.
template <typename P>
concept CtModel = requires(P p, const P cp, const SignalMap& values, double t) {
    { cp.contract() } -> std::convertible_to<ContractSchema>;
    { p.apply_controlled(values, t) };
    { p.advance(t, t, t) };
    { p.sample_monitored(t) } -> std::convertible_to<SignalMap>;
    { cp.pose_sample(t) } -> std::convertible_to<PoseSample>;
    { p.take_dispense_events() } -> std::convertible_to<std::vector<DispenseEvent>>;
    { cp.healthy() } -> std::convertible_to<bool>;
};

/// Discrete-event side of a co-model.
template <typename C>
concept DeModel = requires(C c, const C cc, const SignalMap& values, double t) {
    { cc.contract() } -> std::convertible_to<ContractSchema>;
    { c.step(values, t) } -> std::convertible_to<ControllerOutput>;
};

namespace detail {

enum class ExchangeVerdict { ok, structural, non_finite };

inline ExchangeVerdict classify_exchange(const ValidationResult& result) {
    if (result.ok()) return ExchangeVerdict::ok;
    for (const Violation& v : result.violations()) {
        if (v.code != Issue::non_finite_value) return ExchangeVerdict::structural;
    }
    return ExchangeVerdict::non_finite;
}

}  // namespace detail

/// Fixed-interval lock-step master algorithm. At each sync time t = k*dc:
/// deliver the monitored snapshot to the DE controller (which processes every
/// event due at or before t), hold the returned controlled values constant,
/// integrate the CT plant to t+dc in substeps, then sample sensors for the
/// next exchange. Terminates on controller completion, the time limit, or a
/// numeric fault.
template <CtModel Plant, DeModel Controller>
RunLog run_cosim(Plant& plant, Controller& controller, const CoSimConfig& config) {
    throw_if_invalid(validate_config(config));
    {
        const ContractSchema plant_schema = plant.contract();
        const ValidationResult schema_check = validate_contract(plant_schema);
        if (!schema_check.ok()) {
            throw ContractMismatchError("invalid contract: " + schema_check.message());
        }
        if (!(plant_schema == controller.contract())) {
            throw ContractMismatchError("plant and controller contracts differ");
        }
    }
    const ContractSchema schema = plant.contract();
    constexpr double time_eps = 1e-9;

    RunLog log;
    SignalMap monitored = plant.sample_monitored(0.0);
    log.pose_trace.push_back(plant.pose_sample(0.0));

    for (std::uint64_t k = 0;; ++k) {
        const double t = static_cast<double>(k) * config.comm_interval_s;
        if (t >= config.t_max_s - time_eps) {
            log.termination = Termination::time_limit;
            break;
        }

        const ValidationResult monitored_check =
            detail::check_values(monitored, schema.monitored);
        if (detail::classify_exchange(monitored_check) == detail::ExchangeVerdict::structural) {
            throw ContractMismatchError("monitored snapshot: " + monitored_check.message());
        }
        if (!monitored_check.ok()) {
            log.termination = Termination::fault;
            break;
        }

        ControllerOutput out = controller.step(monitored, t);

        ContractSnapshot snapshot{t, std::move(monitored), out.controlled};
        const ValidationResult full_check = exchange(snapshot, schema);
        switch (detail::classify_exchange(full_check)) {
            case detail::ExchangeVerdict::structural:
                throw ContractMismatchError("exchange: " + full_check.message());
            case detail::ExchangeVerdict::non_finite:
                log.termination = Termination::fault;
                break;
            case detail::ExchangeVerdict::ok:
                break;
        }
        if (log.termination == Termination::fault) break;
        log.snapshots.push_back(std::move(snapshot));

        if (out.done) {
            log.termination = Termination::controller_done;
            break;
        }

        plant.apply_controlled(out.controlled, t);
        plant.advance(t, config.comm_interval_s, config.ct_substep_s);
        if (!plant.healthy()) {
            log.termination = Termination::fault;
            break;
        }

        const double t_next = static_cast<double>(k + 1) * config.comm_interval_s;
        monitored = plant.sample_monitored(t_next);
        log.pose_trace.push_back(plant.pose_sample(t_next));
        auto events = plant.take_dispense_events();
        log.dispense_events.insert(log.dispense_events.end(), events.begin(), events.end());
    }
    return log;
}

}  // namespace feedsim
