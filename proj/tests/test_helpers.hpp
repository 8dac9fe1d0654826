#pragma once

#include <string>

#include "feedsim/dse.hpp"
#include "feedsim/setup.hpp"

namespace feedsim::testing {

/// Default desk-scale document, finalized and ready to run.
inline ScenarioDoc ready_default_doc() {
    ScenarioDoc doc = default_doc();
    throw_if_invalid(finalize_scenario(doc.scenario));
    return doc;
}

/// Default document with cages on both sides of the row.
inline ScenarioDoc ready_both_sided_doc() {
    ScenarioDoc doc = default_doc();
    doc.scenario.rows[0].side = RowSide::both;
    throw_if_invalid(finalize_scenario(doc.scenario));
    return doc;
}

inline ArmCandidate ready_candidate(const ScenarioDoc& doc, CandidateId id) {
    return resolved_candidate(find_candidate(doc, id), doc.scenario.rows[0].cage_length_m);
}

}  // namespace feedsim::testing
