#include <catch2/catch_amalgamated.hpp>

#include <tuple>
#include <vector>

#include "feedsim/dse.hpp"
#include "feedsim/report_io.hpp"
#include "test_helpers.hpp"

using namespace feedsim;
using Catch::Approx;

TEST_CASE("the default catalog enumerates the four candidates in fixed order") {
    const std::vector<ArmCandidate> all = enumerate_candidates(default_catalog());
    REQUIRE(all.size() == 4);
    CHECK(all[0].id == CandidateId::single_rotary);
    CHECK(all[1].id == CandidateId::single_translatory);
    CHECK(all[2].id == CandidateId::double_rotary);
    CHECK(all[3].id == CandidateId::double_translatory);

    const std::vector<ArmCandidate> filtered =
        enumerate_candidates(default_catalog(), {CandidateId::single_translatory});
    REQUIRE(filtered.size() == 1);
    CHECK(filtered[0].id == CandidateId::single_translatory);
}

TEST_CASE("a candidate whose sides contradict its id is rejected") {
    std::vector<ArmCandidate> catalog = default_catalog();
    catalog[0].sides.push_back({Side::left, {0.0, 0.30}});  // SingleRotary with two sides
    CHECK_THROWS_AS(enumerate_candidates(catalog), ValidationError);
}

TEST_CASE("the default sweep covers the full Cartesian grid in lexicographic order") {
    const auto doc = testing::ready_default_doc();
    const std::vector<RunResult> results = run_sweep(doc, 1);
    REQUIRE(results.size() == 36);

    std::vector<std::tuple<CandidateId, double, double, std::uint64_t>> expected;
    for (CandidateId id : doc.sweep.candidates) {
        for (double lat : doc.sweep.lateral_offsets_m) {
            for (double head : doc.sweep.heading_offsets_rad) {
                for (std::uint64_t seed : doc.sweep.seeds) {
                    expected.emplace_back(id, lat, head, seed);
                }
            }
        }
    }
    for (std::size_t i = 0; i < results.size(); ++i) {
        CHECK(results[i].candidate == std::get<0>(expected[i]));
        CHECK(results[i].lateral_offset_m == std::get<1>(expected[i]));
        CHECK(results[i].heading_offset_rad == std::get<2>(expected[i]));
        CHECK(results[i].seed == std::get<3>(expected[i]));
    }
}

TEST_CASE("a degenerate sweep equals a direct run") {
    ScenarioDoc doc = testing::ready_default_doc();
    doc.sweep.candidates = {CandidateId::single_translatory};
    doc.sweep.lateral_offsets_m = {0.0};
    doc.sweep.heading_offsets_rad = {0.0};

    const std::vector<RunResult> results = run_sweep(doc, 1);
    REQUIRE(results.size() == 1);
    const RunResult direct = execute_run(doc, CandidateId::single_translatory, 0.0, 0.0, 42);
    CHECK(results[0].log == direct.log);
    CHECK(report_to_json(results[0].report) == report_to_json(direct.report));
}

TEST_CASE("one infeasible candidate fails alone without poisoning the sweep") {
    ScenarioDoc doc = testing::ready_default_doc();
    for (ArmCandidate& c : doc.catalog) {
        if (c.id == CandidateId::single_rotary) c.link_lengths_m = {0.1, 0.1};  // cannot reach
    }
    doc.sweep.lateral_offsets_m = {0.0};
    doc.sweep.heading_offsets_rad = {0.0};

    const std::vector<RunResult> results = run_sweep(doc, 1);
    REQUIRE(results.size() == 4);
    CHECK(results[0].failed);
    CHECK_FALSE(results[0].failure_reason.empty());
    for (std::size_t i = 1; i < results.size(); ++i) {
        CHECK_FALSE(results[i].failed);
        CHECK(results[i].report.overall_pass);
    }
}

TEST_CASE("aggregate reports a full-pass sweep as pass rate one") {
    const auto doc = testing::ready_default_doc();
    const std::vector<RunResult> results = run_sweep(doc, 1);
    const CandidateOverview overview = aggregate(results);
    REQUIRE(overview.candidates.size() == 4);
    for (const CandidateSummary& s : overview.candidates) {
        CHECK(s.runs == 9);
        CHECK(s.pass_rate == 1.0);
        CHECK(s.demands_pass);
        CHECK(s.dispenses_per_pass == 10);
        CHECK(s.max_speed_m_s <= speed_cap_m_s);
        CHECK(s.min_clearance_m > 0.0);
    }
}

TEST_CASE("aggregate counts partial failures as a fractional pass rate") {
    std::vector<RunResult> synthetic(9);
    for (std::size_t i = 0; i < synthetic.size(); ++i) {
        synthetic[i].candidate = CandidateId::single_translatory;
        synthetic[i].report.overall_pass = i != 4;
    }
    const CandidateOverview overview = aggregate(synthetic);
    REQUIRE(overview.candidates.size() == 1);
    CHECK(overview.candidates[0].pass_rate == Approx(8.0 / 9.0).margin(1e-12));
    CHECK_FALSE(overview.candidates[0].demands_pass);
}

TEST_CASE("aggregating nothing is an error") {
    CHECK_THROWS_WITH(aggregate({}), Catch::Matchers::ContainsSubstring("EmptyResults"));
}

TEST_CASE("double-sided feeding doubles the dispense count on a both-sided row") {
    ScenarioDoc doc = testing::ready_both_sided_doc();
    doc.sweep.candidates = {CandidateId::single_translatory, CandidateId::double_translatory};
    doc.sweep.lateral_offsets_m = {0.0};
    doc.sweep.heading_offsets_rad = {0.0};
    const CandidateOverview overview = aggregate(run_sweep(doc, 1));
    REQUIRE(overview.candidates.size() == 2);
    CHECK(overview.candidates[0].dispenses_per_pass == 10);
    CHECK(overview.candidates[1].dispenses_per_pass == 20);
    CHECK(overview.candidates[1].dispenses_per_pass ==
          2 * overview.candidates[0].dispenses_per_pass);
}

TEST_CASE("worker count does not change the sweep outcome") {
    ScenarioDoc doc = testing::ready_default_doc();
    doc.sweep.candidates = {CandidateId::single_translatory, CandidateId::double_rotary};

    const std::vector<RunResult> serial = run_sweep(doc, 1);
    const std::vector<RunResult> parallel = run_sweep(doc, 4);
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
        CHECK(serial[i].log == parallel[i].log);
    }
    CHECK(overview_to_json(aggregate(serial)).dump() ==
          overview_to_json(aggregate(parallel)).dump());
}

TEST_CASE("sweep offsets outside the start area are rejected") {
    ScenarioDoc doc = testing::ready_default_doc();
    doc.sweep.lateral_offsets_m = {0.0, 0.5};  // start area allows 0.15
    CHECK_THROWS_AS(run_sweep(doc, 1), ValidationError);
}

TEST_CASE("an empty sweep axis is rejected") {
    ScenarioDoc doc = testing::ready_default_doc();
    doc.sweep.candidates.clear();
    try {
        run_sweep(doc, 1);
        FAIL("expected EmptySweep");
    } catch (const ValidationError& e) {
        CHECK(e.result.has(Issue::empty_sweep));
    }
}

TEST_CASE("an exhausted hopper leaves missing dispenses for the evaluator") {
    ScenarioDoc doc = testing::ready_default_doc();
    doc.vehicle.hopper_capacity_kg = 0.55;  // five and a half of the ten 0.1 kg pulses
    const RunResult run = execute_run(doc, CandidateId::single_translatory, 0.0, 0.0, 42);

    CHECK(run.termination == Termination::controller_done);
    CHECK(run.log.dispense_events.size() == 6);
    double total = 0.0;
    for (const DispenseEvent& e : run.log.dispense_events) total += e.amount_kg;
    CHECK(total == Approx(0.55).margin(1e-9));
    CHECK(run.report.missed_targets == 4);
    CHECK_FALSE(run.report.precision_ok);
    CHECK(run.report.speed_ok);
    CHECK(run.report.collision_ok);
    CHECK_FALSE(run.report.overall_pass);
}
