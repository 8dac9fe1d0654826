// feedsim: co-simulation of a cage-row feeding robot and design-space
// exploration of its feeder-arm candidates.
//
// Subcommands:
//   simulate  run one candidate through the scenario, write events/trace/report
//   dse       run the configured sweep, write the candidate overview
//   report    print a stored overview without re-simulating
//
// Exit codes: 0 demands met, 1 demand failure, 2 file/parse error,
// 3 validation error.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "feedsim/dse.hpp"
#include "feedsim/report_io.hpp"
#include "feedsim/scenario_io.hpp"

namespace fs = std::filesystem;
using namespace feedsim;

namespace {

constexpr int exit_pass = 0;
constexpr int exit_demand_failure = 1;
constexpr int exit_parse_error = 2;
constexpr int exit_validation_error = 3;

std::string run_dir_name(const RunResult& r) {
    return std::string(candidate_name(r.candidate)) + "_lat" + fmt_double(r.lateral_offset_m) +
           "_head" + fmt_double(r.heading_offset_rad) + "_seed" + std::to_string(r.seed);
}

int resolve_workers(std::optional<int> flag) {
    if (flag && *flag > 0) return *flag;
    if (const char* env = std::getenv("COSIM_WORKERS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

int cmd_simulate(const std::string& scenario_path, const std::string& candidate_id,
                 std::optional<double> dt_override, std::optional<std::uint64_t> seed_override,
                 const std::string& out_dir, bool plot) {
    ScenarioDoc doc = load_scenario_file(scenario_path);
    if (dt_override) doc.cosim.ct_substep_s = *dt_override;
    if (seed_override) doc.cosim.seed = *seed_override;
    const CandidateId id = candidate_id_from_name(candidate_id);

    const RunResult result = execute_run(doc, id, 0.0, 0.0, doc.cosim.seed);

    fs::create_directories(out_dir);
    write_text_file(out_dir + "/events.csv", events_csv(result.log.dispense_events));
    write_text_file(out_dir + "/trace.csv", trace_csv(result.log.pose_trace));
    write_text_file(out_dir + "/report.json", report_to_json(result.report).dump(2) + "\n");
    if (plot) {
        write_text_file(out_dir + "/trajectory.svg", trajectory_svg(result.log, doc.scenario));
    }

    std::printf("candidate %s: max speed %.3f m/s, worst error %.4f m, min clearance %.3f m"
                " -> %s (%s)\n",
                candidate_name(id), result.report.max_speed_m_s,
                result.report.worst_abs_error_m, result.report.min_clearance_m,
                result.report.overall_pass ? "PASS" : "FAIL",
                termination_name(result.termination));
    return result.report.overall_pass ? exit_pass : exit_demand_failure;
}

int cmd_dse(const std::string& scenario_path, std::optional<int> workers,
            const std::string& out_dir) {
    ScenarioDoc doc = load_scenario_file(scenario_path);
    const std::vector<RunResult> results = run_sweep(doc, resolve_workers(workers));
    const CandidateOverview overview = aggregate(results);

    fs::create_directories(out_dir);
    write_text_file(out_dir + "/overview.json", overview_to_json(overview).dump(2) + "\n");
    write_text_file(out_dir + "/overview.csv", overview_csv(overview));
    for (const RunResult& r : results) {
        const std::string dir = out_dir + "/runs/" + run_dir_name(r);
        fs::create_directories(dir);
        write_text_file(dir + "/report.json", report_to_json(r.report).dump(2) + "\n");
        write_text_file(dir + "/events.csv", events_csv(r.log.dispense_events));
        if (r.failed) write_text_file(dir + "/failure.txt", r.failure_reason + "\n");
    }

    bool any_pass = false;
    for (const CandidateSummary& s : overview.candidates) any_pass = any_pass || s.demands_pass;
    std::cout << overview_csv(overview);
    return any_pass ? exit_pass : exit_demand_failure;
}

int cmd_report(const std::string& in_dir) {
    const std::string path = in_dir + "/overview.json";
    std::ifstream in(path);
    if (!in) throw ParseError("missing sweep artifact: " + path);
    nlohmann::ordered_json root;
    try {
        in >> root;
    } catch (const nlohmann::ordered_json::exception& e) {
        throw ParseError("invalid JSON in " + path + ": " + e.what());
    }
    const CandidateOverview overview = overview_from_json(root);

    std::printf("%-20s %9s %12s %11s %13s %10s %6s\n", "candidate", "pass_rate", "worst_err_m",
                "max_speed", "min_clearance", "dispenses", "pass");
    for (const CandidateSummary& s : overview.candidates) {
        std::printf("%-20s %9.3f %12.4f %11.3f %13.3f %10d %6s\n", candidate_name(s.id),
                    s.pass_rate, s.worst_abs_error_m, s.max_speed_m_s, s.min_clearance_m,
                    s.dispenses_per_pass, s.demands_pass ? "yes" : "no");
    }
    return exit_pass;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Co-simulation and design-space exploration of a cage-row feeding robot"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string candidate_id;
    std::string out_dir;
    std::string in_dir;
    std::optional<double> dt_override;
    std::optional<std::uint64_t> seed_override;
    std::optional<int> workers;
    bool plot = false;

    CLI::App* simulate = app.add_subcommand("simulate", "Run one candidate once and evaluate it");
    simulate->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    simulate->add_option("--candidate", candidate_id, "Candidate id (e.g. SingleTranslatory)")
        ->required();
    simulate->add_option("--dt", dt_override, "Override the CT integration substep [s]");
    simulate->add_option("--seed", seed_override, "Override the run seed");
    simulate->add_option("--out", out_dir, "Output directory")->required();
    simulate->add_flag("--plot", plot, "Also write trajectory.svg");

    CLI::App* dse = app.add_subcommand("dse", "Run the configured candidate sweep");
    dse->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    dse->add_option("--workers", workers, "Parallel workers (default: COSIM_WORKERS or cores)");
    dse->add_option("--out", out_dir, "Output directory")->required();

    CLI::App* report = app.add_subcommand("report", "Print a stored candidate overview");
    report->add_option("--in", in_dir, "Directory holding a prior dse output")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_parse_error;
    }

    try {
        if (simulate->parsed()) {
            return cmd_simulate(scenario_path, candidate_id, dt_override, seed_override, out_dir,
                                plot);
        }
        if (dse->parsed()) return cmd_dse(scenario_path, workers, out_dir);
        if (report->parsed()) return cmd_report(in_dir);
    } catch (const ValidationError& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return exit_validation_error;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_validation_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_parse_error;
    }
    return exit_parse_error;
}
