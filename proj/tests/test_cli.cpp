#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "feedsim/scenario_io.hpp"
#include "test_helpers.hpp"

using namespace feedsim;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int exit_code;
    std::string output;  // stdout + stderr
};

CliResult run_cli(const std::string& args, const fs::path& log) {
    const std::string cmd =
        std::string(FEEDSIM_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return {WEXITSTATUS(status), buffer.str()};
}

struct CliFixture {
    fs::path dir;
    fs::path scenario;

    CliFixture() {
        dir = fs::temp_directory_path() / "feedsim_cli_tests";
        fs::remove_all(dir);
        fs::create_directories(dir);
        scenario = dir / "default.json";
        save_scenario_file(default_doc(), scenario.string());
    }

    CliResult cli(const std::string& args) { return run_cli(args, dir / "cli.log"); }
};

int count_lines(const std::string& text) {
    int lines = 0;
    for (char c : text) {
        if (c == '\n') ++lines;
    }
    return lines;
}

}  // namespace

TEST_CASE("simulate writes its artifacts and exits 0 on a passing run") {
    CliFixture fx;
    const fs::path out = fx.dir / "run";
    const CliResult result = fx.cli("simulate --scenario " + fx.scenario.string() +
                                    " --candidate SingleTranslatory --out " + out.string() +
                                    " --plot");
    CHECK(result.exit_code == 0);
    CHECK(fs::exists(out / "events.csv"));
    CHECK(fs::exists(out / "trace.csv"));
    CHECK(fs::exists(out / "report.json"));
    CHECK(fs::exists(out / "trajectory.svg"));

    std::ifstream report(out / "report.json");
    nlohmann::ordered_json j;
    report >> j;
    CHECK(j.at("overall_pass").get<bool>());

    std::ifstream events(out / "events.csv");
    std::string header;
    std::getline(events, header);
    CHECK(header == "t_s,x_m,y_m,side,amount_kg,row,candidate");
}

TEST_CASE("a missing scenario file exits 2 and names the path") {
    CliFixture fx;
    const CliResult result = fx.cli(
        "simulate --scenario /no/such/file.json --candidate SingleTranslatory --out " +
        (fx.dir / "x").string());
    CHECK(result.exit_code == 2);
    CHECK(result.output.find("/no/such/file.json") != std::string::npos);
}

TEST_CASE("a run that misses the precision demand exits 1") {
    CliFixture fx;
    ScenarioDoc doc = default_doc();
    doc.controller.trigger_lead_m = 0.1;  // fires a tenth of a meter early
    const fs::path bad = fx.dir / "early.json";
    save_scenario_file(doc, bad.string());

    const fs::path out = fx.dir / "early_run";
    const CliResult result = fx.cli("simulate --scenario " + bad.string() +
                                    " --candidate SingleTranslatory --out " + out.string());
    CHECK(result.exit_code == 1);

    std::ifstream report(out / "report.json");
    nlohmann::ordered_json j;
    report >> j;
    CHECK_FALSE(j.at("precision_ok").get<bool>());
    CHECK(j.at("speed_ok").get<bool>());
}

TEST_CASE("validation problems exit 3") {
    CliFixture fx;
    ScenarioDoc doc = default_doc();
    doc.scenario.corridor_half_width_m = 0.2;  // narrower than the body
    const fs::path narrow = fx.dir / "narrow.json";
    save_scenario_file(doc, narrow.string());
    const CliResult result = fx.cli("simulate --scenario " + narrow.string() +
                                    " --candidate SingleTranslatory --out " +
                                    (fx.dir / "narrow_run").string());
    CHECK(result.exit_code == 3);
}

TEST_CASE("dse writes the overview pair and per-run directories") {
    CliFixture fx;
    const fs::path out = fx.dir / "sweep";
    const CliResult result =
        fx.cli("dse --scenario " + fx.scenario.string() + " --out " + out.string());
    CHECK(result.exit_code == 0);
    REQUIRE(fs::exists(out / "overview.csv"));
    REQUIRE(fs::exists(out / "overview.json"));

    std::ifstream csv(out / "overview.csv");
    std::ostringstream buffer;
    buffer << csv.rdbuf();
    CHECK(count_lines(buffer.str()) == 5);  // header + one row per candidate

    int run_dirs = 0;
    for (const auto& entry : fs::directory_iterator(out / "runs")) {
        run_dirs += entry.is_directory() ? 1 : 0;
    }
    CHECK(run_dirs == 36);

    SECTION("report prints the stored overview without the run logs") {
        fs::remove_all(out / "runs");
        const CliResult report = fx.cli("report --in " + out.string());
        CHECK(report.exit_code == 0);
        CHECK(report.output.find("SingleTranslatory") != std::string::npos);
        CHECK(report.output.find("DoubleRotary") != std::string::npos);
    }
}

TEST_CASE("report on an empty directory exits 2") {
    CliFixture fx;
    fs::create_directories(fx.dir / "empty");
    const CliResult result = fx.cli("report --in " + (fx.dir / "empty").string());
    CHECK(result.exit_code == 2);
}

TEST_CASE("COSIM_WORKERS is honored when --workers is absent") {
    CliFixture fx;
    const fs::path out_env = fx.dir / "sweep_env";
    const fs::path out_one = fx.dir / "sweep_one";
    setenv("COSIM_WORKERS", "3", 1);
    const CliResult with_env =
        fx.cli("dse --scenario " + fx.scenario.string() + " --out " + out_env.string());
    unsetenv("COSIM_WORKERS");
    const CliResult serial = fx.cli("dse --scenario " + fx.scenario.string() + " --workers 1" +
                                    " --out " + out_one.string());
    CHECK(with_env.exit_code == 0);
    CHECK(serial.exit_code == 0);

    std::ifstream a(out_env / "overview.json");
    std::ifstream b(out_one / "overview.json");
    std::ostringstream sa;
    std::ostringstream sb;
    sa << a.rdbuf();
    sb << b.rdbuf();
    CHECK(sa.str() == sb.str());
}
