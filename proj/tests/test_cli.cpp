// End-to-end tests that drive the installed command-line binary the way a
// user would: real process, real files, real exit codes.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <doctest.h>
#include <json.hpp>

#include "dermarket/sweep.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

// Runs the CLI with the given arguments, capturing exit code and both streams.
RunResult run_cli(const std::string& args) {
    static int counter = 0;
    const fs::path dir = fs::temp_directory_path();
    const fs::path out_path = dir / ("dermarket_cli_out_" + std::to_string(counter) + ".txt");
    const fs::path err_path = dir / ("dermarket_cli_err_" + std::to_string(counter) + ".txt");
    ++counter;

    const std::string command = std::string("\"") + DERMARKET_CLI_BIN + "\" " + args + " >\"" +
                                out_path.string() + "\" 2>\"" + err_path.string() + "\"";
    const int status = std::system(command.c_str());

    RunResult result;
    result.exit_code = (status != -1 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_path);
    result.err = slurp(err_path);
    fs::remove(out_path);
    fs::remove(err_path);
    return result;
}

std::string write_temp_scenario(const std::string& name, const std::string& content) {
    const fs::path path = fs::temp_directory_path() / name;
    std::ofstream out(path);
    out << content;
    return path.string();
}

std::string reference_path() {
    return (fs::path(DERMARKET_SCENARIO_DIR) / "two_prosumer.json").string();
}

}  // namespace

TEST_CASE("solve emits the strategic equilibrium as JSON") {
    const RunResult run =
        run_cli("solve --scenario \"" + reference_path() + "\" --model full-strategic");
    REQUIRE(run.exit_code == 0);

    const nlohmann::json j = nlohmann::json::parse(run.out);
    CHECK(j["model"] == "full-strategic");
    CHECK(j["price"].get<double>() == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(j["bid_slope"].get<double>() == doctest::Approx(5.5).epsilon(1e-12));
    CHECK(j["total_supply"].get<double>() == doctest::Approx(5.0));
}

TEST_CASE("solve reports the buy-only strategic active set") {
    const RunResult run = run_cli("solve --scenario \"" + reference_path() +
                                  "\" --model restricted-strategic");
    REQUIRE(run.exit_code == 0);

    const nlohmann::json j = nlohmann::json::parse(run.out);
    CHECK(j["price"].get<double>() == doctest::Approx(6.5).epsilon(1e-12));
    CHECK(j["active_set_size"].get<int>() == 1);
    CHECK(j["welfare"].get<double>() == doctest::Approx(316.875));
}

TEST_CASE("solve renders a table when asked") {
    const RunResult run = run_cli("solve --scenario \"" + reference_path() +
                                  "\" --model full-truthful --format table");
    REQUIRE(run.exit_code == 0);
    CHECK(run.out.find("model: full-truthful") != std::string::npos);
    CHECK(run.out.find("price") != std::string::npos);
}

TEST_CASE("solve distinguishes usage, parse, and validation failures") {
    // Unknown model name: usage problem.
    CHECK(run_cli("solve --scenario \"" + reference_path() + "\" --model cournot")
              .exit_code == 1);

    // Unknown format: rejected by the option parser.
    CHECK(run_cli("solve --scenario \"" + reference_path() +
                  "\" --model full-truthful --format xml")
              .exit_code == 1);

    // Missing file: input problem.
    const RunResult missing =
        run_cli("solve --scenario /no/such/file.json --model full-truthful");
    CHECK(missing.exit_code == 1);
    CHECK(missing.err.find("ParseError") != std::string::npos);

    // Unparseable document: input problem.
    const std::string broken = write_temp_scenario("dermarket_broken.json", "{oops");
    CHECK(run_cli("solve --scenario \"" + broken + "\" --model full-truthful").exit_code == 1);

    // Parseable but economically invalid: solver-level failure.
    const std::string inactive = write_temp_scenario("dermarket_inactive.json", R"({
      "prosumers": [{"a": -0.1, "b": 10.0, "capacity": 30.0}],
      "generators": {"count": 1, "marginal_cost": 5.0}
    })");
    const RunResult invalid =
        run_cli("solve --scenario \"" + inactive + "\" --model full-truthful");
    CHECK(invalid.exit_code == 2);
    CHECK(invalid.err.find("NoActiveProsumer") != std::string::npos);

    // No subcommand at all.
    CHECK(run_cli("").exit_code == 1);

    // Help is not an error.
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("sweep writes one CSV row per fleet size") {
    const fs::path csv = fs::temp_directory_path() / "dermarket_sweep_test.csv";
    const RunResult run = run_cli("sweep --scenario \"" + reference_path() +
                                  "\" --n-min 1 --n-max 20 --out \"" + csv.string() + "\"");
    REQUIRE(run.exit_code == 0);

    std::ifstream in(csv);
    REQUIRE(in.good());
    std::string line;
    REQUIRE(std::getline(in, line));
    CHECK(line == dermarket::kSweepCsvHeader);

    std::vector<std::string> rows;
    while (std::getline(in, line)) rows.push_back(line);
    REQUIRE(rows.size() == 20);
    // Row N=1: n,lambda_T,lambda_S,... with the worked-example prices.
    CHECK(rows[0].rfind("1,5,5.5,5,6.5,", 0) == 0);
    fs::remove(csv);
}

TEST_CASE("sweep rejects an inverted or degenerate fleet range") {
    const fs::path csv = fs::temp_directory_path() / "dermarket_sweep_bad.csv";
    CHECK(run_cli("sweep --scenario \"" + reference_path() +
                  "\" --n-min 3 --n-max 2 --out \"" + csv.string() + "\"")
              .exit_code == 1);
    CHECK(run_cli("sweep --scenario \"" + reference_path() +
                  "\" --n-min 0 --n-max 2 --out \"" + csv.string() + "\"")
              .exit_code == 1);
}

TEST_CASE("verify exits 0 when every check passes") {
    const RunResult run = run_cli("verify --scenario \"" + reference_path() +
                                  "\" --random-count 5 --seed 42");
    CHECK(run.exit_code == 0);
    CHECK(run.out.find("verification PASSED") != std::string::npos);
    CHECK(run.out.find("[PASS]") != std::string::npos);
    CHECK(run.out.find("[FAIL]") == std::string::npos);
}

TEST_CASE("verify exits 3 and names the check when a violation is injected") {
    const RunResult run = run_cli("verify --scenario \"" + reference_path() +
                                  "\" --random-count 5 --seed 42 --perturb-ws 1.0");
    CHECK(run.exit_code == 3);
    CHECK(run.out.find("[FAIL] welfare/strategic_loss_full") != std::string::npos);
    CHECK(run.out.find("verification FAILED") != std::string::npos);
}

TEST_CASE("verify reports are identical across runs with the same seed") {
    const std::string args = "verify --scenario \"" + reference_path() +
                             "\" --random-count 5 --seed 1234";
    const RunResult first = run_cli(args);
    const RunResult second = run_cli(args);
    CHECK(first.exit_code == 0);
    CHECK(first.out == second.out);
}
