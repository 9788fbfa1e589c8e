#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "jumpcp/io.hpp"

#if defined(_WIN32)
#error "the CLI contract test drives the binary through a POSIX shell"
#endif
#include <sys/wait.h>

using nlohmann::json;

namespace {

// Binary under test, injected by the build so the test never guesses paths.
std::string cli_binary() {
    const char* bin = std::getenv("JUMPCP_CLI_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "JUMPCP_CLI_BIN must point at the CLI binary");
    REQUIRE(std::filesystem::exists(bin));
    return bin;
}

std::filesystem::path scratch_dir() {
    const std::filesystem::path dir =
        std::filesystem::temp_directory_path() / "jumpcp_cli_tests";
    std::filesystem::create_directories(dir);
    return dir;
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const std::filesystem::path& file) {
    std::ifstream in(file, std::ios::binary);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

RunResult run_cli(const std::string& args) {
    const std::filesystem::path dir = scratch_dir();
    const std::filesystem::path out_file = dir / "stdout.txt";
    const std::filesystem::path err_file = dir / "stderr.txt";
    const std::string command = cli_binary() + " " + args + " >" + out_file.string() + " 2>" +
                                err_file.string();
    const int status = std::system(command.c_str());
    RunResult result;
    result.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    result.out = slurp(out_file);
    result.err = slurp(err_file);
    return result;
}

std::string quoted(const std::filesystem::path& path) { return "'" + path.string() + "'"; }

}  // namespace

TEST_CASE("help lists every subcommand and exits cleanly") {
    const RunResult result = run_cli("--help");
    CHECK(result.exit_code == 0);
    for (const char* name : {"simulate", "test-abrupt", "test-gradual", "estimate-abrupt",
                             "estimate-gradual", "mc", "replicate-table"})
        CHECK(result.out.find(name) != std::string::npos);
}

TEST_CASE("simulate writes a deterministic observation CSV") {
    const std::filesystem::path dir = scratch_dir();
    const std::string common =
        "--seed 5 --out-dir " + quoted(dir) + " simulate --n 400 --kn 20 --log-jumps";

    const RunResult first = run_cli(common + " -o run_a.csv");
    REQUIRE(first.exit_code == 0);
    const RunResult second = run_cli(common + " -o run_b.csv");
    REQUIRE(second.exit_code == 0);

    const std::string bytes_a = slurp(dir / "run_a.csv");
    const std::string bytes_b = slurp(dir / "run_b.csv");
    CHECK(!bytes_a.empty());
    CHECK(bytes_a == bytes_b);

    const jumpcp::SamplePath path = jumpcp::read_path_csv((dir / "run_a.csv").string());
    CHECK(path.n == 400);
    CHECK(path.delta_n == doctest::Approx(20.0 / 400.0));

    const std::string jumps = slurp(dir / "run_a.jumps.csv");
    CHECK(jumps.rfind("time,size,level_time\n", 0) == 0);

    const RunResult other_seed = run_cli(
        "--seed 6 --out-dir " + quoted(dir) + " simulate --n 400 --kn 20 -o run_c.csv");
    REQUIRE(other_seed.exit_code == 0);
    CHECK(slurp(dir / "run_c.csv") != bytes_a);
}

TEST_CASE("test-abrupt emits the full report JSON") {
    const std::filesystem::path dir = scratch_dir();
    REQUIRE(run_cli("--seed 5 --out-dir " + quoted(dir) +
                    " simulate --n 400 --kn 20 -o data.csv")
                .exit_code == 0);

    const RunResult result = run_cli(
        "--seed 5 --out-dir " + quoted(dir) + " test-abrupt --input " +
        quoted(dir / "data.csv") + " --kn 20 -B 40 --t0 1 --report report.json");
    REQUIRE(result.exit_code == 0);

    const json body = json::parse(slurp(dir / "report.json"));
    CHECK(body.at("n").get<std::size_t>() == 400);
    CHECK(body.at("kn").get<double>() == 20.0);
    CHECK(body.at("survivors").get<std::size_t>() > 0);
    CHECK(body.at("truncation_threshold").get<double>() > 0.0);

    const json& tests = body.at("tests");
    REQUIRE(tests.size() == 3);
    CHECK(tests[0].at("method") == "abrupt_global");
    CHECK(tests[1].at("method") == "abrupt_pointwise_boot");
    CHECK(tests[2].at("method") == "abrupt_pointwise_exact");
    CHECK(tests[0].at("t0").is_null());
    CHECK(tests[1].at("t0").get<double>() == 1.0);
    for (const json& test : tests) {
        CHECK(test.at("statistic").is_number());
        CHECK(test.at("critical_value").get<double>() > 0.0);
        CHECK(test.at("reject").is_boolean());
        CHECK_FALSE(test.at("degenerate").get<bool>());
    }
    CHECK(tests[2].at("replications").get<std::size_t>() == 0);  // analytic quantile

    // The report body is also printed to stdout.
    CHECK(json::parse(result.out) == body);
}

TEST_CASE("estimate-gradual runs the five step pipeline by default") {
    const std::filesystem::path dir = scratch_dir();
    REQUIRE(run_cli("--seed 9 --out-dir " + quoted(dir) +
                    " simulate --n 400 --kn 20 -o grad.csv")
                .exit_code == 0);

    const RunResult result = run_cli(
        "--seed 9 --out-dir " + quoted(dir) + " estimate-gradual --input " +
        quoted(dir / "grad.csv") + " --kn 20 -B 40 --report estimate.json");
    REQUIRE(result.exit_code == 0);

    const json body = json::parse(slurp(dir / "estimate.json"));
    const json& estimate = body.at("estimate");
    CHECK(estimate.at("method") == "five_step");
    CHECK(estimate.at("theta_hat").get<double>() >= 0.0);
    CHECK(estimate.at("theta_hat").get<double>() <= 1.0);
    CHECK(estimate.at("threshold_used").is_number());
    CHECK(estimate.at("threshold_initial").is_number());
    CHECK(estimate.at("intermediate").is_number());
    CHECK(estimate.at("curve").is_array());

    const RunResult fixed = run_cli(
        "--seed 9 --out-dir " + quoted(dir) + " estimate-gradual --input " +
        quoted(dir / "grad.csv") + " --kn 20 --lambda 1e9 --report fixed.json");
    REQUIRE(fixed.exit_code == 0);
    const json fixed_estimate = json::parse(slurp(dir / "fixed.json")).at("estimate");
    CHECK(fixed_estimate.at("method") == "gradual_threshold");
    CHECK(fixed_estimate.at("theta_hat").get<double>() == 1.0);
}

TEST_CASE("failures exit nonzero with a JSON error on stderr") {
    const RunResult missing = run_cli("test-abrupt --input /nonexistent/data.csv");
    CHECK(missing.exit_code == 1);
    CHECK(json::parse(missing.err).contains("error"));

    const RunResult unknown = run_cli("frobnicate");
    CHECK(unknown.exit_code != 0);
}
