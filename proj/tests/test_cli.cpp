// End-to-end checks of the gravphase binary: exit codes, CSV artifacts,
// and byte-level determinism of repeated runs.

#include "doctest.h"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "gravphase/text.hpp"

namespace fs = std::filesystem;

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output;  // stdout + stderr
};

RunResult run_cli(const std::string& args, const std::string& env = "") {
    static int counter = 0;
    const fs::path log = fs::path("cli_test_scratch") /
                         ("log_" + std::to_string(counter++) + ".txt");
    fs::create_directories(log.parent_path());
    const std::string cmd = (env.empty() ? "" : env + " ") +
                            std::string(GRAVPHASE_CLI_PATH) + " " + args + " > " +
                            log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    RunResult r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    std::ifstream is(log);
    std::stringstream buf;
    buf << is.rdbuf();
    r.output = buf.str();
    return r;
}

void write_file(const fs::path& p, const std::string& text) {
    fs::create_directories(p.parent_path());
    std::ofstream os(p);
    os << text;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p);
    std::stringstream buf;
    buf << is.rdbuf();
    return buf.str();
}

const fs::path scratch{"cli_test_scratch"};

}  // namespace

TEST_CASE("cli: drop emits the 5/6 phase at t=1") {
    write_file(scratch / "drop.cfg", "preset=dimensionless\nd=1.0\ntimes=0.25,0.5,1.0\n");
    const RunResult r = run_cli("--config " + (scratch / "drop.cfg").string() +
                                " --out " + (scratch / "out1").string() + " drop");
    CHECK(r.exit_code == 0);

    const std::string csv = slurp(scratch / "out1" / "drop_analytic.csv");
    REQUIRE(csv.rfind("t,phase_rad,method,overlap_mag\n", 0) == 0);
    double phase_at_1 = 0.0;
    bool found = false;
    std::istringstream lines(csv);
    std::string line;
    std::getline(lines, line);  // header
    while (std::getline(lines, line)) {
        const auto cols = gravphase::split(line, ',');
        REQUIRE(cols.size() == 4);
        if (*gravphase::parse_double(cols[0]) == 1.0) {
            phase_at_1 = *gravphase::parse_double(cols[1]);
            found = true;
        }
    }
    REQUIRE(found);
    CHECK(std::abs(phase_at_1 - 5.0 / 6.0) <= 1e-10);
}

TEST_CASE("cli: identical config gives byte-identical output") {
    write_file(scratch / "det.cfg",
               "preset=dimensionless\nmethod=wavepacket\ntimes=0.5,1.0\n");
    const std::string cfg = (scratch / "det.cfg").string();
    CHECK(run_cli("--config " + cfg + " --out " + (scratch / "a").string() + " drop")
              .exit_code == 0);
    CHECK(run_cli("--config " + cfg + " --out " + (scratch / "b").string() + " drop")
              .exit_code == 0);
    const std::string a = slurp(scratch / "a" / "drop_wavepacket.csv");
    const std::string b = slurp(scratch / "b" / "drop_wavepacket.csv");
    CHECK(!a.empty());
    CHECK(a == b);
}

TEST_CASE("cli: rindler with a=0 emits t_prime = t exactly") {
    write_file(scratch / "r0.cfg", "a=0\ntimes=0.1,0.2,0.4,0.8\n");
    const RunResult r = run_cli("--config " + (scratch / "r0.cfg").string() +
                                " --out " + (scratch / "rout").string() + " rindler");
    CHECK(r.exit_code == 0);
    std::istringstream lines(slurp(scratch / "rout" / "rindler.csv"));
    std::string line;
    std::getline(lines, line);
    CHECK(line == "t,t_prime,delta,cubic_phase_rad");
    while (std::getline(lines, line)) {
        const auto cols = gravphase::split(line, ',');
        REQUIRE(cols.size() == 4);
        CHECK(cols[0] == cols[1]);  // identical strings, not just close values
        CHECK(cols[2] == "0");
        CHECK(cols[3] == "0");
    }
}

TEST_CASE("cli: config errors exit 1 with line numbers, missing file exits 2") {
    write_file(scratch / "bad.cfg", "d=1.0\ng=-1\n");
    const RunResult bad = run_cli("--config " + (scratch / "bad.cfg").string() + " drop");
    CHECK(bad.exit_code == 1);
    CHECK(bad.output.find(":2:") != std::string::npos);
    CHECK(bad.output.find("g >= 0") != std::string::npos);

    const RunResult missing = run_cli("--config no/such/file.cfg drop");
    CHECK(missing.exit_code == 2);
}

TEST_CASE("cli: gauge-check passes with defaults") {
    const RunResult r = run_cli("gauge-check");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("PASS") != std::string::npos);
    CHECK(r.output.find("fidelity") != std::string::npos);
}

TEST_CASE("cli: report runs criteria and an injected violation flips the exit code") {
    const RunResult ok = run_cli("report --only 3,4");
    CHECK(ok.exit_code == 0);
    CHECK(ok.output.find("[PASS] 3.") != std::string::npos);
    CHECK(ok.output.find("[PASS] 4.") != std::string::npos);

    write_file(scratch / "inject.cfg", "tol_method_agree=1e-30\n");
    const RunResult fail = run_cli("--config " + (scratch / "inject.cfg").string() +
                                   " report --only 3");
    CHECK(fail.exit_code == 1);
    CHECK(fail.output.find("[FAIL] 3.") != std::string::npos);
}

TEST_CASE("cli: gr budget on Earth-like numbers") {
    write_file(scratch / "earth.cfg",
               "preset=neutron\nG=6.674e-11\nM=5.97e24\nx=6.37e6\ndelta_h=1.0\ntau=1.0\n");
    const RunResult r = run_cli("--config " + (scratch / "earth.cfg").string() +
                                " --out " + (scratch / "grout").string() + " gr");
    CHECK(r.exit_code == 0);
    std::istringstream lines(slurp(scratch / "grout" / "gr.csv"));
    std::string header, row;
    std::getline(lines, header);
    std::getline(lines, row);
    const auto cols = gravphase::split(row, ',');
    REQUIRE(cols.size() == 8);
    const double dt_series = *gravphase::parse_double(cols[4]);
    CHECK(dt_series == doctest::Approx(1.09e-16).epsilon(5e-3));
}

TEST_CASE("cli: cow, fit, and sweep produce their artifacts") {
    write_file(scratch / "cow.cfg", "preset=dimensionless\ntimes=0.5,1.0\ndelta_h=1.0\n");
    CHECK(run_cli("--config " + (scratch / "cow.cfg").string() + " --out " +
                  (scratch / "cowout").string() + " cow")
              .exit_code == 0);
    const std::string cow_csv = slurp(scratch / "cowout" / "cow.csv");
    CHECK(cow_csv.find("t,phase_rad,method,overlap_mag") == 0);
    CHECK(cow_csv.find("\n1,1,analytic,1\n") != std::string::npos);

    write_file(scratch / "fit.cfg", "preset=dimensionless\n");
    const RunResult fit = run_cli("--config " + (scratch / "fit.cfg").string() +
                                  " --out " + (scratch / "fitout").string() + " fit");
    CHECK(fit.exit_code == 0);
    const std::string fit_csv = slurp(scratch / "fitout" / "fit_analytic.csv");
    CHECK(fit_csv.find("method,c0,c1,c2,c3,rms_residual,condition,t3_ratio") == 0);

    write_file(scratch / "sweep.cfg", "preset=dimensionless\nmasses=1,2\nt_samples=10\n");
    const RunResult sweep =
        run_cli("--config " + (scratch / "sweep.cfg").string() + " --out " +
                (scratch / "sweepout").string() + " sweep");
    CHECK(sweep.exit_code == 0);
    const std::string summary = slurp(scratch / "sweepout" / "sweep_summary.csv");
    CHECK(summary.find("mass,method,c1,c3,rms_residual") == 0);
    // closed form: c1 and c3 double with the mass
    CHECK(fs::exists(scratch / "sweepout" / "sweep_m0_analytic.csv"));
    CHECK(fs::exists(scratch / "sweepout" / "sweep_m1_wavepacket.csv"));
}

TEST_CASE("cli: sweep output does not depend on the thread budget") {
    write_file(scratch / "sw.cfg", "preset=dimensionless\nmasses=0.5,1\nt_samples=10\n");
    const std::string cfg = (scratch / "sw.cfg").string();
    CHECK(run_cli("--config " + cfg + " --out " + (scratch / "sw1").string() +
                  " sweep", "GRAVPHASE_THREADS=1")
              .exit_code == 0);
    CHECK(run_cli("--config " + cfg + " --out " + (scratch / "sw4").string() +
                  " sweep", "GRAVPHASE_THREADS=4")
              .exit_code == 0);
    const std::string s1 = slurp(scratch / "sw1" / "sweep_summary.csv");
    const std::string s4 = slurp(scratch / "sw4" / "sweep_summary.csv");
    CHECK(!s1.empty());
    CHECK(s1 == s4);
}
