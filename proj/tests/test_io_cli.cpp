#include <cmath>
#include <cstdlib>
#include <doctest.h>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include <json.hpp>

#include "rcd/errors.hpp"
#include "rcd/geometry.hpp"
#include "rcd/io.hpp"
#include "rcd/presets.hpp"
#include "rcd/solver.hpp"

using namespace rcd;
using json = nlohmann::json;

namespace {

namespace fs = std::filesystem;

// Directory for files written by the suite, under the test working directory.
fs::path tmp_dir() {
    static const fs::path dir = [] {
        fs::path d = "cli_tmp";
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Path of the CLI binary under test, or empty when the harness did not
// provide one (the subprocess tests then skip).
std::string cli_or_empty() {
    const char* env = std::getenv("RCD_CLI");
    return env ? std::string(env) : std::string();
}

struct RunOut {
    int code = -1;
    std::string out;  // stdout and stderr, merged
};

RunOut run_cli(const std::string& cli, const std::string& args, const std::string& tag) {
    const fs::path cap = tmp_dir() / (tag + ".log");
    const std::string cmd = "\"" + cli + "\" " + args + " > \"" + cap.string() + "\" 2>&1";
    const int st = std::system(cmd.c_str());
    RunOut r;
    r.code = (st == -1) ? -1 : (WIFEXITED(st) ? WEXITSTATUS(st) : -2);
    r.out = read_file(cap);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

void check_problems_equal(const ProblemFile& a, const ProblemFile& b) {
    CHECK(a.problem.norm.m == b.problem.norm.m);
    CHECK(a.problem.norm.p == b.problem.norm.p);
    REQUIRE(a.problem.sensors.size() == b.problem.sensors.size());
    for (std::size_t i = 0; i < a.problem.sensors.size(); ++i)
        for (std::size_t j = 0; j < a.problem.sensors[i].size(); ++j)
            CHECK(a.problem.sensors[i][j] == b.problem.sensors[i][j]);
    REQUIRE(a.problem.times.size() == b.problem.times.size());
    for (std::size_t i = 0; i < a.problem.times.size(); ++i)
        CHECK(a.problem.times[i] == b.problem.times[i]);
    for (std::size_t j = 0; j < a.problem.initial_ball.center.size(); ++j)
        CHECK(a.problem.initial_ball.center[j] == b.problem.initial_ball.center[j]);
    CHECK(a.problem.initial_ball.radius == b.problem.initial_ball.radius);
    REQUIRE(a.truth.has_value() == b.truth.has_value());
    if (a.truth) {
        for (std::size_t j = 0; j < a.truth->source.size(); ++j)
            CHECK(a.truth->source[j] == b.truth->source[j]);
        CHECK(a.truth->emission_time == b.truth->emission_time);
    }
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("io: problem files round-trip bit for bit") {
    const ProblemFile pf = preset_example1();
    const std::string s1 = problem_to_string(pf);
    const ProblemFile back = problem_from_string(s1);
    check_problems_equal(pf, back);
    CHECK(problem_to_string(back) == s1);
}

TEST_CASE("io: infinite p, blind files, and awkward doubles survive the round trip") {
    ProblemFile pf;
    pf.problem.norm = NormSpec{p_infinity, 2};
    pf.problem.sensors = {{0.1, 1.0 / 3.0}, {3.141592653589793, -2.5e-17}, {-7.25, 0.875}};
    pf.problem.times = {0.25, 1e-17, -3.5};
    pf.problem.initial_ball = Ball{Point{0.1, -0.2}, 0.5};
    pf.truth.reset();

    const std::string s1 = problem_to_string(pf);
    const ProblemFile back = problem_from_string(s1);
    check_problems_equal(pf, back);
    CHECK_FALSE(back.truth.has_value());
    CHECK(std::isinf(back.problem.norm.p));
    CHECK(problem_to_string(back) == s1);
    // The exponent is stored as a string, not a JSON number.
    CHECK(contains(s1, "\"inf\""));
}

TEST_CASE("io: malformed problem text is rejected") {
    CHECK_THROWS_AS(problem_from_string("hello"), std::invalid_argument);
    CHECK_THROWS_AS(problem_from_string("{}"), std::invalid_argument);

    const std::string good = problem_to_string(preset_example1());
    auto patched = [&](auto&& mutate) {
        json j = json::parse(good);
        mutate(j);
        return j.dump();
    };
    // Unknown format version.
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j["format"] = 2; })),
                    std::invalid_argument);
    // Structurally missing pieces.
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j.erase("times"); })),
                    std::invalid_argument);
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j.erase("sensors"); })),
                    std::invalid_argument);
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j["times"].erase(0); })),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        problem_from_string(patched([](json& j) { j["truth"]["source"] = {1.0}; })),
        std::invalid_argument);
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j["truth"].erase("t0"); })),
                    std::invalid_argument);
    // Invariant violations caught by validation.
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j["p"] = 0.5; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(problem_from_string(patched([](json& j) { j["p"] = "garbage"; })),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        problem_from_string(patched([](json& j) { j["initial_ball"]["radius"] = 0.0; })),
        std::invalid_argument);
}

TEST_CASE("io: result serialization exposes exactly the requested fields") {
    const ProblemFile pf = preset_example1();
    SolverConfig cfg;
    cfg.delta = 1e-2;
    const SolveResult res = rcd_solve(pf.problem, cfg);
    REQUIRE(res.status == SolveStatus::converged);

    const json j = json::parse(result_to_string(res, cfg, 0.0, std::nullopt));
    CHECK(j.at("format").get<int>() == 1);
    CHECK(j.at("delta").get<double>() == 1e-2);
    CHECK(j.at("defect").get<std::string>() == "D");
    CHECK(j.at("status").get<std::string>() == "converged");
    CHECK_FALSE(j.contains("gamma"));            // omitted when zero
    CHECK_FALSE(j.contains("wall_time_seconds"));
    CHECK_FALSE(j.contains("truth_distance"));
    REQUIRE(j.at("approx").size() == 2);
    CHECK(j.at("approx")[0].get<double>() == res.approx[0]);
    CHECK(j.at("approx")[1].get<double>() == res.approx[1]);
    CHECK(j.at("emission_time").get<double>() == res.emission_time);
    REQUIRE(j.at("levels").size() == res.levels.size());
    CHECK(j.at("levels")[0].at("k").get<int>() == 0);
    CHECK(j.at("levels")[0].at("r").get<double>() == 32.0);
    CHECK(j.at("levels")[0].at("balls").get<std::size_t>() == 1);

    const json j2 = json::parse(result_to_string(res, cfg, 1e-3, 0.25, 6.47e-5));
    CHECK(j2.at("gamma").get<double>() == 1e-3);
    CHECK(j2.at("wall_time_seconds").get<double>() == 0.25);
    CHECK(j2.at("truth_distance").get<double>() == 6.47e-5);

    SolverConfig capped = cfg;
    capped.delta = 1e-9;
    capped.max_level = 3;
    const SolveResult partial = rcd_solve(pf.problem, capped);
    const json j3 = json::parse(result_to_string(partial, capped, 0.0, std::nullopt));
    CHECK(j3.at("status").get<std::string>() == "level-cap");
}

TEST_CASE("io: canonical names round-trip and bad names are rejected") {
    for (const DefectKind k : {DefectKind::D, DefectKind::D1, DefectKind::D2, DefectKind::DI})
        CHECK(parse_defect_kind(defect_kind_name(k)) == k);
    CHECK(defect_kind_name(DefectKind::D) == "D");
    CHECK(defect_kind_name(DefectKind::D1) == "D1");
    CHECK(defect_kind_name(DefectKind::D2) == "D2");
    CHECK(defect_kind_name(DefectKind::DI) == "DI");
    CHECK_THROWS_AS(parse_defect_kind("bogus"), std::invalid_argument);
    CHECK_THROWS_AS(parse_defect_kind(""), std::invalid_argument);
    CHECK(status_name(SolveStatus::converged) == "converged");
    CHECK(status_name(SolveStatus::level_cap) == "level-cap");
    CHECK(status_name(SolveStatus::ball_cap) == "ball-cap");
}

TEST_CASE("io: file helpers save and load losslessly") {
    const ProblemFile pf = preset_example2();
    const fs::path path = tmp_dir() / "lib_save.json";
    save_problem(path.string(), pf);
    const ProblemFile back = load_problem(path.string());
    check_problems_equal(pf, back);
    CHECK(read_file(path) == problem_to_string(pf));
    CHECK_THROWS_AS(load_problem((tmp_dir() / "no_such_file.json").string()),
                    std::runtime_error);
}

TEST_CASE("cli: gen writes valid instances, with and without ground truth") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path g2 = tmp_dir() / "gen_m2.json";
    const fs::path g1 = tmp_dir() / "gen_m1.json";
    const fs::path gb = tmp_dir() / "gen_blind.json";

    RunOut r = run_cli(cli, "gen -o \"" + g2.string() + "\" --seed 5", "gen_m2");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "wrote"));
    const ProblemFile p2 = load_problem(g2.string());
    CHECK(p2.problem.norm.m == 2);
    CHECK(p2.problem.sensors.size() == 4);  // m + 2 uniqueness layout
    CHECK(p2.truth.has_value());

    r = run_cli(cli, "gen -o \"" + g1.string() + "\" --m 1 --seed 7", "gen_m1");
    CHECK(r.code == 0);
    const ProblemFile p1 = load_problem(g1.string());
    CHECK(p1.problem.norm.m == 1);
    CHECK(p1.problem.sensors.size() == 3);

    // Same seed, blind: identical instance, truth block omitted.
    r = run_cli(cli, "gen -o \"" + gb.string() + "\" --seed 5 --blind", "gen_blind");
    CHECK(r.code == 0);
    const ProblemFile pb = load_problem(gb.string());
    CHECK_FALSE(pb.truth.has_value());
    REQUIRE(pb.problem.sensors.size() == p2.problem.sensors.size());
    for (std::size_t i = 0; i < pb.problem.times.size(); ++i)
        CHECK(pb.problem.times[i] == p2.problem.times[i]);
}

TEST_CASE("cli: solve reports the truth distance and solves blind twins identically") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path g = tmp_dir() / "tw.json";
    const fs::path gb = tmp_dir() / "tw_blind.json";
    REQUIRE(run_cli(cli, "gen -o \"" + g.string() + "\" --seed 11", "tw_gen").code == 0);
    REQUIRE(run_cli(cli, "gen -o \"" + gb.string() + "\" --seed 11 --blind", "tw_genb").code == 0);

    const fs::path r1 = tmp_dir() / "tw_res.json";
    const fs::path rb = tmp_dir() / "tw_res_blind.json";
    RunOut a = run_cli(cli, "solve \"" + g.string() + "\" -o \"" + r1.string() +
                                "\" --delta 1e-3 --no-timing", "tw_solve");
    CHECK(a.code == 0);
    CHECK(contains(a.out, "status: converged"));
    const json ja = json::parse(read_file(r1));
    REQUIRE(ja.contains("truth_distance"));
    CHECK(ja.at("truth_distance").get<double>() <= 1e-3);

    RunOut b = run_cli(cli, "solve \"" + gb.string() + "\" -o \"" + rb.string() +
                                "\" --delta 1e-3 --no-timing", "tw_solveb");
    CHECK(b.code == 0);
    const json jb = json::parse(read_file(rb));
    CHECK_FALSE(jb.contains("truth_distance"));
    // Withholding the truth block cannot change the computation.
    CHECK(ja.at("approx") == jb.at("approx"));
    CHECK(ja.at("levels") == jb.at("levels"));
}

TEST_CASE("cli: gamma zero and omitted timing give byte-stable files") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path ra = tmp_dir() / "stable_a.json";
    const fs::path rb = tmp_dir() / "stable_b.json";
    const fs::path rt = tmp_dir() / "stable_timed.json";
    REQUIRE(run_cli(cli, "solve --preset example1 -o \"" + ra.string() +
                             "\" --gamma 0 --no-timing", "stable_a").code == 0);
    REQUIRE(run_cli(cli, "solve --preset example1 -o \"" + rb.string() + "\" --no-timing",
                    "stable_b").code == 0);
    CHECK(read_file(ra) == read_file(rb));

    REQUIRE(run_cli(cli, "solve --preset example1 -o \"" + rt.string() + "\"", "stable_t")
                .code == 0);
    const json jt = json::parse(read_file(rt));
    REQUIRE(jt.contains("wall_time_seconds"));
    CHECK(jt.at("wall_time_seconds").get<double>() >= 0.0);
}

TEST_CASE("cli: RCD_THREADS env matches an explicit --threads 1 byte for byte") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path re = tmp_dir() / "env_threads.json";
    const fs::path rt = tmp_dir() / "one_thread.json";
    const std::string env_cmd = "RCD_THREADS=8 \"" + cli + "\" solve --preset example1 -o \"" +
                                re.string() + "\" --no-timing > /dev/null 2>&1";
    REQUIRE(std::system(env_cmd.c_str()) == 0);
    REQUIRE(run_cli(cli, "solve --preset example1 --threads 1 -o \"" + rt.string() +
                             "\" --no-timing", "one_thread").code == 0);
    CHECK(read_file(re) == read_file(rt));
}

TEST_CASE("cli: oracle locates the benchmark source and honors the grid cap") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    RunOut r = run_cli(cli, "oracle --preset example1 --step 0.25", "oracle_ok");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "argmin: (0, 0)"));
    CHECK(contains(r.out, "truth_distance: 0"));

    r = run_cli(cli, "oracle --preset example1 --step 1e-5", "oracle_cap");
    CHECK(r.code == 2);
    CHECK(contains(r.out, "error"));
}

TEST_CASE("cli: gradient descent reproduces the clustered-sensor minimum") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path csv = tmp_dir() / "gm_profile.csv";
    const RunOut r =
        run_cli(cli, "gm --preset example2 -o \"" + csv.string() + "\"", "gm_ex2");
    CHECK(r.code == 0);
    CHECK(contains(r.out, "endpoint: (2.039"));
    CHECK(contains(r.out, "D2: 0.0031"));
    const std::string profile = read_file(csv);
    CHECK(profile.rfind("t,x1,x2,D2\n", 0) == 0);  // header line
}

TEST_CASE("cli: invalid input exits 1, caps exit 2, help exits 0") {
    const std::string cli = cli_or_empty();
    if (cli.empty()) { MESSAGE("RCD_CLI not set; skipping"); return; }
    const fs::path bad = tmp_dir() / "bad.json";
    {
        std::ofstream out(bad);
        out << "garbage\n";
    }
    CHECK(run_cli(cli, "solve \"" + bad.string() + "\"", "bad_file").code == 1);
    CHECK(run_cli(cli, "solve \"" + (tmp_dir() / "missing.json").string() + "\"",
                  "missing_file").code == 1);
    CHECK(run_cli(cli, "", "no_subcommand").code == 1);
    CHECK(run_cli(cli, "solve --preset example1 --delta -1", "bad_delta").code == 1);
    CHECK(run_cli(cli, "gen --m 2", "gen_without_out").code == 1);
    CHECK(run_cli(cli, "--help", "help").code == 0);

    const fs::path rc = tmp_dir() / "capped.json";
    const RunOut r = run_cli(cli, "solve --preset example1 --delta 1e-9 --max-level 3 -o \"" +
                                      rc.string() + "\" --no-timing", "level_capped");
    CHECK(r.code == 2);
    CHECK(json::parse(read_file(rc)).at("status").get<std::string>() == "level-cap");
}

}  // TEST_SUITE("io_cli")
