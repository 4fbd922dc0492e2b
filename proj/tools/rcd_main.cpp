// Command-line front end: generate instances, run the solver, cross-check
// against the brute-force grid oracle, and run gradient-descent experiments.
//
// Exit codes: 0 success (solve: converged), 1 invalid input, 2 resource cap
// (solve: level-cap or ball-cap status; oracle: grid too large).

#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rcd/analysis.hpp"
#include "rcd/errors.hpp"
#include "rcd/geometry.hpp"
#include "rcd/io.hpp"
#include "rcd/presets.hpp"
#include "rcd/problem.hpp"
#include "rcd/solver.hpp"

namespace {

using namespace rcd;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string fmt_point(const Point& x) {
    std::string out = "(";
    for (std::size_t j = 0; j < x.size(); ++j) {
        if (j) out += ", ";
        out += fmt(x[j]);
    }
    return out + ")";
}

double parse_p(const std::string& text) {
    if (text == "inf" || text == "Inf" || text == "INF") return p_infinity;
    try {
        std::size_t pos = 0;
        const double p = std::stod(text, &pos);
        if (pos != text.size()) throw std::invalid_argument("");
        return p;
    } catch (const std::exception&) {
        throw std::invalid_argument("--p: expected a number >= 1 or \"inf\", got \"" + text + "\"");
    }
}

Point parse_point(const std::string& text, int m, const char* what) {
    Point out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t pos = 0;
            out.push_back(std::stod(item, &pos));
            if (pos != item.size()) throw std::invalid_argument("");
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(what) + ": bad coordinate \"" + item + "\"");
        }
    }
    if (m > 0 && static_cast<int>(out.size()) != m)
        throw std::invalid_argument(std::string(what) + ": expected " + std::to_string(m) +
                                    " comma-separated coordinates, got " +
                                    std::to_string(out.size()));
    return out;
}

double uniform01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

Point sample_in_ball(std::mt19937_64& rng, const NormSpec& spec, const Ball& ball) {
    Point u(spec.m);
    for (;;) {
        for (int j = 0; j < spec.m; ++j) u[j] = (2.0 * uniform01(rng) - 1.0) * ball.radius;
        if (norm(spec, u.data()) <= ball.radius) break;
    }
    for (int j = 0; j < spec.m; ++j) u[j] += ball.center[j];
    return u;
}

ProblemFile load_input(const std::string& path, const std::string& preset) {
    if (!preset.empty()) {
        if (!path.empty())
            throw std::invalid_argument("give either a problem file or --preset, not both");
        return preset_by_name(preset);
    }
    if (path.empty()) throw std::invalid_argument("missing problem file (or --preset)");
    return load_problem(path);
}

struct GenArgs {
    std::string out, preset, p_text = "2", layout = "unique";
    std::string source_text, center_text;
    std::vector<std::string> sensor_texts;
    int m = 2;
    double t0 = 0.0, radius = 32.0;
    bool blind = false;
};

int run_gen(const GenArgs& a, std::uint64_t seed, bool quiet) {
    ProblemFile doc;
    if (!a.preset.empty()) {
        doc = preset_by_name(a.preset);
    } else {
        if (a.m < 1) throw std::invalid_argument("--m must be at least 1");
        const NormSpec spec{parse_p(a.p_text), a.m};
        Ball ball;
        ball.center = a.center_text.empty() ? Point(a.m, 0.0)
                                            : parse_point(a.center_text, a.m, "--ball-center");
        if (!(a.radius > 0.0)) throw std::invalid_argument("--ball-radius must be positive");
        ball.radius = a.radius;

        std::mt19937_64 rng(seed);
        GroundTruth gt;
        gt.source = a.source_text.empty() ? sample_in_ball(rng, spec, ball)
                                          : parse_point(a.source_text, a.m, "--source");
        gt.emission_time = a.t0;

        SRProblem& pb = doc.problem;
        pb.norm = spec;
        pb.initial_ball = ball;
        if (a.layout == "custom") {
            if (a.sensor_texts.empty())
                throw std::invalid_argument("--layout custom requires at least one --sensor");
            for (const std::string& s : a.sensor_texts)
                pb.sensors.push_back(parse_point(s, a.m, "--sensor"));
            pb.times = forward_simulate(gt, pb.sensors, spec);
            validate_problem(pb);
        } else {
            // Random affinely independent base; a degenerate draw is retried.
            int attempts = 0;
            for (;;) {
                try {
                    std::vector<Point> base(a.m + 1, Point(a.m));
                    for (Point& b : base)
                        for (int j = 0; j < a.m; ++j)
                            b[j] = ball.center[j] + (2.0 * uniform01(rng) - 1.0) * ball.radius;
                    pb.sensors = make_unique_layout(a.m, base);
                    pb.times = forward_simulate(gt, pb.sensors, spec);
                    validate_problem(pb);
                    break;
                } catch (const DegenerateInputError&) {
                    pb.sensors.clear();
                    pb.times.clear();
                    if (++attempts >= 100) throw;
                }
            }
        }
        doc.truth = gt;
    }
    if (a.blind) doc.truth.reset();
    save_problem(a.out, doc);
    if (!quiet) {
        std::cout << "wrote " << a.out << ": m=" << doc.problem.norm.m << ", p="
                  << (std::isinf(doc.problem.norm.p) ? std::string("inf") : fmt(doc.problem.norm.p))
                  << ", " << doc.problem.sensors.size() << " sensors"
                  << (doc.truth ? "" : ", no ground truth") << "\n";
    }
    return 0;
}

struct SolveArgs {
    std::string path, preset, out, defect = "D";
    double delta = 1e-3, gamma = 0.0, slack = 1e-9;
    int max_level = 60;
    std::size_t ball_cap = 10'000'000;
    bool no_dedupe = false, no_timing = false;
};

int run_solve(const SolveArgs& a, int threads, bool quiet) {
    const ProblemFile doc = load_input(a.path, a.preset);

    SolverConfig cfg;
    cfg.delta = a.delta;
    cfg.defect_kind = parse_defect_kind(a.defect);
    cfg.prune_slack = a.slack;
    cfg.max_level = a.max_level;
    cfg.dedupe = !a.no_dedupe;
    cfg.ball_cap = a.ball_cap;
    cfg.threads = threads;

    const auto t_start = std::chrono::steady_clock::now();
    SolveResult result;
    if (a.gamma > 0.0) {
        NoisyConfig ncfg;
        ncfg.gamma = a.gamma;
        ncfg.base = cfg;
        result = noisy_solve(doc.problem, ncfg);
    } else {
        result = rcd_solve(doc.problem, cfg);
    }
    const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - t_start;

    std::optional<double> truth_dist;
    if (doc.truth)
        truth_dist = distance(doc.problem.norm, result.approx, doc.truth->source);

    if (!a.out.empty()) {
        const std::optional<double> wall =
            a.no_timing ? std::nullopt : std::optional<double>(elapsed.count());
        save_text(a.out, result_to_string(result, cfg, a.gamma, wall, truth_dist));
    }
    if (!quiet) {
        const LevelStats& last = result.levels.back();
        std::cout << "status: " << status_name(result.status) << "\n"
                  << "levels: " << result.levels.size() << " (final radius " << fmt(last.radius)
                  << ", " << last.ball_count << " balls)\n"
                  << "approx: " << fmt_point(result.approx) << "\n"
                  << "emission_time: " << fmt(result.emission_time) << "\n";
        if (truth_dist) std::cout << "truth_distance: " << fmt(*truth_dist) << "\n";
        if (!a.out.empty()) std::cout << "wrote " << a.out << "\n";
    }
    return result.status == SolveStatus::converged ? 0 : 2;
}

struct OracleArgs {
    std::string path, preset, defect = "D";
    std::string bounds_center_text;
    double step = 1e-2, bounds_radius = 0.0;
};

int run_oracle(const OracleArgs& a, int threads) {
    const ProblemFile doc = load_input(a.path, a.preset);

    GridOracleConfig cfg;
    cfg.step = a.step;
    cfg.threads = threads;
    cfg.bounds = doc.problem.initial_ball;
    if (!a.bounds_center_text.empty())
        cfg.bounds.center = parse_point(a.bounds_center_text, doc.problem.norm.m, "--bounds-center");
    if (a.bounds_radius > 0.0) cfg.bounds.radius = a.bounds_radius;

    if (doc.problem.sensors.size() == 1)
        std::cout << "warning: a single sensor makes the defect identically zero; "
                     "every grid point minimizes it\n";

    const auto [argmin, value] = grid_argmin_defect(doc.problem, parse_defect_kind(a.defect), cfg);
    std::cout << "argmin: " << fmt_point(argmin) << "\n"
              << "value: " << fmt(value) << "\n";
    if (doc.truth)
        std::cout << "truth_distance: "
                  << fmt(distance(doc.problem.norm, argmin, doc.truth->source)) << "\n";
    return 0;
}

struct GmArgs {
    std::string path, preset, out, start_text;
    int start_sensor = 0;  // 1-based; 0 = unset
};

int run_gm(const GmArgs& a, bool quiet) {
    const ProblemFile doc = load_input(a.path, a.preset);
    const SRProblem& pb = doc.problem;

    GradConfig cfg;
    if (!a.start_text.empty() && a.start_sensor > 0)
        throw std::invalid_argument("give either --start or --start-sensor, not both");
    if (!a.start_text.empty()) {
        cfg.start = parse_point(a.start_text, pb.norm.m, "--start");
    } else {
        const int idx = a.start_sensor > 0 ? a.start_sensor : 1;
        if (idx > static_cast<int>(pb.sensors.size()))
            throw std::invalid_argument("--start-sensor: index " + std::to_string(idx) +
                                        " out of range (have " +
                                        std::to_string(pb.sensors.size()) + " sensors)");
        cfg.start = pb.sensors[idx - 1];
    }

    const GradResult res = gradient_descent_D2(pb, cfg);

    if (!a.out.empty()) {
        // 1-D defect profile along the segment start -> endpoint, for plotting.
        std::string csv = "t";
        for (int j = 1; j <= pb.norm.m; ++j) csv += ",x" + std::to_string(j);
        csv += ",D2\n";
        DefectEval eval(pb, DefectKind::D2);
        Point x(pb.norm.m);
        for (int i = 0; i <= 100; ++i) {
            const double t = static_cast<double>(i) / 100.0;
            for (int j = 0; j < pb.norm.m; ++j)
                x[j] = cfg.start[j] + t * (res.x[j] - cfg.start[j]);
            csv += fmt(t);
            for (int j = 0; j < pb.norm.m; ++j) csv += "," + fmt(x[j]);
            csv += "," + fmt(eval(x.data())) + "\n";
        }
        save_text(a.out, csv);
    }
    if (!quiet) {
        std::cout << "endpoint: " << fmt_point(res.x) << "\n"
                  << "D2: " << fmt(res.value) << "\n"
                  << "iterations: " << res.iterations << "\n";
        if (doc.truth)
            std::cout << "truth_distance: " << fmt(distance(pb.norm, res.x, doc.truth->source))
                      << "\n";
        if (!a.out.empty()) std::cout << "wrote " << a.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sound ranging by refining a cover by defect: localize a wave source\n"
                 "from sensor positions and arrival times in an l_p norm."};
    app.require_subcommand(1);

    int threads = 1;
    bool quiet = false;
    std::uint64_t seed = 1;
    app.add_option("--threads", threads, "Worker thread count (default 1)")
        ->envname("RCD_THREADS");
    app.add_flag("--quiet", quiet, "Suppress informational output");
    app.add_option("--seed", seed, "Seed for random generation (gen)");

    GenArgs ga;
    CLI::App* gen = app.add_subcommand("gen", "Generate a problem instance file");
    gen->fallthrough();
    gen->add_option("-o,--out", ga.out, "Output problem file")->required();
    gen->add_option("--m", ga.m, "Space dimension (default 2)");
    gen->add_option("--p", ga.p_text, "Norm exponent >= 1, or \"inf\" (default 2)");
    gen->add_option("--layout", ga.layout, "unique | custom (default unique)")
        ->check(CLI::IsMember({"unique", "custom"}));
    gen->add_option("--source", ga.source_text,
                    "Source \"x1,x2,...\" (default: seeded random point in the ball)");
    gen->add_option("--t0", ga.t0, "Emission time (default 0)");
    gen->add_option("--ball-center", ga.center_text, "Search-ball center (default origin)");
    gen->add_option("--ball-radius", ga.radius, "Search-ball radius (default 32)");
    gen->add_option("--sensor", ga.sensor_texts, "Sensor \"x1,x2,...\" (repeatable; layout=custom)");
    gen->add_option("--preset", ga.preset, "example1 | example2 (bypasses generation)");
    gen->add_flag("--blind", ga.blind, "Omit the ground-truth block");

    SolveArgs sa;
    CLI::App* solve = app.add_subcommand("solve", "Run the refining-cover solver on a problem file");
    solve->fallthrough();
    solve->add_option("problem", sa.path, "Problem file");
    solve->add_option("--preset", sa.preset, "example1 | example2 instead of a file");
    solve->add_option("-o,--out", sa.out, "Result file to write");
    solve->add_option("--delta", sa.delta, "Target precision (default 1e-3)");
    solve->add_option("--defect", sa.defect, "Prune statistic: D | D1 | DI (default D)");
    solve->add_option("--gamma", sa.gamma, "Noise bound; > 0 switches to the noisy variant");
    solve->add_option("--slack", sa.slack, "Prune slack (default 1e-9)");
    solve->add_option("--max-level", sa.max_level, "Refinement level cap (default 60)");
    solve->add_option("--ball-cap", sa.ball_cap, "Live-ball cap (default 1e7)");
    solve->add_flag("--no-dedupe", sa.no_dedupe, "Keep duplicate child centers");
    solve->add_flag("--no-timing", sa.no_timing,
                    "Omit wall time from the result file (byte-stable output)");

    OracleArgs oa;
    CLI::App* oracle = app.add_subcommand("oracle", "Brute-force grid search for the defect minimum");
    oracle->fallthrough();
    oracle->add_option("problem", oa.path, "Problem file");
    oracle->add_option("--preset", oa.preset, "example1 | example2 instead of a file");
    oracle->add_option("--step", oa.step, "Grid step (default 1e-2)");
    oracle->add_option("--defect", oa.defect, "Statistic: D | D1 | D2 | DI (default D)");
    oracle->add_option("--bounds-center", oa.bounds_center_text,
                       "Grid region center (default: the problem's initial ball)");
    oracle->add_option("--bounds-radius", oa.bounds_radius, "Grid region radius");

    GmArgs ma;
    CLI::App* gm = app.add_subcommand("gm", "Gradient descent on the D2 defect");
    gm->fallthrough();
    gm->add_option("problem", ma.path, "Problem file");
    gm->add_option("--preset", ma.preset, "example1 | example2 instead of a file");
    gm->add_option("--start", ma.start_text, "Start point \"x1,x2,...\"");
    gm->add_option("--start-sensor", ma.start_sensor, "Start from sensor #k, 1-based (default 1)");
    gm->add_option("-o,--out", ma.out, "CSV defect profile along start->endpoint");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try {
        if (threads < 1) threads = 1;
        if (gen->parsed()) return run_gen(ga, seed, quiet);
        if (solve->parsed()) return run_solve(sa, threads, quiet);
        if (oracle->parsed()) return run_oracle(oa, threads);
        if (gm->parsed()) return run_gm(ma, quiet);
    } catch (const CapacityError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
