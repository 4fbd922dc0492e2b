#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "rcd/cover.hpp"
#include "rcd/problem.hpp"

namespace rcd {

enum class PruneClass { negative, suspicious };

enum class SolveStatus { converged, level_cap, ball_cap };

struct SolverConfig {
    // Target precision: on convergence the returned point is within delta of
    // the source (in the problem norm), provided the source is unique and
    // lies in the initial ball.
    double delta = 1e-3;
    // Prune statistic.  D (default), D1 and DI are all 2-Lipschitz, which is
    // what the prune test's soundness rests on; D2 is rejected.
    DefectKind defect_kind = DefectKind::D;
    // Subtracted from the defect before comparing against 2r, so floating-
    // point error can only ever keep a ball, never wrongly discard the one
    // holding the source.
    double prune_slack = 1e-9;
    int max_level = 60;
    bool dedupe = true;
    // Cap on a level's suspicious-ball buffer (counted before and after
    // deduplication).  Exceeding it ends the run with status ball_cap and a
    // partial result.
    std::size_t ball_cap = 10'000'000;
    int threads = 1;
    // Observation hook invoked once per level (including level 0) with the
    // level index, ball radius, and suspicious centers as a flat buffer of
    // count * m doubles.  Used by tests and diagnostics; leave empty
    // otherwise.  Called from the coordinating thread only.
    std::function<void(int level, double radius, const std::vector<double>& centers)> on_level;
};

struct LevelStats {
    int level = 0;
    double radius = 0.0;
    std::size_t ball_count = 0;
    // Range of the prune statistic over this level's suspicious centers
    // (recorded before deduplication).
    double min_defect = 0.0;
    double max_defect = 0.0;
};

struct SolveResult {
    Point approx;
    double emission_time = 0.0;
    SolveStatus status = SolveStatus::converged;
    std::vector<LevelStats> levels;
};

struct NoisyConfig {
    // Hard bound on the per-sensor time perturbation: recorded times are
    // assumed to differ from the true ones by at most gamma.
    double gamma = 0.0;
    SolverConfig base;
};

// Ball classification: negative iff 2 * b.radius < defect(b.center) - slack,
// which certifies (up to the slack) that the source is not in b.
PruneClass prune_test(const SRProblem& problem, const Ball& b, const SolverConfig& cfg);

// Halting condition: all pairwise center distances strictly below (2/3) *
// delta and level radius strictly below delta / 3; then every center is
// within delta of the source.  The pairwise check is exact (with early exit)
// for up to 10^4 balls; beyond that a conservative surrogate is used: the
// norm of the coordinate-wise spread, which upper-bounds the diameter and
// never says "stop" when the exact check would not.
bool stopping_check(const CoverLevel& level, const NormSpec& spec, double delta);

// The refining-cover-by-defect process: starting from the initial ball,
// repeatedly cover every suspicious ball by half-radius balls, discard
// children that the prune test proves empty of the source, and stop per
// stopping_check.  On convergence approx is the lexicographically smallest
// final center and lies within delta of the source.  Requires a unique
// source inside the initial ball (not verifiable from the data; the caller
// asserts it).  Throws EmptyCoverError if a level loses all balls, which
// signals a violated precondition.
SolveResult rcd_solve(const SRProblem& problem, const SolverConfig& cfg);

// Noise-tolerant variant: prunes on |D(c) - 2*gamma| computed from the
// recorded (noisy) times, halts on the radius condition alone, and returns
// the coordinate-wise mean of the final centers.  No precision guarantee is
// claimed; the final-level stats serve as a quality indicator.  With
// gamma = 0 the pruning decisions coincide with rcd_solve's.
SolveResult noisy_solve(const SRProblem& problem, const NoisyConfig& cfg);

}  // namespace rcd
