#pragma once

#include <cstdint>
#include <functional>
#include <utility>

#include "rcd/problem.hpp"

namespace rcd {

// Exhaustive-search oracle over an axis-aligned grid.  Deliberately
// independent of the cover/solver machinery so the two can cross-check each
// other.
struct GridOracleConfig {
    double step = 1e-2;
    Ball bounds;
    int threads = 1;
};

// Finite-difference steepest descent on D2.  The defaults reproduce the
// bundled benchmark experiments, which start the descent at a sensor.
struct GradConfig {
    Point start;
    double fd_step = 1e-6;
    double step_init = 1.0;
    double shrink = 0.5;
    double tol_grad = 1e-10;
    int max_iter = 100'000;
    // Optional observation hook: called after every accepted step with the
    // current point and its D2 value (and once with the start).
    std::function<void(const Point&, double)> on_iterate;
};

struct GradResult {
    Point x;
    double value = 0.0;
    int iterations = 0;
};

// Evaluates the defect at every grid point center + step * i (i integer
// vectors) lying within bounds (inflated by one grid cell, so sources near
// the boundary stay representable) and returns the minimizing point and its
// value.  Ties break to the lexicographically smallest point.  Throws
// CapacityError when the grid would exceed 10^8 points.
std::pair<Point, double> grid_argmin_defect(const SRProblem& problem, DefectKind kind,
                                            const GridOracleConfig& cfg);

// Steepest descent on D2 with central differences and Armijo backtracking
// (constant 1e-4, factor cfg.shrink).  Stops when the gradient max-norm
// falls below tol_grad, when no decrease is found down to step 1e-18, or at
// max_iter.  D2 is non-increasing along the iterates.  Stencil points that
// land within 1e-9 of a sensor (where the metric has a kink) are nudged off
// it along the stencil axis.
GradResult gradient_descent_D2(const SRProblem& problem, const GradConfig& cfg);

// Monte-Carlo local-minimality check: true iff defect(x) <= defect(x + u) +
// 1e-12 for `samples` random perturbations with ||u|| <= radius (in the
// problem norm).  samples must be >= 100; draws are deterministic per seed.
bool verify_local_min(const SRProblem& problem, DefectKind kind, const Point& x,
                      double radius, int samples, std::uint64_t seed = 0x5eeded);

}  // namespace rcd
