#include "rcd/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

constexpr double kGridCap = 1e8;
constexpr double kArmijo = 1e-4;
constexpr double kStepFloor = 1e-18;
constexpr double kSensorExclusion = 1e-9;

struct SlabBest {
    double value = std::numeric_limits<double>::infinity();
    std::vector<double> point;
};

// D2 at a finite-difference stencil point, nudged off any sensor (where the
// distance term has a kink) along the stencil axis.
double d2_stencil(DefectEval& eval, const SRProblem& problem, Point& y, int axis) {
    for (const Point& r : problem.sensors) {
        if (distance(problem.norm, y, r) < kSensorExclusion) {
            y[axis] += 3.0 * kSensorExclusion;
            break;
        }
    }
    return eval(y.data());
}

}  // namespace

std::pair<Point, double> grid_argmin_defect(const SRProblem& problem, DefectKind kind,
                                            const GridOracleConfig& cfg) {
    validate_problem(problem);
    const int m = problem.norm.m;
    if (static_cast<int>(cfg.bounds.center.size()) != m)
        throw std::invalid_argument("grid_argmin_defect: bounds center dimension mismatch");
    if (!(cfg.step > 0.0)) throw std::invalid_argument("grid_argmin_defect: step must be positive");
    if (!(cfg.bounds.radius > 0.0))
        throw std::invalid_argument("grid_argmin_defect: bounds radius must be positive");

    const long K = static_cast<long>(std::floor(cfg.bounds.radius / cfg.step + 1e-12));
    const double per_axis = 2.0 * static_cast<double>(K) + 1.0;
    if (std::pow(per_axis, m) > kGridCap)
        throw CapacityError("grid_argmin_defect: grid of " + std::to_string(per_axis) + "^" +
                            std::to_string(m) + " points exceeds the 1e8 cap");

    const double keep_radius = cfg.bounds.radius + m * cfg.step;
    const Point& c0 = cfg.bounds.center;
    const long slabs = 2 * K + 1;
    std::vector<SlabBest> best(slabs);
    std::atomic<long> next{0};

    auto worker = [&]() {
        DefectEval eval(problem, kind);
        Point x(m);
        std::vector<long> idx(m);
        for (;;) {
            const long si = next.fetch_add(1);
            if (si >= slabs) return;
            SlabBest& out = best[si];
            idx.assign(m, -K);
            idx[0] = -K + si;
            x[0] = c0[0] + static_cast<double>(idx[0]) * cfg.step;
            // Odometer over axes 1..m-1 (axis 0 fixed to this slab).
            for (;;) {
                for (int j = 1; j < m; ++j) x[j] = c0[j] + static_cast<double>(idx[j]) * cfg.step;
                if (distance(problem.norm, x.data(), c0.data()) <= keep_radius) {
                    const double v = eval(x.data());
                    if (v < out.value) {
                        out.value = v;
                        out.point.assign(x.begin(), x.end());
                    }
                }
                int j = m - 1;
                while (j >= 1 && idx[j] == K) idx[j--] = -K;
                if (j < 1) break;
                ++idx[j];
            }
        }
    };

    const int t = std::clamp<long>(std::max(1, cfg.threads), 1, slabs);
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int i = 0; i < t - 1; ++i) pool.emplace_back(worker);
        worker();
        for (std::thread& th : pool) th.join();
    }

    // Slab order is ascending in the first coordinate and each slab scans in
    // lexicographic order, so keeping the first strict improvement realizes
    // the lexicographic tie-break.
    const SlabBest* winner = nullptr;
    for (const SlabBest& b : best) {
        if (b.point.empty()) continue;
        if (!winner || b.value < winner->value) winner = &b;
    }
    if (!winner)
        throw std::invalid_argument("grid_argmin_defect: no grid point inside bounds");
    return {Point(winner->point.begin(), winner->point.end()), winner->value};
}

GradResult gradient_descent_D2(const SRProblem& problem, const GradConfig& cfg) {
    validate_problem(problem);
    const int m = problem.norm.m;
    if (static_cast<int>(cfg.start.size()) != m)
        throw std::invalid_argument("gradient_descent_D2: start dimension mismatch");
    if (!(cfg.fd_step > 0.0) || !(cfg.step_init > 0.0) || !(cfg.tol_grad > 0.0))
        throw std::invalid_argument("gradient_descent_D2: steps and tolerance must be positive");
    if (!(cfg.shrink > 0.0 && cfg.shrink < 1.0))
        throw std::invalid_argument("gradient_descent_D2: shrink must lie in (0, 1)");
    if (cfg.max_iter < 1)
        throw std::invalid_argument("gradient_descent_D2: max_iter must be >= 1");

    DefectEval eval(problem, DefectKind::D2);
    Point x = cfg.start;
    double f = eval(x.data());
    if (!std::isfinite(f))
        throw std::runtime_error("gradient_descent_D2: non-finite defect at the start point");
    if (cfg.on_iterate) cfg.on_iterate(x, f);

    Point g(m), y(m), cand(m);
    int iters = 0;
    const double h = cfg.fd_step;
    while (iters < cfg.max_iter) {
        double gmax = 0.0, gsq = 0.0;
        for (int j = 0; j < m; ++j) {
            y = x;
            y[j] = x[j] + h;
            const double fp = d2_stencil(eval, problem, y, j);
            y = x;
            y[j] = x[j] - h;
            const double fm = d2_stencil(eval, problem, y, j);
            g[j] = (fp - fm) / (2.0 * h);
            if (!std::isfinite(g[j]))
                throw std::runtime_error("gradient_descent_D2: non-finite defect in the stencil");
            gmax = std::max(gmax, std::fabs(g[j]));
            gsq += g[j] * g[j];
        }
        if (gmax < cfg.tol_grad) break;

        double alpha = cfg.step_init;
        bool accepted = false;
        while (alpha >= kStepFloor) {
            for (int j = 0; j < m; ++j) cand[j] = x[j] - alpha * g[j];
            const double fc = eval(cand.data());
            if (!std::isfinite(fc))
                throw std::runtime_error("gradient_descent_D2: non-finite defect in line search");
            if (fc <= f - kArmijo * alpha * gsq) {
                x = cand;
                f = fc;
                accepted = true;
                break;
            }
            alpha *= cfg.shrink;
        }
        if (!accepted) break;  // flat to numerical precision; report where we are
        ++iters;
        if (cfg.on_iterate) cfg.on_iterate(x, f);
    }
    return GradResult{std::move(x), f, iters};
}

bool verify_local_min(const SRProblem& problem, DefectKind kind, const Point& x,
                      double radius, int samples, std::uint64_t seed) {
    validate_problem(problem);
    const int m = problem.norm.m;
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("verify_local_min: point dimension mismatch");
    if (!(radius > 0.0)) throw std::invalid_argument("verify_local_min: radius must be positive");
    if (samples < 100) throw std::invalid_argument("verify_local_min: need at least 100 samples");

    DefectEval eval(problem, kind);
    Point xm = x;
    const double fx = eval(xm.data());

    std::mt19937_64 rng(seed);
    auto uniform = [&rng]() { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
    Point y(m);
    for (int s = 0; s < samples; ++s) {
        // Rejection-sample u with ||u|| <= radius in the problem norm.
        for (;;) {
            for (int j = 0; j < m; ++j) y[j] = radius * (2.0 * uniform() - 1.0);
            if (norm(problem.norm, y.data()) <= radius) break;
        }
        for (int j = 0; j < m; ++j) y[j] += x[j];
        if (eval(y.data()) < fx - 1e-12) return false;
    }
    return true;
}

}  // namespace rcd
