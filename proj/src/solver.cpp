#include "rcd/solver.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <string>
#include <thread>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

constexpr std::size_t kParentsPerChunk = 256;
constexpr std::size_t kExactPairwiseLimit = 10'000;

void check_config(const SolverConfig& cfg) {
    if (!(cfg.delta > 0.0)) throw std::invalid_argument("SolverConfig: delta must be positive");
    if (cfg.defect_kind == DefectKind::D2)
        throw std::invalid_argument("SolverConfig: D2 is not 2-Lipschitz and cannot back the "
                                    "2r < D prune test; use D, D1 or DI");
    if (cfg.prune_slack < 0.0)
        throw std::invalid_argument("SolverConfig: prune_slack must be nonnegative");
    if (cfg.max_level < 1) throw std::invalid_argument("SolverConfig: max_level must be >= 1");
    if (cfg.ball_cap < 1) throw std::invalid_argument("SolverConfig: ball_cap must be >= 1");
}

// Lexicographic strictly-less on two m-vectors.
bool lex_less(const double* a, const double* b, int m) {
    for (int j = 0; j < m; ++j) {
        if (a[j] < b[j]) return true;
        if (a[j] > b[j]) return false;
    }
    return false;
}

const double* lex_min_center(const std::vector<double>& centers, int m) {
    const double* best = centers.data();
    for (std::size_t i = 1; i < centers.size() / m; ++i) {
        const double* c = centers.data() + i * m;
        if (lex_less(c, best, m)) best = c;
    }
    return best;
}

// Stopping condition on a flat center buffer; see stopping_check for the
// exact-vs-surrogate split.
bool stopping_flat(const std::vector<double>& centers, int m, const NormSpec& spec,
                   double radius, double delta) {
    if (!(radius < delta / 3.0)) return false;
    const std::size_t n = centers.size() / m;
    if (n <= 1) return true;
    const double bound = (2.0 / 3.0) * delta;

    // Coordinate-spread surrogate: cheap, and an upper bound on the diameter
    // in any l_p norm, so "true" here is always safe.
    std::vector<double> lo(centers.begin(), centers.begin() + m);
    std::vector<double> hi(lo);
    for (std::size_t i = 1; i < n; ++i)
        for (int j = 0; j < m; ++j) {
            const double v = centers[i * m + j];
            lo[j] = std::min(lo[j], v);
            hi[j] = std::max(hi[j], v);
        }
    std::vector<double> w(m);
    for (int j = 0; j < m; ++j) w[j] = hi[j] - lo[j];
    if (norm(spec, w.data()) < bound) return true;
    if (n > kExactPairwiseLimit) return false;

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (!(distance(spec, centers.data() + i * m, centers.data() + j * m) < bound))
                return false;
    return true;
}

struct LevelOutcome {
    std::vector<double> survivors;
    double min_stat = std::numeric_limits<double>::infinity();
    double max_stat = -std::numeric_limits<double>::infinity();
    bool capped = false;
};

// Refine all parents into half-radius children, keep the suspicious ones.
// Chunks of parents are processed in parallel; the merged buffer is in chunk
// order, so the outcome is identical for any thread count.
LevelOutcome refine_and_prune(const SRProblem& problem, const SolverConfig& cfg,
                              const std::vector<double>& parents, int m,
                              const std::vector<double>& lattice, double parent_radius,
                              double gamma, bool noisy, int threads) {
    const std::size_t n_parents = parents.size() / m;
    const std::size_t n_lattice = lattice.size() / m;
    const std::size_t n_chunks = (n_parents + kParentsPerChunk - 1) / kParentsPerChunk;
    const double child_radius = parent_radius / 2.0;
    const double threshold = 2.0 * child_radius + cfg.prune_slack;

    std::vector<std::vector<double>> chunk_out(n_chunks);
    std::vector<double> chunk_min(n_chunks, std::numeric_limits<double>::infinity());
    std::vector<double> chunk_max(n_chunks, -std::numeric_limits<double>::infinity());

    std::atomic<std::size_t> next_chunk{0};
    auto worker = [&]() {
        DefectEval eval(problem, cfg.defect_kind);
        std::vector<double> child(m);
        for (;;) {
            const std::size_t ci = next_chunk.fetch_add(1);
            if (ci >= n_chunks) return;
            const std::size_t lo = ci * kParentsPerChunk;
            const std::size_t hi = std::min(lo + kParentsPerChunk, n_parents);
            std::vector<double>& out = chunk_out[ci];
            double mn = chunk_min[ci], mx = chunk_max[ci];
            for (std::size_t pi = lo; pi < hi; ++pi) {
                const double* parent = parents.data() + pi * m;
                for (std::size_t li = 0; li < n_lattice; ++li) {
                    const double* off = lattice.data() + li * m;
                    for (int j = 0; j < m; ++j) child[j] = parent[j] + parent_radius * off[j];
                    double stat = eval(child.data());
                    if (noisy) stat = std::fabs(stat - 2.0 * gamma);
                    if (stat <= threshold) {
                        out.insert(out.end(), child.begin(), child.end());
                        mn = std::min(mn, stat);
                        mx = std::max(mx, stat);
                    }
                }
            }
            chunk_min[ci] = mn;
            chunk_max[ci] = mx;
        }
    };

    const int t = std::clamp<int>(threads, 1, static_cast<int>(n_chunks));
    if (t <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(t - 1);
        for (int i = 0; i < t - 1; ++i) pool.emplace_back(worker);
        worker();
        for (std::thread& th : pool) th.join();
    }

    LevelOutcome out;
    for (std::size_t ci = 0; ci < n_chunks; ++ci) {
        if (out.survivors.size() / m + chunk_out[ci].size() / m > cfg.ball_cap) {
            out.capped = true;
            break;
        }
        out.survivors.insert(out.survivors.end(), chunk_out[ci].begin(), chunk_out[ci].end());
        out.min_stat = std::min(out.min_stat, chunk_min[ci]);
        out.max_stat = std::max(out.max_stat, chunk_max[ci]);
    }
    return out;
}

SolveResult solve_impl(const SRProblem& problem, const SolverConfig& cfg, double gamma,
                       bool noisy) {
    validate_problem(problem);
    check_config(cfg);
    if (noisy && !(gamma >= 0.0))
        throw std::invalid_argument("NoisyConfig: gamma must be nonnegative");

    const int m = problem.norm.m;
    const double r0 = problem.initial_ball.radius;
    const int threads = std::max(1, cfg.threads);

    std::vector<double> lattice;
    {
        const std::vector<Point> lat = unit_lattice_centers(m, problem.norm);
        lattice.reserve(lat.size() * m);
        for (const Point& c : lat) lattice.insert(lattice.end(), c.begin(), c.end());
    }

    SolveResult result;
    std::vector<double> centers(problem.initial_ball.center.begin(),
                                problem.initial_ball.center.end());

    DefectEval eval0(problem, cfg.defect_kind);
    double stat0 = eval0(centers.data());
    if (noisy) stat0 = std::fabs(stat0 - 2.0 * gamma);
    result.levels.push_back(LevelStats{0, r0, 1, stat0, stat0});
    if (cfg.on_level) cfg.on_level(0, r0, centers);

    auto finish = [&](SolveStatus status, const std::vector<double>& final_centers) {
        result.status = status;
        result.approx.assign(m, 0.0);
        if (noisy) {
            const std::size_t n = final_centers.size() / m;
            for (std::size_t i = 0; i < n; ++i)
                for (int j = 0; j < m; ++j) result.approx[j] += final_centers[i * m + j];
            for (int j = 0; j < m; ++j) result.approx[j] /= static_cast<double>(n);
        } else {
            const double* best = lex_min_center(final_centers, m);
            result.approx.assign(best, best + m);
        }
        const std::vector<double> tau = backward_moments(problem, result.approx);
        double mean = 0.0;
        for (double t : tau) mean += t;
        result.emission_time = mean / static_cast<double>(tau.size());
        return result;
    };

    // The initial ball alone can already satisfy the halting condition when
    // delta is coarse.
    if (!noisy && stopping_flat(centers, m, problem.norm, r0, cfg.delta))
        return finish(SolveStatus::converged, centers);
    if (noisy && r0 < cfg.delta / 3.0)
        return finish(SolveStatus::converged, centers);

    for (int k = 0; k < cfg.max_level; ++k) {
        const double parent_radius = std::ldexp(r0, -k);
        const double child_radius = std::ldexp(r0, -(k + 1));

        LevelOutcome lo = refine_and_prune(problem, cfg, centers, m, lattice, parent_radius,
                                           gamma, noisy, threads);
        if (lo.capped) return finish(SolveStatus::ball_cap, centers);
        if (lo.survivors.empty())
            throw EmptyCoverError("solver: no suspicious ball at level " + std::to_string(k + 1) +
                                  "; the initial ball does not contain a source consistent "
                                  "with the recorded times (or prune_slack is too small)");
        if (cfg.dedupe) dedupe_flat(lo.survivors, m, 1e-9 * child_radius);
        if (lo.survivors.size() / m > cfg.ball_cap)
            return finish(SolveStatus::ball_cap, centers);

        centers = std::move(lo.survivors);
        result.levels.push_back(LevelStats{k + 1, child_radius, centers.size() / static_cast<std::size_t>(m),
                                           lo.min_stat, lo.max_stat});
        if (cfg.on_level) cfg.on_level(k + 1, child_radius, centers);

        const bool halt = noisy ? (child_radius < cfg.delta / 3.0)
                                : stopping_flat(centers, m, problem.norm, child_radius, cfg.delta);
        if (halt) return finish(SolveStatus::converged, centers);
    }
    return finish(SolveStatus::level_cap, centers);
}

}  // namespace

PruneClass prune_test(const SRProblem& problem, const Ball& b, const SolverConfig& cfg) {
    check_config(cfg);
    if (static_cast<int>(b.center.size()) != problem.norm.m)
        throw std::invalid_argument("prune_test: ball center dimension mismatch");
    if (!(b.radius > 0.0)) throw std::invalid_argument("prune_test: radius must be positive");
    const double d = defect(problem, cfg.defect_kind, b.center);
    return 2.0 * b.radius < d - cfg.prune_slack ? PruneClass::negative : PruneClass::suspicious;
}

bool stopping_check(const CoverLevel& level, const NormSpec& spec, double delta) {
    if (level.balls.empty()) throw std::invalid_argument("stopping_check: empty level");
    if (!(delta > 0.0)) throw std::invalid_argument("stopping_check: delta must be positive");
    std::vector<double> flat;
    flat.reserve(level.balls.size() * spec.m);
    for (const Ball& b : level.balls)
        flat.insert(flat.end(), b.center.begin(), b.center.end());
    return stopping_flat(flat, spec.m, spec, level.radius, delta);
}

SolveResult rcd_solve(const SRProblem& problem, const SolverConfig& cfg) {
    return solve_impl(problem, cfg, 0.0, false);
}

SolveResult noisy_solve(const SRProblem& problem, const NoisyConfig& cfg) {
    if (!(cfg.gamma >= 0.0))
        throw std::invalid_argument("NoisyConfig: gamma must be nonnegative");
    return solve_impl(problem, cfg.base, cfg.gamma, true);
}

}  // namespace rcd
