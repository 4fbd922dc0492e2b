#include "rcd/cover.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

// floor(2t) - floor(t): rounds t to the nearest integer, halves up.
long rnd_half_up(double t) {
    return static_cast<long>(std::floor(2.0 * t) - std::floor(t));
}

}  // namespace

std::vector<Point> unit_lattice_centers(int m, const NormSpec& spec, std::size_t cap) {
    if (m < 1) throw std::invalid_argument("unit_lattice_centers: dimension must be positive");
    if (spec.m != m) throw std::invalid_argument("unit_lattice_centers: norm dimension mismatch");

    const double total = std::pow(2.0 * m + 1.0, m);
    if (total > static_cast<double>(cap))
        throw CapacityError("unit_lattice_centers: (2m+1)^m = " + std::to_string(total) +
                            " exceeds cap " + std::to_string(cap));

    // Axis values -1 + i/m computed once so every center shares identical
    // floating-point coordinates with nearest_lattice_center.
    std::vector<double> axis(2 * m + 1);
    for (int i = 0; i <= 2 * m; ++i) axis[i] = -1.0 + static_cast<double>(i) / m;

    std::vector<Point> centers;
    std::vector<int> idx(m, 0);
    Point c(m);
    for (;;) {
        for (int j = 0; j < m; ++j) c[j] = axis[idx[j]];
        if (norm(spec, c) <= 1.5 + 1e-12) centers.push_back(c);
        int j = m - 1;
        while (j >= 0 && idx[j] == 2 * m) idx[j--] = 0;
        if (j < 0) break;
        ++idx[j];
    }
    return centers;
}

Point nearest_lattice_center(const Point& x, int m) {
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument("nearest_lattice_center: dimension mismatch");
    for (double v : x)
        if (!(std::fabs(v) <= 1.0 + 1e-12))
            throw std::invalid_argument("nearest_lattice_center: point outside the unit ball");
    Point c(m);
    for (int j = 0; j < m; ++j) {
        long i = rnd_half_up(m * (1.0 + x[j]));
        i = std::clamp(i, 0L, 2L * m);
        c[j] = -1.0 + static_cast<double>(i) / m;
    }
    return c;
}

std::vector<Ball> refine_ball(const Ball& b, int m, const NormSpec& spec) {
    if (static_cast<int>(b.center.size()) != m)
        throw std::invalid_argument("refine_ball: ball center dimension mismatch");
    if (!(b.radius > 0.0)) throw std::invalid_argument("refine_ball: radius must be positive");

    const std::vector<Point> lattice = unit_lattice_centers(m, spec);
    std::vector<Ball> out;
    out.reserve(lattice.size());
    for (const Point& c : lattice) {
        Ball child;
        child.radius = b.radius / 2.0;
        child.center.resize(m);
        for (int j = 0; j < m; ++j) child.center[j] = b.center[j] + b.radius * c[j];
        out.push_back(std::move(child));
    }
    return out;
}

void dedupe_flat(std::vector<double>& coords, int m, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("dedupe_flat: tolerance must be positive");
    const std::size_t n = coords.size() / m;
    if (n <= 1) return;

    // Quantization keys as doubles: exact integers up to 2^53, and identical
    // inputs always map to identical keys, which is all determinism needs.
    std::vector<double> keys(coords.size());
    for (std::size_t i = 0; i < coords.size(); ++i) keys[i] = std::floor(coords[i] / tol);

    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double* ka = keys.data() + a * m;
        const double* kb = keys.data() + b * m;
        for (int j = 0; j < m; ++j)
            if (ka[j] != kb[j]) return ka[j] < kb[j];
        const double* ca = coords.data() + a * m;
        const double* cb = coords.data() + b * m;
        for (int j = 0; j < m; ++j)
            if (ca[j] != cb[j]) return ca[j] < cb[j];
        return false;
    });

    std::vector<double> out;
    out.reserve(coords.size());
    const double* prev_key = nullptr;
    for (std::size_t i : order) {
        const double* k = keys.data() + i * m;
        if (prev_key && std::equal(k, k + m, prev_key)) continue;
        out.insert(out.end(), coords.begin() + i * m, coords.begin() + (i + 1) * m);
        prev_key = k;
    }
    coords = std::move(out);
}

std::vector<Ball> dedupe_centers(std::vector<Ball> balls) {
    if (balls.size() <= 1) return balls;
    const int m = static_cast<int>(balls[0].center.size());
    const double radius = balls[0].radius;
    for (const Ball& b : balls) {
        if (static_cast<int>(b.center.size()) != m)
            throw std::invalid_argument("dedupe_centers: mixed dimensions");
        if (b.radius != radius)
            throw std::invalid_argument("dedupe_centers: balls must share one radius");
    }
    std::vector<double> coords;
    coords.reserve(balls.size() * m);
    for (const Ball& b : balls) coords.insert(coords.end(), b.center.begin(), b.center.end());
    dedupe_flat(coords, m, 1e-9 * radius);

    std::vector<Ball> out(coords.size() / m);
    for (std::size_t i = 0; i < out.size(); ++i) {
        out[i].radius = radius;
        out[i].center.assign(coords.begin() + i * m, coords.begin() + (i + 1) * m);
    }
    return out;
}

}  // namespace rcd
