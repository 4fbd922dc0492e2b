#include "rcd/geometry.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstddef>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

void check_spec(const NormSpec& spec) {
    if (!(spec.p >= 1.0))
        throw std::invalid_argument("NormSpec: p must satisfy p >= 1, got " + std::to_string(spec.p));
    if (spec.m < 1)
        throw std::invalid_argument("NormSpec: dimension must be positive, got " + std::to_string(spec.m));
}

void check_point(const NormSpec& spec, const Point& x, const char* who) {
    if (static_cast<int>(x.size()) != spec.m)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch (point has " +
                                    std::to_string(x.size()) + " coordinates, space has " +
                                    std::to_string(spec.m) + ")");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": non-finite coordinate");
}

// Accumulate ||.||_p over m values produced by get(i).
template <typename F>
double accumulate_norm(const NormSpec& spec, F get) {
    const int m = spec.m;
    if (spec.p == p_infinity) {
        double mx = 0.0;
        for (int i = 0; i < m; ++i) mx = std::max(mx, std::fabs(get(i)));
        return mx;
    }
    if (spec.p == 1.0) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) s += std::fabs(get(i));
        return s;
    }
    if (spec.p == 2.0) {
        double s = 0.0;
        for (int i = 0; i < m; ++i) {
            const double v = get(i);
            s += v * v;
        }
        return std::sqrt(s);
    }
    double s = 0.0;
    for (int i = 0; i < m; ++i) s += std::pow(std::fabs(get(i)), spec.p);
    return std::pow(s, 1.0 / spec.p);
}

}  // namespace

double norm(const NormSpec& spec, const double* x) {
    return accumulate_norm(spec, [x](int i) { return x[i]; });
}

double norm(const NormSpec& spec, const Point& x) {
    check_spec(spec);
    check_point(spec, x, "norm");
    return norm(spec, x.data());
}

double distance(const NormSpec& spec, const double* x, const double* y) {
    return accumulate_norm(spec, [x, y](int i) { return x[i] - y[i]; });
}

double distance(const NormSpec& spec, const Point& x, const Point& y) {
    check_spec(spec);
    check_point(spec, x, "distance");
    check_point(spec, y, "distance");
    return distance(spec, x.data(), y.data());
}

double conjugate_exponent(double p) {
    if (!(p >= 1.0))
        throw std::invalid_argument("conjugate_exponent: p must satisfy p >= 1");
    if (p == 1.0) return p_infinity;
    if (p == p_infinity) return 1.0;
    return p / (p - 1.0);
}

Basis standard_basis(const NormSpec& spec) {
    check_spec(spec);
    Basis b;
    b.dual_q = conjugate_exponent(spec.p);
    b.vectors.assign(spec.m, Point(spec.m, 0.0));
    for (int j = 0; j < spec.m; ++j) b.vectors[j][j] = 1.0;
    return b;
}

AuerbachReport validate_auerbach(const NormSpec& spec, const Basis& basis) {
    check_spec(spec);
    const int m = spec.m;
    if (static_cast<int>(basis.vectors.size()) != m)
        throw std::invalid_argument("validate_auerbach: expected " + std::to_string(m) + " basis vectors");
    for (const Point& e : basis.vectors) check_point(spec, e, "validate_auerbach");

    // Basis vectors as columns; the coordinate functionals are the rows of
    // the inverse, f_i(x) = (E^{-1} x)_i.
    Eigen::MatrixXd E(m, m);
    for (int j = 0; j < m; ++j)
        for (int i = 0; i < m; ++i) E(i, j) = basis.vectors[j][i];

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(E, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const auto& sv = svd.singularValues();
    if (sv(m - 1) <= 1e-12 * sv(0))
        throw DegenerateInputError("validate_auerbach: basis vectors are linearly dependent "
                                   "(relative smallest singular value " +
                                   std::to_string(sv(m - 1) / sv(0)) + ")");
    const Eigen::MatrixXd F = E.inverse();

    const NormSpec dual{basis.dual_q, m};
    double worst = 0.0;
    for (int j = 0; j < m; ++j)
        worst = std::max(worst, std::fabs(norm(spec, basis.vectors[j]) - 1.0));
    Point f(m);
    for (int i = 0; i < m; ++i) {
        for (int k = 0; k < m; ++k) f[k] = F(i, k);
        worst = std::max(worst, std::fabs(norm(dual, f) - 1.0));
    }
    const Eigen::MatrixXd R = F * E - Eigen::MatrixXd::Identity(m, m);
    worst = std::max(worst, R.cwiseAbs().maxCoeff());

    return AuerbachReport{worst <= 1e-12, worst};
}

}  // namespace rcd
