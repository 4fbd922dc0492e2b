#include "rcd/problem.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

#include "rcd/errors.hpp"

namespace rcd {
namespace {

void check_dim(const Point& x, int m, const char* who) {
    if (static_cast<int>(x.size()) != m)
        throw std::invalid_argument(std::string(who) + ": dimension mismatch");
    for (double v : x)
        if (!std::isfinite(v))
            throw std::invalid_argument(std::string(who) + ": non-finite coordinate");
}

double sensor_scale(const std::vector<Point>& sensors) {
    double mx = 1.0;
    for (const Point& r : sensors)
        for (double v : r) mx = std::max(mx, std::fabs(v));
    return mx;
}

void check_sensors(const std::vector<Point>& sensors, const NormSpec& norm, const char* who) {
    if (sensors.empty())
        throw std::invalid_argument(std::string(who) + ": at least one sensor required");
    for (const Point& r : sensors) check_dim(r, norm.m, who);
    const double min_sep = 1e-9 * sensor_scale(sensors);
    for (std::size_t i = 0; i < sensors.size(); ++i)
        for (std::size_t j = i + 1; j < sensors.size(); ++j)
            if (distance(norm, sensors[i], sensors[j]) <= min_sep)
                throw DegenerateInputError(std::string(who) + ": sensors " + std::to_string(i) +
                                           " and " + std::to_string(j) +
                                           " coincide (separation below 1e-9 of instance scale)");
}

}  // namespace

void validate_problem(const SRProblem& problem) {
    check_sensors(problem.sensors, problem.norm, "SRProblem");
    if (problem.times.size() != problem.sensors.size())
        throw std::invalid_argument("SRProblem: times/sensors length mismatch");
    for (double t : problem.times)
        if (!std::isfinite(t))
            throw std::invalid_argument("SRProblem: non-finite arrival time");
    check_dim(problem.initial_ball.center, problem.norm.m, "SRProblem initial ball");
    if (!(problem.initial_ball.radius > 0.0))
        throw std::invalid_argument("SRProblem: initial ball radius must be positive");
}

std::vector<double> forward_simulate(const GroundTruth& truth,
                                     const std::vector<Point>& sensors,
                                     const NormSpec& norm) {
    check_sensors(sensors, norm, "forward_simulate");
    check_dim(truth.source, norm.m, "forward_simulate source");
    std::vector<double> times;
    times.reserve(sensors.size());
    for (const Point& r : sensors)
        times.push_back(truth.emission_time + distance(norm, r, truth.source));
    return times;
}

std::vector<double> backward_moments(const SRProblem& problem, const Point& x) {
    check_dim(x, problem.norm.m, "backward_moments");
    std::vector<double> tau;
    tau.reserve(problem.sensors.size());
    for (std::size_t i = 0; i < problem.sensors.size(); ++i)
        tau.push_back(problem.times[i] - distance(problem.norm, x, problem.sensors[i]));
    return tau;
}

double defect(const SRProblem& problem, DefectKind kind, const Point& x) {
    check_dim(x, problem.norm.m, "defect");
    DefectEval eval(problem, kind);
    return eval(x.data());
}

double interval_defect(const SRProblem& problem, const Point& x) {
    return defect(problem, DefectKind::DI, x);
}

std::vector<Point> make_unique_layout(int m, const std::vector<Point>& base) {
    if (m < 1) throw std::invalid_argument("make_unique_layout: dimension must be positive");
    if (static_cast<int>(base.size()) != m + 1)
        throw std::invalid_argument("make_unique_layout: expected " + std::to_string(m + 1) +
                                    " base points, got " + std::to_string(base.size()));
    for (const Point& b : base) check_dim(b, m, "make_unique_layout");

    Eigen::MatrixXd A(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) A(i, j) = base[i + 1][j] - base[0][j];
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
    const auto& sv = svd.singularValues();
    if (sv(0) == 0.0 || sv(m - 1) <= 1e-10 * sv(0))
        throw DegenerateInputError("make_unique_layout: base points are affinely dependent");

    std::vector<Point> layout = base;
    Point extra(m);
    for (int j = 0; j < m; ++j) extra[j] = 2.0 * base[0][j] - base[1][j];
    layout.push_back(std::move(extra));
    return layout;
}

DefectEval::DefectEval(const SRProblem& problem, DefectKind kind)
    : problem_(&problem), kind_(kind) {
    const int n = static_cast<int>(problem.sensors.size());
    const int m = problem.norm.m;
    sensors_flat_.reserve(static_cast<std::size_t>(n) * m);
    for (const Point& r : problem.sensors)
        sensors_flat_.insert(sensors_flat_.end(), r.begin(), r.end());
    tau_.reserve(n);
}

double DefectEval::operator()(const double* x) {
    const int n = static_cast<int>(problem_->times.size());
    const int m = problem_->norm.m;
    const NormSpec& nm = problem_->norm;
    const double* times = problem_->times.data();
    const double* sens = sensors_flat_.data();

    if (kind_ == DefectKind::DI) {
        double lo = 0.0, hi = 0.0;
        for (int i = 0; i < n; ++i) {
            const double t = times[i] - distance(nm, x, sens + static_cast<std::size_t>(i) * m);
            if (i == 0) { lo = hi = t; }
            else { lo = std::min(lo, t); hi = std::max(hi, t); }
        }
        return hi - lo;
    }
    tau_.resize(n);
    double mean = 0.0;
    for (int i = 0; i < n; ++i) {
        tau_[i] = times[i] - distance(nm, x, sens + static_cast<std::size_t>(i) * m);
        mean += tau_[i];
    }
    mean /= n;
    switch (kind_) {
        case DefectKind::D: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) s += std::fabs(tau_[i] - mean);
            return s / n;
        }
        case DefectKind::D1: {
            double s = 0.0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) s += std::fabs(tau_[i] - tau_[j]);
            return 2.0 * s / (static_cast<double>(n) * n);
        }
        case DefectKind::D2: {
            double s = 0.0;
            for (int i = 0; i < n; ++i) {
                const double d = tau_[i] - mean;
                s += d * d;
            }
            return s / n;
        }
        default:
            return 0.0;  // unreachable
    }
}

}  // namespace rcd
