#pragma once

#include <vector>

#include "rcd/geometry.hpp"

namespace rcd {

// A sound-ranging instance: n sensors at known positions heard a wavefront at
// the recorded times; the emitting point and emission moment are unknown.
// initial_ball is the a-priori localization region assumed to contain the
// source.
struct SRProblem {
    std::vector<Point> sensors;
    std::vector<double> times;
    NormSpec norm;
    Ball initial_ball;
};

// The hidden side of a simulated instance.
struct GroundTruth {
    Point source;
    double emission_time = 0.0;
};

// Scalar summaries of how far the backward moments at a point are from being
// all equal:
//   D   mean absolute deviation from the mean moment,
//   D1  mean pairwise absolute difference (weight 2/n^2),
//   D2  population variance of the moments,
//   DI  max moment minus min moment.
// Each vanishes exactly at points consistent with the recorded times.
enum class DefectKind { D, D1, D2, DI };

// Checks SRProblem invariants: consistent dimensions, n >= 1, finite data,
// pairwise-distinct sensors (minimum separation 1e-9 relative to the sensor
// cloud's scale), positive initial radius.  Throws std::invalid_argument or
// DegenerateInputError.
void validate_problem(const SRProblem& problem);

// Arrival times t_i = t0 + rho(r_i, s) generated from a known source.
// Throws DegenerateInputError on duplicate sensors.
std::vector<double> forward_simulate(const GroundTruth& truth,
                                     const std::vector<Point>& sensors,
                                     const NormSpec& norm);

// Backward moments tau_i(x) = t_i - rho(x, r_i): the emission moments the
// source would have needed if it sat at x.  At the true source all entries
// equal the true emission time.
std::vector<double> backward_moments(const SRProblem& problem, const Point& x);

// Defect of the selected kind at x.  Nonnegative; zero iff x is consistent
// with every recorded arrival time.
double defect(const SRProblem& problem, DefectKind kind, const Point& x);

// max_i tau_i(x) - min_i tau_i(x); identical to defect(.., DefectKind::DI, ..)
// and listed separately because the ball prune test is derived through it.
double interval_defect(const SRProblem& problem, const Point& x);

// Sensor layout with a guaranteed-unique source in the Euclidean plane of any
// dimension: the m+1 base points (which must be affinely independent; checked
// via the smallest singular value at relative tolerance 1e-10) plus the
// reflection 2*r1 - r2.  For p != 2 the same layout is exposed but carries no
// uniqueness guarantee.
std::vector<Point> make_unique_layout(int m, const std::vector<Point>& base);

// Allocation-free defect evaluation for hot loops.  An instance is bound to
// one problem and kind; operator() reads m coordinates from x.  Not
// thread-safe (owns scratch); give each worker thread its own copy.
class DefectEval {
  public:
    DefectEval(const SRProblem& problem, DefectKind kind);
    double operator()(const double* x);

  private:
    const SRProblem* problem_;
    DefectKind kind_;
    std::vector<double> sensors_flat_;
    std::vector<double> tau_;
};

}  // namespace rcd
