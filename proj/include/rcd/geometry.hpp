#pragma once

#include <limits>
#include <vector>

namespace rcd {

using Point = std::vector<double>;

// Exponent value encoding the sup norm.  Any p >= 1 is accepted, including
// non-integer values; p = 1, 2 and infinity get dedicated fast paths.
inline constexpr double p_infinity = std::numeric_limits<double>::infinity();

// An l_p norm on R^m.  Distances throughout the library are rho(x, y) =
// ||x - y||_p; the wave speed is 1, so times and lengths share units.
struct NormSpec {
    double p = 2.0;
    int m = 1;
};

// Closed ball B[center; radius] in the ambient norm.
struct Ball {
    Point center;
    double radius = 0.0;
};

// A basis together with the conjugate exponent q = p/(p-1) of the dual space
// in which its coordinate functionals are measured.
struct Basis {
    std::vector<Point> vectors;
    double dual_q = 2.0;
};

struct AuerbachReport {
    bool pass = false;
    double max_violation = 0.0;
};

// ||x||_p.  Throws std::invalid_argument on dimension mismatch or non-finite
// coordinates.  The raw-pointer overload skips validation; it exists for the
// solver's inner loops where x lives inside a flat coordinate buffer.
double norm(const NormSpec& spec, const Point& x);
double norm(const NormSpec& spec, const double* x);

double distance(const NormSpec& spec, const Point& x, const Point& y);
double distance(const NormSpec& spec, const double* x, const double* y);

// Conjugate exponent: p/(p-1), with q = infinity for p = 1 and q = 1 for
// p = infinity.
double conjugate_exponent(double p);

// The standard basis e_1..e_m with dual_q = conjugate_exponent(spec.p).
Basis standard_basis(const NormSpec& spec);

// Checks that each basis vector has unit norm and that the coordinate
// functionals induced by the basis (rows of the inverse matrix) are
// biorthogonal with unit dual norm, all within 1e-12.  For the standard
// basis this passes for every p in [1, infinity].  Throws
// DegenerateInputError if the vectors are linearly dependent.
AuerbachReport validate_auerbach(const NormSpec& spec, const Basis& basis);

}  // namespace rcd
