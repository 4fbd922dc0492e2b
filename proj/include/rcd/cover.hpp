#pragma once

#include <cstddef>
#include <vector>

#include "rcd/geometry.hpp"

namespace rcd {

// One refinement level of the solver's cover: all balls share radius
// radius = r0 * 2^-level, where r0 is the initial ball's radius.
struct CoverLevel {
    int level = 0;
    double radius = 0.0;
    std::vector<Ball> balls;
};

// Centers c in {-1 + i/m : i = 0..2m}^m with ||c|| <= 3/2, in lexicographic
// order.  Closed balls of radius 1/2 about these centers cover the unit ball
// B[0; 1] for every l_p norm (the standard basis has the coordinate-bound
// property that makes the grid rounding argument work).  The borderline test
// keeps ||c|| <= 1.5 + 1e-12: keeping an extra ball never hurts the cover,
// dropping one can break it.  Throws CapacityError when (2m+1)^m exceeds cap.
std::vector<Point> unit_lattice_centers(int m, const NormSpec& spec,
                                        std::size_t cap = 10'000'000);

// The lattice center nearest to x in B[0; 1]: c_j = -1 + i_j/m with
// i_j = rnd(m(1 + x_j)), rnd(t) = floor(2t) - floor(t).  Guarantees
// |x_j - c_j| <= 1/(2m), hence ||x - c|| <= 1/2 in any l_p norm.
// Validates ||x||_inf <= 1 + 1e-12 (the weakest of the l_p constraints).
Point nearest_lattice_center(const Point& x, int m);

// The 2^-1-scale cover of b: balls B[b.center + b.radius * c, b.radius / 2]
// for each unit lattice center c.  Every child center lies within
// (3/2) * b.radius of b.center.
std::vector<Ball> refine_ball(const Ball& b, int m, const NormSpec& spec);

// Removes balls whose centers coincide within 1e-9 * radius in the
// max-coordinate distance (all balls must share one radius).  Merging is by
// quantization boxes of that width, keeping each box's lexicographically
// smallest center; output comes back in deterministic sorted order.  Centers
// straddling a box boundary may both survive, which costs size, never
// correctness.
std::vector<Ball> dedupe_centers(std::vector<Ball> balls);

// Flat-buffer form of dedupe_centers used by the solver: coords holds
// count * m doubles, tol is the absolute merge width per coordinate.
// Rewrites coords in place.
void dedupe_flat(std::vector<double>& coords, int m, double tol);

}  // namespace rcd
