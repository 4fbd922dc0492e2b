#pragma once

#include "rcd/io.hpp"

// Two canonical planar benchmark instances used throughout the tests and the
// CLI (--preset example1 / example2).  Both have the true source at the origin
// with emission time 0, the Euclidean norm, search ball B[(0,0); 32], and
// times produced by forward_simulate, so the embedded ground truth is exact.
//
// example1: five sensors (8,6), (5,5), (-2,6), (-6,4), (-10,2).  The last
//   satisfies r5 = 2*r4 - r3, the collinear-tail layout that guarantees a
//   unique source in the Euclidean plane.  Besides the global zero at the
//   origin, D2 has a genuine local minimum near (-3.6901, 21.5627) with value
//   about 0.69044 -- the standard demonstration that descent methods can
//   stall far from the source.
//
// example2: five sensors (1.885,0.014), (2.523,-0.76), (2.552,-0.756),
//   (2.94,-0.78), (2.081,0.986), a tight cluster to one side of the source.
//   Gradient descent on D2 started from the nearest sensor converges to a
//   shallow false minimum near (2.039, 0.253) with D2 about 0.00318 -- small
//   but nonzero, and more than distance 1 from the true source.

namespace rcd {

ProblemFile preset_example1();
ProblemFile preset_example2();

// Returns the preset by name ("example1" or "example2"); throws
// std::invalid_argument for anything else.
ProblemFile preset_by_name(const std::string& name);

}  // namespace rcd
