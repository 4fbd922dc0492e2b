#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "rcd/problem.hpp"
#include "rcd/solver.hpp"

// Serialization of problems and solver results.
//
// Both file kinds are UTF-8 JSON with a versioned "format": 1 field; floating-
// point numbers are written with shortest round-trip precision so that
// load(save(x)) reproduces every coordinate bit-for-bit and identical runs
// produce byte-identical files.  The norm exponent p is stored as the string
// "inf" when infinite (JSON has no literal for infinity).
//
// Schema (problem file):
//   { "format": 1, "m": <int>, "p": <number or "inf">,
//     "sensors": [[...], ...], "times": [...],
//     "initial_ball": { "center": [...], "radius": <number> },
//     "truth": { "source": [...], "t0": <number> } }        // optional block
//
// Schema (result file):
//   { "format": 1, "delta": <number>, "defect": "D"|"D1"|"D2"|"DI",
//     "gamma": <number>,                                     // only when > 0
//     "status": "converged"|"level-cap"|"ball-cap",
//     "approx": [...], "emission_time": <number>,
//     "truth_distance": <number>,                           // optional

//     "levels": [ { "k": <int>, "r": <number>, "balls": <int>,
//                   "min_defect": <number>, "max_defect": <number> }, ... ],
//     "wall_time_seconds": <number> }                        // optional

namespace rcd {

// A problem plus the optional embedded ground truth ("--blind" files omit it).
struct ProblemFile {
    SRProblem problem;
    std::optional<GroundTruth> truth;
};

// Canonical short names used in files and on the command line.
std::string_view defect_kind_name(DefectKind kind);
DefectKind parse_defect_kind(std::string_view name);  // throws std::invalid_argument
std::string_view status_name(SolveStatus status);

// Serialize to the documented schema.  The result serializer records the
// configuration the run used; pass wall_time = nullopt to omit the timing
// field (needed when comparing files across runs) and truth_distance when the
// problem file carried ground truth.
std::string problem_to_string(const ProblemFile& doc);
std::string result_to_string(const SolveResult& result, const SolverConfig& config,
                             double gamma, std::optional<double> wall_time_seconds,
                             std::optional<double> truth_distance = std::nullopt);

// Parse a problem file; validates all problem invariants.  Malformed text or
// an invariant violation throws std::invalid_argument with a diagnostic.
ProblemFile problem_from_string(const std::string& text);

// File helpers; I/O failures throw std::runtime_error.
ProblemFile load_problem(const std::string& path);
void save_problem(const std::string& path, const ProblemFile& doc);
void save_text(const std::string& path, const std::string& text);

}  // namespace rcd
