#include "rcd/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace rcd {
namespace {

using json = nlohmann::ordered_json;

json point_to_json(const Point& x) { return json(x); }

Point point_from_json(const json& j, const char* what) {
    if (!j.is_array()) throw std::invalid_argument(std::string("problem file: ") + what + " must be an array");
    Point out;
    out.reserve(j.size());
    for (const json& v : j) {
        if (!v.is_number()) throw std::invalid_argument(std::string("problem file: ") + what + " has a non-numeric entry");
        out.push_back(v.get<double>());
    }
    return out;
}

json p_to_json(double p) {
    if (std::isinf(p)) return json("inf");
    return json(p);
}

double p_from_json(const json& j) {
    if (j.is_string()) {
        const std::string s = j.get<std::string>();
        if (s == "inf" || s == "Inf" || s == "INF") return p_infinity;
        throw std::invalid_argument("problem file: unrecognized norm exponent \"" + s + "\"");
    }
    if (j.is_number()) return j.get<double>();
    throw std::invalid_argument("problem file: norm exponent must be a number or \"inf\"");
}

const json& require(const json& j, const char* key) {
    auto it = j.find(key);
    if (it == j.end())
        throw std::invalid_argument(std::string("problem file: missing field \"") + key + "\"");
    return *it;
}

}  // namespace

std::string_view defect_kind_name(DefectKind kind) {
    switch (kind) {
        case DefectKind::D: return "D";
        case DefectKind::D1: return "D1";
        case DefectKind::D2: return "D2";
        case DefectKind::DI: return "DI";
    }
    throw std::invalid_argument("defect_kind_name: unknown kind");
}

DefectKind parse_defect_kind(std::string_view name) {
    if (name == "D") return DefectKind::D;
    if (name == "D1") return DefectKind::D1;
    if (name == "D2") return DefectKind::D2;
    if (name == "DI") return DefectKind::DI;
    throw std::invalid_argument("unknown defect statistic \"" + std::string(name) +
                                "\" (expected D, D1, D2 or DI)");
}

std::string_view status_name(SolveStatus status) {
    switch (status) {
        case SolveStatus::converged: return "converged";
        case SolveStatus::level_cap: return "level-cap";
        case SolveStatus::ball_cap: return "ball-cap";
    }
    throw std::invalid_argument("status_name: unknown status");
}

std::string problem_to_string(const ProblemFile& doc) {
    const SRProblem& pb = doc.problem;
    json j;
    j["format"] = 1;
    j["m"] = pb.norm.m;
    j["p"] = p_to_json(pb.norm.p);
    json sensors = json::array();
    for (const Point& r : pb.sensors) sensors.push_back(point_to_json(r));
    j["sensors"] = std::move(sensors);
    j["times"] = json(pb.times);
    j["initial_ball"] = {{"center", point_to_json(pb.initial_ball.center)},
                         {"radius", pb.initial_ball.radius}};
    if (doc.truth) {
        j["truth"] = {{"source", point_to_json(doc.truth->source)},
                      {"t0", doc.truth->emission_time}};
    }
    return j.dump(2) + "\n";
}

ProblemFile problem_from_string(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem file: not valid JSON: ") + e.what());
    }
    try {
        if (!j.is_object()) throw std::invalid_argument("problem file: top level must be an object");
        const json& fmt = require(j, "format");
        if (!fmt.is_number_integer() || fmt.get<int>() != 1)
            throw std::invalid_argument("problem file: unsupported format version");

        ProblemFile doc;
        SRProblem& pb = doc.problem;
        const json& jm = require(j, "m");
        if (!jm.is_number_integer())
            throw std::invalid_argument("problem file: m must be an integer");
        pb.norm.m = jm.get<int>();
        pb.norm.p = p_from_json(require(j, "p"));

        const json& js = require(j, "sensors");
        if (!js.is_array()) throw std::invalid_argument("problem file: sensors must be an array");
        for (const json& r : js) pb.sensors.push_back(point_from_json(r, "sensor"));
        const json& jt = require(j, "times");
        pb.times = point_from_json(jt, "times");

        const json& jb = require(j, "initial_ball");
        pb.initial_ball.center = point_from_json(require(jb, "center"), "initial_ball.center");
        const json& jr = require(jb, "radius");
        if (!jr.is_number()) throw std::invalid_argument("problem file: initial_ball.radius must be a number");
        pb.initial_ball.radius = jr.get<double>();

        if (auto it = j.find("truth"); it != j.end()) {
            GroundTruth gt;
            gt.source = point_from_json(require(*it, "source"), "truth.source");
            const json& jt0 = require(*it, "t0");
            if (!jt0.is_number()) throw std::invalid_argument("problem file: truth.t0 must be a number");
            gt.emission_time = jt0.get<double>();
            if (static_cast<int>(gt.source.size()) != pb.norm.m)
                throw std::invalid_argument("problem file: truth.source dimension mismatch");
            doc.truth = std::move(gt);
        }

        validate_problem(pb);
        return doc;
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("problem file: malformed field: ") + e.what());
    }
}

std::string result_to_string(const SolveResult& result, const SolverConfig& config,
                             double gamma, std::optional<double> wall_time_seconds,
                             std::optional<double> truth_distance) {
    json j;
    j["format"] = 1;
    j["delta"] = config.delta;
    j["defect"] = std::string(defect_kind_name(config.defect_kind));
    if (gamma > 0.0) j["gamma"] = gamma;
    j["status"] = std::string(status_name(result.status));
    j["approx"] = point_to_json(result.approx);
    j["emission_time"] = result.emission_time;
    if (truth_distance) j["truth_distance"] = *truth_distance;
    json levels = json::array();
    for (const LevelStats& s : result.levels) {
        levels.push_back({{"k", s.level},
                          {"r", s.radius},
                          {"balls", s.ball_count},
                          {"min_defect", s.min_defect},
                          {"max_defect", s.max_defect}});
    }
    j["levels"] = std::move(levels);
    if (wall_time_seconds) j["wall_time_seconds"] = *wall_time_seconds;
    return j.dump(2) + "\n";
}

ProblemFile load_problem(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open \"" + path + "\" for reading");
    std::ostringstream buf;
    buf << in.rdbuf();
    if (in.bad()) throw std::runtime_error("read error on \"" + path + "\"");
    return problem_from_string(buf.str());
}

void save_problem(const std::string& path, const ProblemFile& doc) {
    save_text(path, problem_to_string(doc));
}

void save_text(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open \"" + path + "\" for writing");
    out << text;
    out.flush();
    if (!out) throw std::runtime_error("write error on \"" + path + "\"");
}

}  // namespace rcd
