#include "rcd/presets.hpp"

#include <stdexcept>

namespace rcd {
namespace {

ProblemFile make_preset(std::vector<Point> sensors) {
    ProblemFile doc;
    SRProblem& pb = doc.problem;
    pb.norm = NormSpec{2.0, 2};
    pb.sensors = std::move(sensors);
    pb.initial_ball = Ball{{0.0, 0.0}, 32.0};
    GroundTruth gt;
    gt.source = {0.0, 0.0};
    gt.emission_time = 0.0;
    pb.times = forward_simulate(gt, pb.sensors, pb.norm);
    doc.truth = gt;
    validate_problem(pb);
    return doc;
}

}  // namespace

ProblemFile preset_example1() {
    return make_preset({{8.0, 6.0}, {5.0, 5.0}, {-2.0, 6.0}, {-6.0, 4.0}, {-10.0, 2.0}});
}

ProblemFile preset_example2() {
    return make_preset({{1.885, 0.014},
                        {2.523, -0.76},
                        {2.552, -0.756},
                        {2.94, -0.78},
                        {2.081, 0.986}});
}

ProblemFile preset_by_name(const std::string& name) {
    if (name == "example1") return preset_example1();
    if (name == "example2") return preset_example2();
    throw std::invalid_argument("unknown preset \"" + name + "\" (expected example1 or example2)");
}

}  // namespace rcd
