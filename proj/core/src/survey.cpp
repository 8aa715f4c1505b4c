#include "droneflow/survey.hpp"

#include <cmath>
#include <vector>

#include "droneflow/backend.hpp"
#include "droneflow/errors.hpp"

namespace droneflow {

int survey_pass_count(double width_m, double swath_m) {
    return static_cast<int>(std::ceil(width_m / swath_m - 1e-9)) + 1;
}

double survey_overshoot_m() { return kArrivalToleranceM + 0.1; }

ListData<NavigationCommand> rectangular_survey_path(double length_m, double width_m,
                                                    double height_m, double swath_m,
                                                    double speed_mps) {
    if (length_m <= 0.0 || width_m <= 0.0 || height_m <= 0.0 || speed_mps <= 0.0) {
        throw ArgumentError("survey dimensions, height and speed must be > 0");
    }
    if (swath_m <= 0.0 || swath_m > std::min(length_m, width_m)) {
        throw ArgumentError("swath must be in (0, min(length, width)]");
    }

    const int passes = survey_pass_count(width_m, swath_m);
    const double spacing = width_m / (passes - 1);
    // Waypoint arrival is tolerance-based, so the drone cuts corners by up
    // to that tolerance. Overshooting the field keeps every flown pass on
    // or beyond its line and the whole rectangle stays inside swath/2 of
    // the trajectory, not just of the plan.
    const double over = survey_overshoot_m();

    std::vector<NavigationCommand> cmds;
    cmds.push_back(NavigationCommand::takeoff(height_m));

    double px = 0.0, py = 0.0;
    auto add_waypoint = [&](double x, double y) {
        const double yaw = std::atan2(y - py, x - px);
        cmds.push_back(NavigationCommand::waypoint(x, y, height_m, yaw, speed_mps));
        px = x;
        py = y;
    };

    for (int i = 0; i < passes; ++i) {
        const double y = i * spacing;
        if (i > 0) {
            add_waypoint(px, y + over); // climb past the next pass line
            add_waypoint(px, y);        // line up on it
        }
        add_waypoint(i % 2 == 0 ? length_m + over : -over, y);
    }

    cmds.push_back(NavigationCommand::waypoint(0.0, 0.0, height_m,
                                               std::atan2(-py, -px), speed_mps));
    cmds.push_back(NavigationCommand::land());
    return ListData<NavigationCommand>(std::move(cmds));
}

} // namespace droneflow
