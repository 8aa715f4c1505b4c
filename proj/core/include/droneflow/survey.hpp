#pragma once

#include "droneflow/aerodata.hpp"
#include "droneflow/navigation.hpp"

namespace droneflow {

inline constexpr double kDefaultSwathM = 10.0;

/// Boustrophedon coverage of a length x width rectangle anchored at the
/// origin, flown at `height_m`: takeoff, back-and-forth passes along the
/// length axis with pass spacing <= swath, return to the origin, land.
/// Every waypoint carries `speed_mps` and a yaw facing its travel
/// direction.
ListData<NavigationCommand> rectangular_survey_path(double length_m, double width_m,
                                                    double height_m,
                                                    double swath_m = kDefaultSwathM,
                                                    double speed_mps = 1.0);

/// Number of passes the generator lays down: ceil(width / swath) + 1,
/// so the near and far edges are always flown.
int survey_pass_count(double width_m, double swath_m);

/// How far pass endpoints and transit targets extend beyond the rectangle
/// to compensate for the waypoint arrival tolerance.
double survey_overshoot_m();

} // namespace droneflow
