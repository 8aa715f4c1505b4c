#pragma once

#include <string>
#include <variant>

#include "droneflow/errors.hpp"
#include "droneflow/geometry.hpp"

namespace droneflow {

/// Climb vertically to `height_m` above the local origin plane.
struct Takeoff {
    double height_m;
};

/// Fly to a point in the local ENU frame. `yaw_rad` is the heading to
/// settle on while travelling; `speed_mps` caps the commanded speed.
struct Waypoint {
    double x;
    double y;
    double z;
    double yaw_rad = 0.0;
    double speed_mps = 1.0;
};

/// Body-frame velocity setpoint (forward, left, up) held for `duration_ms`.
struct VelocityCmd {
    double forward_mps;
    double left_mps;
    double up_mps;
    double yaw_rate_rps = 0.0;
    double duration_ms = 0.0;
};

struct Hover {};
struct Land {};

enum class NavKind { Takeoff, Waypoint, Velocity, Hover, Land };

/// One drone motion primitive. Construction validates the per-variant
/// argument constraints (positive height/speed/duration).
class NavigationCommand {
public:
    using Action = std::variant<Takeoff, Waypoint, VelocityCmd, Hover, Land>;

    static NavigationCommand takeoff(double height_m) {
        if (height_m <= 0.0) throw ArgumentError("takeoff height must be > 0");
        return NavigationCommand(Takeoff{height_m});
    }
    static NavigationCommand waypoint(double x, double y, double z, double yaw_rad = 0.0,
                                      double speed_mps = 1.0) {
        if (speed_mps <= 0.0) throw ArgumentError("waypoint speed must be > 0");
        return NavigationCommand(Waypoint{x, y, z, yaw_rad, speed_mps});
    }
    static NavigationCommand velocity(double forward_mps, double left_mps, double up_mps,
                                      double yaw_rate_rps, double duration_ms) {
        if (duration_ms <= 0.0) throw ArgumentError("velocity duration must be > 0");
        return NavigationCommand(VelocityCmd{forward_mps, left_mps, up_mps, yaw_rate_rps,
                                             duration_ms});
    }
    static NavigationCommand hover() { return NavigationCommand(Hover{}); }
    static NavigationCommand land() { return NavigationCommand(Land{}); }

    NavKind kind() const { return static_cast<NavKind>(action_.index()); }
    bool is_land() const { return kind() == NavKind::Land; }

    template <typename T>
    const T& as() const {
        return std::get<T>(action_);
    }

    int priority() const { return priority_; }
    void set_priority(int p) {
        if (p < 0) throw ArgumentError("priority must be >= 0");
        priority_ = p;
    }

    std::string describe() const {
        switch (kind()) {
        case NavKind::Takeoff: return "takeoff";
        case NavKind::Waypoint: return "waypoint";
        case NavKind::Velocity: return "velocity";
        case NavKind::Hover: return "hover";
        case NavKind::Land: return "land";
        }
        return "?";
    }

private:
    explicit NavigationCommand(Action a) : action_(std::move(a)) {}

    Action action_;
    int priority_ = 0;
};

} // namespace droneflow
