#include "droneflow/backend.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "droneflow/errors.hpp"

namespace droneflow {

std::string to_string(MissionState s) {
    switch (s) {
    case MissionState::Idle: return "idle";
    case MissionState::Active: return "active";
    case MissionState::Paused: return "paused";
    case MissionState::Ended: return "ended";
    }
    return "?";
}

namespace {

std::map<std::string, BackendFactory>& registry() {
    static std::map<std::string, BackendFactory> backends = {
        {"sim-kinematic",
         [](std::uint64_t seed) { return std::make_unique<KinematicBackend>(seed); }},
        {"sim-static", [](std::uint64_t) { return std::make_unique<StaticBackend>(); }},
    };
    return backends;
}

double slew_toward(double current, double target, double max_delta) {
    double diff = std::remainder(target - current, 2.0 * std::numbers::pi);
    if (diff > max_delta) diff = max_delta;
    if (diff < -max_delta) diff = -max_delta;
    return current + diff;
}

} // namespace

void register_backend(const std::string& name, BackendFactory factory) {
    registry()[name] = std::move(factory);
}

bool backend_registered(const std::string& name) { return registry().contains(name); }

std::unique_ptr<Backend> make_backend(const std::string& name, std::uint64_t seed) {
    auto it = registry().find(name);
    if (it == registry().end()) {
        throw ValidationError("unknown backend '" + name + "'");
    }
    return it->second(seed);
}

KinematicBackend::KinematicBackend(std::uint64_t) {}

void KinematicBackend::set_vertical_disturbance(double amplitude_m, double period_s) {
    if (amplitude_m < 0.0 || period_s <= 0.0) {
        throw ArgumentError("disturbance amplitude must be >= 0 and period > 0");
    }
    disturbance_amplitude_m_ = amplitude_m;
    disturbance_period_s_ = period_s;
}

DroneState KinematicBackend::step(const DroneState& state, const NavigationCommand* command,
                                  double dt_ms, double t_ms, const RobotSpec& spec) const {
    const double dt = dt_ms / 1000.0;
    DroneState next = state;
    next.velocity = {};
    if (!command || dt <= 0.0) {
        return next;
    }

    auto move_toward = [&](const Vec3& target, double speed) {
        const Vec3 delta = target - state.position;
        const double dist = delta.norm();
        if (dist < 1e-12) return;
        const double v = std::min(speed, spec.max_speed_mps);
        const double step_len = std::min(v * dt, dist);
        const Vec3 dir = delta * (1.0 / dist);
        next.position = state.position + dir * step_len;
        next.velocity = dir * (step_len / dt);
    };

    switch (command->kind()) {
    case NavKind::Takeoff: {
        const auto& c = command->as<Takeoff>();
        move_toward({state.position.x, state.position.y, c.height_m}, kVerticalOpSpeedMps);
        break;
    }
    case NavKind::Waypoint: {
        const auto& c = command->as<Waypoint>();
        move_toward({c.x, c.y, c.z}, c.speed_mps);
        next.yaw = slew_toward(state.yaw, c.yaw_rad, kYawSlewRps * dt);
        break;
    }
    case NavKind::Velocity: {
        const auto& c = command->as<VelocityCmd>();
        const double cy = std::cos(state.yaw), sy = std::sin(state.yaw);
        Vec3 v{c.forward_mps * cy - c.left_mps * sy, c.forward_mps * sy + c.left_mps * cy,
               c.up_mps};
        if (disturbance_amplitude_m_ > 0.0) {
            const double omega = 2.0 * std::numbers::pi / disturbance_period_s_;
            v.z += disturbance_amplitude_m_ * omega * std::cos(omega * t_ms / 1000.0);
        }
        const double speed = v.norm();
        if (speed > spec.max_speed_mps) {
            v = v * (spec.max_speed_mps / speed);
        }
        next.velocity = v;
        next.position = state.position + v * dt;
        next.yaw = state.yaw + c.yaw_rate_rps * dt;
        break;
    }
    case NavKind::Hover:
        break;
    case NavKind::Land: {
        move_toward({state.position.x, state.position.y, 0.0}, kVerticalOpSpeedMps);
        break;
    }
    }
    if (next.position.z < 0.0) next.position.z = 0.0;
    return next;
}

} // namespace droneflow
