#pragma once

#include <functional>
#include <memory>
#include <set>
#include <string>

#include "droneflow/config.hpp"
#include "droneflow/geometry.hpp"
#include "droneflow/navigation.hpp"

namespace droneflow {

enum class MissionState { Idle, Active, Paused, Ended };
std::string to_string(MissionState s);

struct DroneState {
    Vec3 position;
    Vec3 velocity;
    double yaw = 0.0;
    double battery_pct = 100.0;
    MissionState mission = MissionState::Idle;
};

/// A waypoint counts as reached within this distance.
inline constexpr double kArrivalToleranceM = 0.5;
/// Landing completes when altitude falls to this.
inline constexpr double kLandingToleranceM = 0.05;
/// Takeoff target when the mission starts without an explicit command.
inline constexpr double kDefaultTakeoffHeightM = 1.5;
/// Vertical speed used for takeoff and landing (clamped by max_speed).
inline constexpr double kVerticalOpSpeedMps = 1.0;
/// Yaw slew rate while tracking a waypoint heading.
inline constexpr double kYawSlewRps = 1.5;

/// Drone motion plugin. `step` must be pure given (state, command, dt, t)
/// and the backend's construction-time seed, so trajectories replay
/// bit-for-bit.
class Backend {
public:
    virtual ~Backend() = default;
    virtual std::set<std::string> capabilities() const = 0;
    virtual DroneState step(const DroneState& state, const NavigationCommand* command,
                            double dt_ms, double t_ms, const RobotSpec& spec) const = 0;
};

/// First-order point-mass backend: velocity set directly toward the target,
/// no inertia. Optionally injects a sinusoidal vertical disturbance while
/// flying stream-issued velocity commands, so closed-loop altitude holds
/// oscillate instead of converging exactly.
class KinematicBackend : public Backend {
public:
    explicit KinematicBackend(std::uint64_t seed);

    std::set<std::string> capabilities() const override { return {"navigable"}; }
    DroneState step(const DroneState& state, const NavigationCommand* command, double dt_ms,
                    double t_ms, const RobotSpec& spec) const override;

    /// Disturbance equivalent to an open-loop altitude swing of
    /// `amplitude_m` at the given period. Zero amplitude disables it.
    void set_vertical_disturbance(double amplitude_m, double period_s);
    double disturbance_amplitude_m() const { return disturbance_amplitude_m_; }

private:
    double disturbance_amplitude_m_ = 0.15;
    double disturbance_period_s_ = 8.0;
};

/// Sensors-only backend: advertises no capabilities; the drone never moves.
class StaticBackend : public Backend {
public:
    std::set<std::string> capabilities() const override { return {}; }
    DroneState step(const DroneState& state, const NavigationCommand*, double, double,
                    const RobotSpec&) const override {
        DroneState s = state;
        s.velocity = {};
        return s;
    }
};

using BackendFactory = std::function<std::unique_ptr<Backend>(std::uint64_t seed)>;

/// Plugin registry. "sim-kinematic" and "sim-static" are built in; new
/// hardware integrates by registering a factory under its own name.
void register_backend(const std::string& name, BackendFactory factory);
std::unique_ptr<Backend> make_backend(const std::string& name, std::uint64_t seed);
bool backend_registered(const std::string& name);

} // namespace droneflow
