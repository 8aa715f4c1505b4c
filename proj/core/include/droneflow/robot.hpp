#pragma once

#include <deque>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "droneflow/aerodata.hpp"
#include "droneflow/backend.hpp"
#include "droneflow/errors.hpp"
#include "droneflow/navigation.hpp"
#include "droneflow/runtime.hpp"
#include "droneflow/sensors.hpp"

namespace droneflow {

class Environment;

/// Mission lifecycle and navigation over a pluggable motion backend.
///
/// Legal mission transitions: Idle->Active (start), Active->Paused (pause),
/// Paused->Active (resume), Active/Paused->Ended (end). Anything else
/// raises IllegalStateError.
class Robot {
public:
    Robot(Environment& env, RobotSpec spec);

    const std::string& id() const { return spec_.id; }
    const RobotSpec& spec() const { return spec_; }
    const DroneState& state() const { return state_; }
    MissionState mission_state() const { return state_.mission; }

    // -- sensor discovery ---------------------------------------------------
    std::vector<Sensor*> sensors();
    bool is_sensor_available(const std::string& sid) const;
    Sensor& sensor_by_id(const std::string& sid);
    template <typename S>
    S& sensor(const std::string& sid) {
        auto* typed = dynamic_cast<S*>(&sensor_by_id(sid));
        if (!typed) {
            throw ArgumentError("sensor '" + sid + "' on robot '" + id() +
                                "' is not of the requested kind");
        }
        return *typed;
    }

    // -- mission control ------------------------------------------------------
    void start_mission();
    void pause_mission();
    void resume_mission();
    MissionReport end_mission();
    bool is_navigable() const;

    /// Execute a finite command list sequentially (waypoint-driven apps).
    void navigate(const ListData<NavigationCommand>& commands);
    /// Register live command streams; priorities follow list order (higher
    /// index = higher priority) and the runtime's merge rule arbitrates.
    void navigate(std::vector<Stream<NavigationCommand>*> sources);

    /// Vertical disturbance while flying stream velocity commands
    /// (kinematic backend only). Amplitude 0 disables it.
    void set_vertical_disturbance(double amplitude_m, double period_s);

    double distance_flown_m() const { return distance_m_; }

    // -- simulation internals ----------------------------------------------
    void tick(double t_prev_ms, double t_now_ms);
    bool terminal_landed() const { return terminal_landed_; }
    /// Ends an already-landed mission (no extra simulation steps).
    MissionReport finalize_landed();
    Environment& environment() { return env_; }

private:
    const NavigationCommand* current_command(double t_now_ms);
    void pop_completed(double t_now_ms);
    MissionReport make_report() const;
    void require_state(MissionState expected, const char* op) const;

    struct QueuedCommand {
        NavigationCommand cmd;
        double started_ms = -1.0;
    };

    Environment& env_;
    RobotSpec spec_;
    std::unique_ptr<Backend> backend_;
    DroneState state_;
    std::vector<std::unique_ptr<Sensor>> sensors_;
    std::deque<QueuedCommand> queue_;
    bool stream_nav_ = false;
    bool ending_ = false;
    bool terminal_landed_ = false;
    double mission_start_ms_ = 0.0;
    double mission_end_ms_ = 0.0;
    double distance_m_ = 0.0;
    std::optional<NavigationCommand> land_override_;
};

} // namespace droneflow
