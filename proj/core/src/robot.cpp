#include "droneflow/robot.hpp"

#include <cmath>

#include "droneflow/environment.hpp"

namespace droneflow {

Robot::Robot(Environment& env, RobotSpec spec)
    : env_(env), spec_(std::move(spec)), backend_(make_backend(spec_.backend, env.seed())) {
    state_.battery_pct = spec_.battery.initial_pct;
    for (const auto& s : spec_.sensors) {
        sensors_.push_back(make_sensor(env_, s, this));
    }
}

std::vector<Sensor*> Robot::sensors() {
    std::vector<Sensor*> out;
    out.reserve(sensors_.size());
    for (auto& s : sensors_) out.push_back(s.get());
    return out;
}

bool Robot::is_sensor_available(const std::string& sid) const {
    for (const auto& s : sensors_) {
        if (s->id() == sid) return true;
    }
    return false;
}

Sensor& Robot::sensor_by_id(const std::string& sid) {
    for (auto& s : sensors_) {
        if (s->id() == sid) return *s;
    }
    throw NotFoundError("no sensor '" + sid + "' on robot '" + id() + "'");
}

void Robot::require_state(MissionState expected, const char* op) const {
    if (state_.mission != expected) {
        throw IllegalStateError(std::string(op) + " requires mission state '" +
                                to_string(expected) + "' but robot '" + id() + "' is '" +
                                to_string(state_.mission) + "'");
    }
}

void Robot::start_mission() {
    require_state(MissionState::Idle, "start_mission");
    state_.mission = MissionState::Active;
    mission_start_ms_ = env_.calendar().now();
    queue_.push_back({NavigationCommand::takeoff(kDefaultTakeoffHeightM), -1.0});
    for (auto& s : sensors_) {
        s->activate(mission_start_ms_);
    }
}

void Robot::pause_mission() {
    require_state(MissionState::Active, "pause_mission");
    state_.mission = MissionState::Paused;
    state_.velocity = {};
}

void Robot::resume_mission() {
    require_state(MissionState::Paused, "resume_mission");
    state_.mission = MissionState::Active;
}

bool Robot::is_navigable() const { return backend_->capabilities().contains("navigable"); }

void Robot::navigate(const ListData<NavigationCommand>& commands) {
    require_state(MissionState::Active, "navigate");
    if (!is_navigable()) {
        throw CapabilityError("robot '" + id() + "' does not support navigation");
    }
    for (const auto& c : commands) {
        queue_.push_back({c, -1.0});
    }
    env_.runtime().register_list_navigation(*this, commands.size());
}

void Robot::navigate(std::vector<Stream<NavigationCommand>*> sources) {
    require_state(MissionState::Active, "navigate");
    if (!is_navigable()) {
        throw CapabilityError("robot '" + id() + "' does not support navigation");
    }
    if (sources.empty()) {
        throw ArgumentError("navigate requires at least one command stream");
    }
    env_.runtime().register_nav_sources(*this, std::move(sources));
    stream_nav_ = true;
}

void Robot::set_vertical_disturbance(double amplitude_m, double period_s) {
    auto* kin = dynamic_cast<KinematicBackend*>(backend_.get());
    if (!kin) {
        throw CapabilityError("robot '" + id() + "' backend has no disturbance model");
    }
    kin->set_vertical_disturbance(amplitude_m, period_s);
}

void Robot::pop_completed(double t_now_ms) {
    while (!queue_.empty()) {
        const QueuedCommand& qc = queue_.front();
        bool done = false;
        switch (qc.cmd.kind()) {
        case NavKind::Takeoff:
            done = std::abs(state_.position.z - qc.cmd.as<Takeoff>().height_m) <=
                   kArrivalToleranceM;
            break;
        case NavKind::Waypoint: {
            const auto& w = qc.cmd.as<Waypoint>();
            done = distance(state_.position, {w.x, w.y, w.z}) <= kArrivalToleranceM;
            break;
        }
        case NavKind::Velocity:
            done = qc.started_ms >= 0.0 &&
                   t_now_ms >= qc.started_ms + qc.cmd.as<VelocityCmd>().duration_ms;
            break;
        case NavKind::Hover:
            // A queued hover holds for a single tick, then yields.
            done = qc.started_ms >= 0.0 && t_now_ms > qc.started_ms;
            break;
        case NavKind::Land:
            done = state_.position.z <= kLandingToleranceM;
            if (done) terminal_landed_ = true;
            break;
        }
        if (!done) break;
        queue_.pop_front();
    }
}

const NavigationCommand* Robot::current_command(double t_now_ms) {
    if (ending_) {
        if (!land_override_) land_override_ = NavigationCommand::land();
        return &*land_override_;
    }
    pop_completed(t_now_ms);
    if (!queue_.empty()) {
        QueuedCommand& qc = queue_.front();
        if (qc.started_ms < 0.0) qc.started_ms = t_now_ms;
        return &qc.cmd;
    }
    if (stream_nav_) {
        const NavigationCommand* cmd = env_.runtime().active_stream_command(*this, t_now_ms);
        if (cmd && cmd->is_land() && state_.position.z <= kLandingToleranceM) {
            terminal_landed_ = true;
        }
        return cmd;
    }
    return nullptr;
}

void Robot::tick(double t_prev_ms, double t_now_ms) {
    const double dt_ms = t_now_ms - t_prev_ms;
    if (state_.mission == MissionState::Active) {
        const NavigationCommand* cmd = current_command(t_now_ms);
        DroneState next = backend_->step(state_, cmd, dt_ms, t_now_ms, spec_);
        distance_m_ += (next.position - state_.position).norm();
        state_.position = next.position;
        state_.velocity = next.velocity;
        state_.yaw = next.yaw;
        // Re-check arrivals so a just-finished Land flips the terminal flag
        // on the same tick.
        pop_completed(t_now_ms);
    }
    if (state_.mission == MissionState::Active || state_.mission == MissionState::Paused) {
        const bool moving = state_.mission == MissionState::Active &&
                            state_.velocity.norm() > 1e-9;
        const double rate =
            moving ? spec_.battery.cruise_pct_per_s : spec_.battery.hover_pct_per_s;
        state_.battery_pct = std::max(0.0, state_.battery_pct - rate * dt_ms / 1000.0);
    }
}

MissionReport Robot::end_mission() {
    if (state_.mission != MissionState::Active && state_.mission != MissionState::Paused) {
        throw IllegalStateError("end_mission requires an active or paused mission");
    }
    if (state_.mission == MissionState::Paused) {
        state_.mission = MissionState::Active;
    }
    ending_ = true;
    // Descend until touchdown; guard against an unreachable ground plane.
    const double max_landing_ms = 10.0 * 60.0 * 1000.0;
    const double started = env_.calendar().now();
    while (state_.position.z > kLandingToleranceM) {
        env_.step_simulation(kDefaultTickMs);
        if (env_.calendar().now() - started > max_landing_ms) {
            throw IllegalStateError("landing did not converge");
        }
    }
    return finalize_landed();
}

MissionReport Robot::finalize_landed() {
    state_.mission = MissionState::Ended;
    state_.velocity = {};
    ending_ = false;
    mission_end_ms_ = env_.calendar().now();
    return make_report();
}

MissionReport Robot::make_report() const {
    MissionReport r;
    r.flight_time_ms = mission_end_ms_ - mission_start_ms_;
    r.distance_m = distance_m_;
    r.final_battery_pct = state_.battery_pct;
    for (const auto& s : sensors_) {
        r.drop_counts[s->stream_name()] = s->drop_count();
    }
    return r;
}

} // namespace droneflow
