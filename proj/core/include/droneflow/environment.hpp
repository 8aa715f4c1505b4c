#pragma once

#include <memory>
#include <random>
#include <string>
#include <vector>

#include "droneflow/calendar.hpp"
#include "droneflow/compute.hpp"
#include "droneflow/config.hpp"
#include "droneflow/robot.hpp"
#include "droneflow/runtime.hpp"
#include "droneflow/sensors.hpp"

namespace droneflow {

/// Owns everything a run needs: the registries of robots, environment
/// sensors and compute resources instantiated from a config file, the
/// virtual clock, and the runtime. The simulation clock starts at 0.
///
/// Construction is single-threaded; after it, the lookup surface is
/// read-only and safe to call from any thread.
class Environment {
public:
    /// Bootstraps from a local JSON config file. Remote provider URLs are
    /// rejected with an "unsupported scheme" parse error.
    explicit Environment(const std::string& config_path);
    Environment(const std::string& config_path, std::uint64_t seed_override);
    /// Programmatic construction (tests, generated scenarios).
    explicit Environment(EnvironmentConfig cfg);

    Environment(const Environment&) = delete;
    Environment& operator=(const Environment&) = delete;

    // -- robots ---------------------------------------------------------------
    std::vector<Robot*> robots();
    Robot& robot_by_id(const std::string& rid);

    // -- environment sensors -------------------------------------------------
    bool has_env_sensors() const { return !env_sensors_.empty(); }
    std::vector<Sensor*> env_sensors();
    Sensor& env_sensor_by_id(const std::string& sid);

    // -- compute --------------------------------------------------------------
    std::vector<ComputeBase*> compute_resources();
    ComputeBase& compute_by_id(const std::string& cid);

    // -- simulation -------------------------------------------------------------
    /// Advance virtual time by dt: runs due calendar events (sensor
    /// emissions, compute completions) in order, then one kinematics tick.
    void step_simulation(double dt_ms);
    /// Exact-time variant used by the run loop to avoid accumulation drift.
    void step_to(double t_ms);

    EventCalendar& calendar() { return calendar_; }
    Runtime& runtime() { return *runtime_; }
    std::uint64_t seed() const { return cfg_.seed; }
    const Vec3& origin() const { return cfg_.origin; }
    const EnvironmentConfig& config() const { return cfg_; }
    std::mt19937_64& rng() { return rng_; }

private:
    void build();

    EnvironmentConfig cfg_;
    EventCalendar calendar_;
    std::mt19937_64 rng_;
    std::unique_ptr<Runtime> runtime_;
    std::vector<std::unique_ptr<ComputeBase>> computes_;
    std::vector<std::unique_ptr<Robot>> robots_;
    std::vector<std::unique_ptr<Sensor>> env_sensors_;
};

} // namespace droneflow
