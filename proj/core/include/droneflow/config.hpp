#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "droneflow/geometry.hpp"

namespace droneflow {

enum class SensorKind { Camera, Gps, Odometry, Battery };
enum class SensorMode { Push, Pull };
enum class ComputeKind { Edge, Cloud, Scheduler };

SensorKind sensor_kind_from_string(const std::string& s);
std::string to_string(SensorKind k);
SensorMode sensor_mode_from_string(const std::string& s);
std::string to_string(SensorMode m);
ComputeKind compute_kind_from_string(const std::string& s);
std::string to_string(ComputeKind k);

struct SensorSpec {
    std::string id;
    SensorKind kind = SensorKind::Gps;
    double rate_hz = 1.0;
    SensorMode mode = SensorMode::Push;
    nlohmann::json params = nlohmann::json::object();

    bool operator==(const SensorSpec& o) const {
        return id == o.id && kind == o.kind && rate_hz == o.rate_hz && mode == o.mode &&
               params == o.params;
    }
};

/// Linear battery discharge model, percent per second.
struct BatteryModel {
    double initial_pct = 100.0;
    double hover_pct_per_s = 0.05;
    double cruise_pct_per_s = 0.08;

    bool operator==(const BatteryModel&) const = default;
};

struct RobotSpec {
    std::string id;
    std::string backend = "sim-kinematic";
    double max_speed_mps = 1.0;
    BatteryModel battery;
    std::vector<SensorSpec> sensors;

    bool operator==(const RobotSpec&) const = default;
};

struct ComputeSpec {
    std::string id;
    ComputeKind kind = ComputeKind::Edge;
    std::map<std::string, double> service_times_ms; // analytic name -> ms
    int capacity = 1;                               // concurrent job slots
    double network_delay_ms = 0.0;                  // one way
    std::vector<std::string> members;               // scheduler only
    std::string policy;                             // scheduler only

    bool operator==(const ComputeSpec&) const = default;
};

struct EnvironmentConfig {
    std::uint64_t seed = 0;
    Vec3 origin;
    std::vector<RobotSpec> robots;
    std::vector<SensorSpec> env_sensors;
    std::vector<ComputeSpec> compute;
    /// Directory the config file was loaded from; relative paths in sensor
    /// params (target scripts) resolve against it.
    std::filesystem::path base_dir = ".";

    bool operator==(const EnvironmentConfig& o) const {
        return seed == o.seed && origin == o.origin && robots == o.robots &&
               env_sensors == o.env_sensors && compute == o.compute;
    }
};

/// Parse and validate a config document. Unknown keys fail fast.
EnvironmentConfig parse_environment_config(const nlohmann::json& doc,
                                           const std::filesystem::path& base_dir = ".");

/// Load a config file from disk. Remote provider URLs ("scheme://...") are
/// rejected: only local files are supported.
EnvironmentConfig load_environment_config(const std::string& path);

/// Cross-reference and invariant checks (unique ids, dangling members,
/// positive rates/speeds, scheduler policy sanity). Throws ValidationError.
void validate_config(const EnvironmentConfig& cfg);

} // namespace droneflow
