#pragma once

#include <cstdlib>
#include <filesystem>
#include <algorithm>
#include <cmath>
#include <vector>
#include <string>

#include "droneflow/config.hpp"

namespace dftest {

/// Self-deleting temp directory for test artifacts.
class TempDir {
public:
    explicit TempDir(const std::string& tag) {
        path_ = std::filesystem::temp_directory_path() /
                ("droneflow_" + tag + "_" + std::to_string(counter_++));
        std::filesystem::create_directories(path_);
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    const std::filesystem::path& path() const { return path_; }

private:
    static inline int counter_ = 0;
    std::filesystem::path path_;
};

inline droneflow::SensorSpec make_sensor_spec(const std::string& id, droneflow::SensorKind kind,
                                              double rate_hz,
                                              nlohmann::json params = nlohmann::json::object()) {
    droneflow::SensorSpec s;
    s.id = id;
    s.kind = kind;
    s.rate_hz = rate_hz;
    s.params = std::move(params);
    return s;
}

/// A single-robot config with odometry/gps/battery sensors and an
/// edge + cloud + scheduler compute pool; service times cover the test
/// analytic names.
inline droneflow::EnvironmentConfig basic_config() {
    using namespace droneflow;
    EnvironmentConfig cfg;
    cfg.seed = 7;

    RobotSpec robot;
    robot.id = "tello";
    robot.backend = "sim-kinematic";
    robot.max_speed_mps = 2.0;
    robot.sensors.push_back(make_sensor_spec("odom", SensorKind::Odometry, 20.0));
    robot.sensors.push_back(make_sensor_spec("gps", SensorKind::Gps, 5.0));
    robot.sensors.push_back(make_sensor_spec("battery", SensorKind::Battery, 1.0));
    cfg.robots.push_back(robot);

    ComputeSpec edge;
    edge.id = "edge";
    edge.kind = ComputeKind::Edge;
    edge.service_times_ms = {{"vip_detect", 50.0}, {"follow_nav", 10.0}, {"body_pose", 60.0},
                             {"identity", 5.0},    {"save_gps", 1.0},    {"monitoring", 1.0}};
    edge.capacity = 1;
    cfg.compute.push_back(edge);

    ComputeSpec cloud;
    cloud.id = "cloud";
    cloud.kind = ComputeKind::Cloud;
    cloud.service_times_ms = {{"vip_detect", 275.0}, {"follow_nav", 10.0},
                              {"body_pose", 250.0},  {"identity", 5.0},
                              {"save_gps", 1.0},     {"monitoring", 1.0}};
    cloud.capacity = 8;
    cloud.network_delay_ms = 25.0;
    cfg.compute.push_back(cloud);

    ComputeSpec sched;
    sched.id = "edge_cloud";
    sched.kind = ComputeKind::Scheduler;
    sched.members = {"edge", "cloud"};
    sched.policy = "queue-aware";
    cfg.compute.push_back(sched);

    return cfg;
}

struct XY {
    double x, y;
};

inline double point_to_segment_dist(double px, double py, XY a, XY b) {
    const double dx = b.x - a.x, dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    double t = 0.0;
    if (len2 > 0.0) {
        t = ((px - a.x) * dx + (py - a.y) * dy) / len2;
        t = std::max(0.0, std::min(1.0, t));
    }
    const double cx = a.x + t * dx, cy = a.y + t * dy;
    return std::hypot(px - cx, py - cy);
}

/// Brute-force coverage oracle: the largest horizontal distance from any
/// 0.5 m grid point of the [0,length] x [0,width] rectangle to the given
/// path polyline.
inline double max_coverage_gap(const std::vector<XY>& path, double length_m, double width_m,
                               double grid_m = 0.5) {
    double worst = 0.0;
    for (double gx = 0.0; gx <= length_m + 1e-9; gx += grid_m) {
        for (double gy = 0.0; gy <= width_m + 1e-9; gy += grid_m) {
            double best = 1e18;
            for (std::size_t i = 1; i < path.size(); ++i) {
                best = std::min(best, point_to_segment_dist(gx, gy, path[i - 1], path[i]));
                if (best == 0.0) break;
            }
            worst = std::max(worst, best);
        }
    }
    return worst;
}

} // namespace dftest
