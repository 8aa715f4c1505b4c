#include "droneflow/config.hpp"

#include <fstream>
#include <set>
#include <unordered_set>

#include "droneflow/errors.hpp"

namespace droneflow {

namespace {

using nlohmann::json;

void require_keys(const json& obj, const std::set<std::string>& allowed,
                  const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.contains(it.key())) {
            throw ValidationError("unknown key '" + it.key() + "' in " + where);
        }
    }
}

double number_or(const json& obj, const char* key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) {
        throw ValidationError(std::string("'") + key + "' must be a number");
    }
    return obj[key].get<double>();
}

std::string string_field(const json& obj, const char* key, const std::string& where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw ValidationError(std::string("missing or non-string '") + key + "' in " + where);
    }
    return obj[key].get<std::string>();
}

SensorSpec parse_sensor(const json& s, const std::string& where) {
    if (!s.is_object()) throw ValidationError("sensor entry must be an object in " + where);
    require_keys(s, {"id", "kind", "rate", "mode", "params"}, where);
    SensorSpec spec;
    spec.id = string_field(s, "id", where);
    spec.kind = sensor_kind_from_string(string_field(s, "kind", where + " sensor '" + spec.id + "'"));
    spec.rate_hz = number_or(s, "rate", 1.0);
    if (s.contains("mode")) {
        spec.mode = sensor_mode_from_string(string_field(s, "mode", where));
    }
    if (s.contains("params")) {
        if (!s["params"].is_object()) {
            throw ValidationError("sensor 'params' must be an object in " + where);
        }
        spec.params = s["params"];
    }
    return spec;
}

RobotSpec parse_robot(const json& r) {
    if (!r.is_object()) throw ValidationError("robot entry must be an object");
    require_keys(r, {"id", "backend", "max_speed", "battery", "sensors"}, "robots[]");
    RobotSpec spec;
    spec.id = string_field(r, "id", "robots[]");
    const std::string where = "robot '" + spec.id + "'";
    spec.backend = r.contains("backend") ? string_field(r, "backend", where) : "sim-kinematic";
    spec.max_speed_mps = number_or(r, "max_speed", 1.0);
    if (r.contains("battery")) {
        const json& b = r["battery"];
        if (!b.is_object()) throw ValidationError("'battery' must be an object in " + where);
        require_keys(b, {"initial_pct", "hover_pct_per_s", "cruise_pct_per_s"},
                     where + " battery");
        spec.battery.initial_pct = number_or(b, "initial_pct", 100.0);
        spec.battery.hover_pct_per_s = number_or(b, "hover_pct_per_s", 0.05);
        spec.battery.cruise_pct_per_s = number_or(b, "cruise_pct_per_s", 0.08);
    }
    if (r.contains("sensors")) {
        if (!r["sensors"].is_array()) throw ValidationError("'sensors' must be an array in " + where);
        for (const auto& s : r["sensors"]) {
            spec.sensors.push_back(parse_sensor(s, where));
        }
    }
    return spec;
}

ComputeSpec parse_compute(const json& c) {
    if (!c.is_object()) throw ValidationError("compute entry must be an object");
    require_keys(c, {"id", "kind", "service_times", "capacity", "network_delay_ms", "members",
                     "policy"},
                 "compute[]");
    ComputeSpec spec;
    spec.id = string_field(c, "id", "compute[]");
    const std::string where = "compute '" + spec.id + "'";
    spec.kind = compute_kind_from_string(string_field(c, "kind", where));
    if (c.contains("service_times")) {
        if (!c["service_times"].is_object()) {
            throw ValidationError("'service_times' must be an object in " + where);
        }
        for (auto it = c["service_times"].begin(); it != c["service_times"].end(); ++it) {
            if (!it.value().is_number()) {
                throw ValidationError("service time for '" + it.key() + "' must be a number in " +
                                      where);
            }
            spec.service_times_ms[it.key()] = it.value().get<double>();
        }
    }
    spec.capacity = static_cast<int>(number_or(c, "capacity", 1.0));
    spec.network_delay_ms = number_or(c, "network_delay_ms", 0.0);
    if (c.contains("members")) {
        if (!c["members"].is_array()) throw ValidationError("'members' must be an array in " + where);
        for (const auto& m : c["members"]) {
            if (!m.is_string()) throw ValidationError("member ids must be strings in " + where);
            spec.members.push_back(m.get<std::string>());
        }
    }
    if (c.contains("policy")) {
        spec.policy = string_field(c, "policy", where);
    }
    return spec;
}

template <typename T>
void check_unique_ids(const std::vector<T>& items, const std::string& category) {
    std::unordered_set<std::string> seen;
    for (const auto& item : items) {
        if (item.id.empty()) {
            throw ValidationError("empty id in " + category);
        }
        if (!seen.insert(item.id).second) {
            throw ValidationError("duplicate " + category + " id '" + item.id + "'");
        }
    }
}

} // namespace

SensorKind sensor_kind_from_string(const std::string& s) {
    if (s == "camera") return SensorKind::Camera;
    if (s == "gps") return SensorKind::Gps;
    if (s == "odometry") return SensorKind::Odometry;
    if (s == "battery") return SensorKind::Battery;
    throw ValidationError("unknown sensor kind '" + s + "'");
}

std::string to_string(SensorKind k) {
    switch (k) {
    case SensorKind::Camera: return "camera";
    case SensorKind::Gps: return "gps";
    case SensorKind::Odometry: return "odometry";
    case SensorKind::Battery: return "battery";
    }
    return "?";
}

SensorMode sensor_mode_from_string(const std::string& s) {
    if (s == "push") return SensorMode::Push;
    if (s == "pull") return SensorMode::Pull;
    throw ValidationError("unknown sensor mode '" + s + "'");
}

std::string to_string(SensorMode m) { return m == SensorMode::Push ? "push" : "pull"; }

ComputeKind compute_kind_from_string(const std::string& s) {
    if (s == "edge") return ComputeKind::Edge;
    if (s == "cloud") return ComputeKind::Cloud;
    if (s == "scheduler") return ComputeKind::Scheduler;
    throw ValidationError("unknown compute kind '" + s + "'");
}

std::string to_string(ComputeKind k) {
    switch (k) {
    case ComputeKind::Edge: return "edge";
    case ComputeKind::Cloud: return "cloud";
    case ComputeKind::Scheduler: return "scheduler";
    }
    return "?";
}

EnvironmentConfig parse_environment_config(const json& doc,
                                           const std::filesystem::path& base_dir) {
    if (!doc.is_object()) {
        throw ValidationError("config root must be a JSON object");
    }
    require_keys(doc, {"seed", "origin", "robots", "env_sensors", "compute"}, "config root");

    EnvironmentConfig cfg;
    cfg.base_dir = base_dir;
    if (doc.contains("seed")) {
        if (!doc["seed"].is_number_unsigned() && !doc["seed"].is_number_integer()) {
            throw ValidationError("'seed' must be an unsigned integer");
        }
        cfg.seed = doc["seed"].get<std::uint64_t>();
    }
    if (doc.contains("origin")) {
        const json& o = doc["origin"];
        if (!o.is_array() || o.size() != 3 || !o[0].is_number()) {
            throw ValidationError("'origin' must be a 3-element number array");
        }
        cfg.origin = {o[0].get<double>(), o[1].get<double>(), o[2].get<double>()};
    }
    if (doc.contains("robots")) {
        if (!doc["robots"].is_array()) throw ValidationError("'robots' must be an array");
        for (const auto& r : doc["robots"]) cfg.robots.push_back(parse_robot(r));
    }
    if (doc.contains("env_sensors")) {
        if (!doc["env_sensors"].is_array()) throw ValidationError("'env_sensors' must be an array");
        for (const auto& s : doc["env_sensors"]) {
            cfg.env_sensors.push_back(parse_sensor(s, "env_sensors[]"));
        }
    }
    if (doc.contains("compute")) {
        if (!doc["compute"].is_array()) throw ValidationError("'compute' must be an array");
        for (const auto& c : doc["compute"]) cfg.compute.push_back(parse_compute(c));
    }

    validate_config(cfg);
    return cfg;
}

EnvironmentConfig load_environment_config(const std::string& path) {
    if (path.find("://") != std::string::npos) {
        throw ConfigParseError("unsupported scheme in '" + path +
                               "': remote provider URLs are not supported, pass a local file");
    }
    std::ifstream in(path);
    if (!in) {
        throw ConfigParseError("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        in >> doc;
    } catch (const json::parse_error& e) {
        throw ConfigParseError("malformed config '" + path + "': " + e.what());
    }
    auto base = std::filesystem::path(path).parent_path();
    if (base.empty()) base = ".";
    return parse_environment_config(doc, base);
}

void validate_config(const EnvironmentConfig& cfg) {
    check_unique_ids(cfg.robots, "robot");
    check_unique_ids(cfg.env_sensors, "env sensor");
    check_unique_ids(cfg.compute, "compute");

    for (const auto& r : cfg.robots) {
        if (r.max_speed_mps <= 0.0) {
            throw ValidationError("robot '" + r.id + "': max_speed must be > 0");
        }
        if (r.battery.hover_pct_per_s < 0.0 || r.battery.cruise_pct_per_s < 0.0) {
            throw ValidationError("robot '" + r.id + "': discharge rates must be >= 0");
        }
        if (r.backend.empty()) {
            throw ValidationError("robot '" + r.id + "': empty backend name");
        }
        check_unique_ids(r.sensors, "robot '" + r.id + "' sensor");
        for (const auto& s : r.sensors) {
            if (s.rate_hz <= 0.0) {
                throw ValidationError("sensor '" + s.id + "': rate must be > 0");
            }
        }
    }
    for (const auto& s : cfg.env_sensors) {
        if (s.rate_hz <= 0.0) {
            throw ValidationError("env sensor '" + s.id + "': rate must be > 0");
        }
    }

    std::map<std::string, const ComputeSpec*> by_id;
    for (const auto& c : cfg.compute) by_id[c.id] = &c;

    for (const auto& c : cfg.compute) {
        for (const auto& [name, ms] : c.service_times_ms) {
            if (ms <= 0.0) {
                throw ValidationError("compute '" + c.id + "': service time for '" + name +
                                      "' must be > 0");
            }
        }
        if (c.capacity < 1) {
            throw ValidationError("compute '" + c.id + "': capacity must be >= 1");
        }
        if (c.network_delay_ms < 0.0) {
            throw ValidationError("compute '" + c.id + "': network delay must be >= 0");
        }
        if (c.kind == ComputeKind::Scheduler) {
            if (c.members.empty()) {
                throw ValidationError("scheduler '" + c.id + "' has no members");
            }
            if (c.policy.empty()) {
                throw ValidationError("scheduler '" + c.id + "' has no policy");
            }
            bool has_edge = false, has_cloud = false;
            for (const auto& m : c.members) {
                auto it = by_id.find(m);
                if (it == by_id.end() || it->second->kind == ComputeKind::Scheduler) {
                    throw ValidationError("scheduler '" + c.id + "': member '" + m +
                                          "' is not a configured edge/cloud resource");
                }
                has_edge = has_edge || it->second->kind == ComputeKind::Edge;
                has_cloud = has_cloud || it->second->kind == ComputeKind::Cloud;
            }
            if (c.policy == "edge-only" && !has_edge) {
                throw ValidationError("scheduler '" + c.id + "': edge-only needs an edge member");
            }
            if (c.policy == "cloud-only" && !has_cloud) {
                throw ValidationError("scheduler '" + c.id + "': cloud-only needs a cloud member");
            }
        } else {
            if (!c.members.empty() || !c.policy.empty()) {
                throw ValidationError("compute '" + c.id +
                                      "': members/policy are only valid for schedulers");
            }
        }
    }
}

} // namespace droneflow
