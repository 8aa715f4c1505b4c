#include "droneflow/sensors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <fstream>
#include <sstream>

#include "droneflow/environment.hpp"
#include "droneflow/errors.hpp"
#include "droneflow/robot.hpp"

namespace droneflow {

namespace {

double param_number(const nlohmann::json& params, const char* key, double fallback) {
    if (!params.contains(key)) return fallback;
    if (!params[key].is_number()) {
        throw ValidationError(std::string("sensor param '") + key + "' must be a number");
    }
    return params[key].get<double>();
}

std::string param_string(const nlohmann::json& params, const char* key) {
    if (!params.contains(key)) return {};
    if (!params[key].is_string()) {
        throw ValidationError(std::string("sensor param '") + key + "' must be a string");
    }
    return params[key].get<std::string>();
}

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& p) {
    std::filesystem::path path(p);
    return path.is_absolute() ? path : base / path;
}

} // namespace

TargetScript TargetScript::load(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw IoError("cannot open target script '" + csv_path.string() + "'");
    }
    TargetScript script;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_ms", 0) == 0) continue; // header
        }
        std::istringstream ss(line);
        Row row{};
        char comma;
        if (!(ss >> row.t_ms >> comma >> row.p.x >> comma >> row.p.y >> comma >> row.p.z)) {
            throw IoError("malformed target script row: '" + line + "'");
        }
        script.rows_.push_back(row);
    }
    if (script.rows_.empty()) {
        throw IoError("target script '" + csv_path.string() + "' has no rows");
    }
    return script;
}

Vec3 TargetScript::sample(double t_ms) const {
    if (rows_.empty()) return {};
    if (t_ms <= rows_.front().t_ms) return rows_.front().p;
    if (t_ms >= rows_.back().t_ms) return rows_.back().p;
    for (std::size_t i = 1; i < rows_.size(); ++i) {
        if (t_ms <= rows_[i].t_ms) {
            const Row& a = rows_[i - 1];
            const Row& b = rows_[i];
            const double span = b.t_ms - a.t_ms;
            const double f = span > 0.0 ? (t_ms - a.t_ms) / span : 0.0;
            return a.p + (b.p - a.p) * f;
        }
    }
    return rows_.back().p;
}

LabelScript LabelScript::load(const std::filesystem::path& csv_path) {
    std::ifstream in(csv_path);
    if (!in) {
        throw IoError("cannot open label script '" + csv_path.string() + "'");
    }
    LabelScript script;
    std::string line;
    bool first = true;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (first) {
            first = false;
            if (line.rfind("t_ms", 0) == 0) continue;
        }
        auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw IoError("malformed label script row: '" + line + "'");
        }
        Row row;
        row.t_ms = std::stod(line.substr(0, comma));
        row.label = line.substr(comma + 1);
        script.rows_.push_back(std::move(row));
    }
    return script;
}

std::string LabelScript::sample(double t_ms) const {
    std::string label = "normal";
    for (const auto& row : rows_) {
        if (row.t_ms <= t_ms) label = row.label;
        else break;
    }
    return label;
}

Sensor::Sensor(Environment& env, SensorSpec spec, Robot* owner)
    : env_(env), spec_(std::move(spec)), owner_(owner) {}

nlohmann::json Sensor::property(const std::string& name) const {
    if (name == "id") return spec_.id;
    if (name == "kind") return to_string(spec_.kind);
    if (name == "rate") return spec_.rate_hz;
    if (name == "mode") return to_string(spec_.mode);
    if (spec_.params.contains(name)) return spec_.params[name];
    throw NotFoundError("sensor '" + spec_.id + "' has no property '" + name + "'");
}

double Sensor::emission_time(std::uint64_t k) const {
    // Multiply before dividing so rate * duration emissions land exactly.
    return activated_ms_ + (static_cast<double>(k) * 1000.0) / spec_.rate_hz;
}

void Sensor::activate(double t_now_ms) {
    if (active_) return;
    active_ = true;
    activated_ms_ = t_now_ms;
    emit_count_ = 0;
    env_.calendar().schedule(emission_time(1), [this] { fire(); });
}

void Sensor::fire() {
    if (!active_) return;
    if (owner_ && owner_->mission_state() == MissionState::Ended) {
        active_ = false;
        return;
    }
    const double t = emission_time(emit_count_ + 1);
    ++emit_count_;
    emit(t);
    env_.calendar().schedule(emission_time(emit_count_ + 1), [this] { fire(); });
}

void Sensor::register_in_graph() {
    if (graph_registered_) return;
    graph_registered_ = true;
    env_.runtime().register_sensor(spec_.id, owner_ ? owner_->id() : "env", stream_name(),
                                   spec_.kind == SensorKind::Camera);
    env_.runtime().track_stream_drops(stream_name(), [this] { return drop_count(); });
}

// ---------------------------------------------------------------------------

OdometrySensor::OdometrySensor(Environment& env, SensorSpec spec, Robot* owner)
    : Sensor(env, std::move(spec), owner), stream_(spec_.id) {}

Stream<OdomSample>& OdometrySensor::data_stream() {
    register_in_graph();
    return stream_;
}

void OdometrySensor::emit(double t_ms) {
    OdomSample s;
    if (owner_) {
        const DroneState& st = owner_->state();
        s = {st.position.x, st.position.y, st.position.z,
             st.velocity.x, st.velocity.y, st.velocity.z, st.yaw};
    }
    stream_.publish(s, t_ms);
}

GpsSensor::GpsSensor(Environment& env, SensorSpec spec, Robot* owner)
    : Sensor(env, std::move(spec), owner), stream_(spec_.id) {
    fixed_position_ = {param_number(spec_.params, "x", 0.0), param_number(spec_.params, "y", 0.0),
                       param_number(spec_.params, "z", 0.0)};
}

Stream<Vec3>& GpsSensor::data_stream() {
    register_in_graph();
    return stream_;
}

void GpsSensor::emit(double t_ms) {
    Vec3 p = fixed_position_;
    if (owner_) {
        p = owner_->state().position + env_.origin();
    }
    stream_.publish(p, t_ms);
}

BatterySensor::BatterySensor(Environment& env, SensorSpec spec, Robot* owner)
    : Sensor(env, std::move(spec), owner), stream_(spec_.id) {
    fixed_pct_ = param_number(spec_.params, "percent", 100.0);
}

Stream<double>& BatterySensor::data_stream() {
    register_in_graph();
    return stream_;
}

void BatterySensor::emit(double t_ms) {
    stream_.publish(owner_ ? owner_->state().battery_pct : fixed_pct_, t_ms);
}

// ---------------------------------------------------------------------------

CameraSensor::CameraSensor(Environment& env, SensorSpec spec, Robot* owner)
    : Sensor(env, std::move(spec), owner), stream_(spec_.id, kDefaultFrameStreamCapacity) {
    width_ = static_cast<int>(param_number(spec_.params, "width", 320));
    height_ = static_cast<int>(param_number(spec_.params, "height", 240));
    focal_px_ = param_number(spec_.params, "focal_px", 800.0);
    pitch_rad_ = param_number(spec_.params, "pitch_deg", 0.0) * std::numbers::pi / 180.0;
    target_w_m_ = param_number(spec_.params, "target_width_m", 0.5);
    target_h_m_ = param_number(spec_.params, "target_height_m", 0.5);
    if (width_ <= 0 || height_ <= 0 || focal_px_ <= 0.0) {
        throw ValidationError("camera '" + spec_.id + "': width/height/focal_px must be > 0");
    }
    const std::string script = param_string(spec_.params, "script");
    if (!script.empty()) {
        script_ = TargetScript::load(resolve(env_.config().base_dir, script));
    }
    const std::string pose_script = param_string(spec_.params, "pose_script");
    if (!pose_script.empty()) {
        pose_script_ = LabelScript::load(resolve(env_.config().base_dir, pose_script));
    }
}

Stream<Frame>& CameraSensor::data_stream() {
    register_in_graph();
    return stream_;
}

Frame CameraSensor::render(double t_ms) const {
    Frame f(width_, height_);
    // Deterministic dim texture, everywhere below the detector threshold.
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            f.set(x, y, static_cast<std::uint8_t>(28 + (x * 7 + y * 13) % 23));
        }
    }
    f.annotations["pose_label"] = pose_script_.sample(t_ms);
    f.annotations["target_visible"] = "0";
    if (script_.empty()) {
        return f;
    }

    DroneState st;
    if (owner_) st = owner_->state();
    const Vec3 target = script_.sample(t_ms);
    const Vec3 rel = target - st.position;

    const double cy = std::cos(st.yaw), sy = std::sin(st.yaw);
    const double cp = std::cos(pitch_rad_), sp = std::sin(pitch_rad_);
    const Vec3 cam_forward{cp * cy, cp * sy, -sp};
    const Vec3 cam_right{sy, -cy, 0.0};
    const Vec3 cam_down = cross(cam_forward, cam_right);

    const double depth = rel.dot(cam_forward);
    if (depth < 0.1) {
        return f; // behind or on the image plane
    }
    const double u = width_ / 2.0 + focal_px_ * rel.dot(cam_right) / depth;
    const double v = height_ / 2.0 + focal_px_ * rel.dot(cam_down) / depth;
    const double half_w = focal_px_ * (target_w_m_ / 2.0) / depth;
    const double half_h = focal_px_ * (target_h_m_ / 2.0) / depth;

    const int x0 = std::max(0, static_cast<int>(std::lround(u - half_w)));
    const int x1 = std::min(width_ - 1, static_cast<int>(std::lround(u + half_w)));
    const int y0 = std::max(0, static_cast<int>(std::lround(v - half_h)));
    const int y1 = std::min(height_ - 1, static_cast<int>(std::lround(v + half_h)));
    if (x0 > x1 || y0 > y1) {
        return f;
    }
    for (int yy = y0; yy <= y1; ++yy) {
        for (int xx = x0; xx <= x1; ++xx) {
            f.set(xx, yy, kTargetIntensity);
        }
    }
    // Ground truth of the drawn (clipped) rectangle, normalized.
    auto fmt = [](double value) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.6f", value);
        return std::string(buf);
    };
    f.annotations["target_visible"] = "1";
    f.annotations["gt_cx"] = fmt((x0 + x1 + 1.0) / 2.0 / width_);
    f.annotations["gt_cy"] = fmt((y0 + y1 + 1.0) / 2.0 / height_);
    f.annotations["gt_w"] = fmt(static_cast<double>(x1 - x0 + 1) / width_);
    f.annotations["gt_h"] = fmt(static_cast<double>(y1 - y0 + 1) / height_);
    return f;
}

void CameraSensor::emit(double t_ms) {
    Frame f = render(t_ms);
    env_.runtime().note_frame_captured(stream_.name(), stream_.next_seq(), t_ms);
    stream_.publish(std::move(f), t_ms);
}

std::unique_ptr<Sensor> make_sensor(Environment& env, const SensorSpec& spec, Robot* owner) {
    switch (spec.kind) {
    case SensorKind::Camera: return std::make_unique<CameraSensor>(env, spec, owner);
    case SensorKind::Gps: return std::make_unique<GpsSensor>(env, spec, owner);
    case SensorKind::Odometry: return std::make_unique<OdometrySensor>(env, spec, owner);
    case SensorKind::Battery: return std::make_unique<BatterySensor>(env, spec, owner);
    }
    throw ValidationError("unhandled sensor kind");
}

} // namespace droneflow
