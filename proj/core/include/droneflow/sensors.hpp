#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "droneflow/aerodata.hpp"
#include "droneflow/config.hpp"
#include "droneflow/geometry.hpp"
#include "droneflow/vision.hpp"

namespace droneflow {

class Environment;
class Robot;

/// Piecewise-linear 3D trajectory loaded from a CSV script
/// (header `t_ms,x,y,z`); used to move the camera's synthetic target.
class TargetScript {
public:
    TargetScript() = default;
    static TargetScript load(const std::filesystem::path& csv_path);

    bool empty() const { return rows_.empty(); }
    Vec3 sample(double t_ms) const;

private:
    struct Row {
        double t_ms;
        Vec3 p;
    };
    std::vector<Row> rows_;
};

/// Step-function label track from a CSV (`t_ms,label`); drives the frame's
/// pose_label annotation.
class LabelScript {
public:
    LabelScript() = default;
    static LabelScript load(const std::filesystem::path& csv_path);

    bool empty() const { return rows_.empty(); }
    std::string sample(double t_ms) const;

private:
    struct Row {
        double t_ms;
        std::string label;
    };
    std::vector<Row> rows_;
};

/// Base sensor: identity, rate, push/pull mode, and self-scheduled emission
/// on the environment's calendar. Robot sensors emit while their robot's
/// mission is active or paused; environment sensors emit from t = 0.
class Sensor {
public:
    Sensor(Environment& env, SensorSpec spec, Robot* owner);
    virtual ~Sensor() = default;

    const std::string& id() const { return spec_.id; }
    SensorKind kind() const { return spec_.kind; }
    double rate_hz() const { return spec_.rate_hz; }
    SensorMode mode() const { return spec_.mode; }
    const SensorSpec& spec() const { return spec_; }
    bool is_env_sensor() const { return owner_ == nullptr; }

    /// getSensorProperty(): resolves builtin attributes (id, kind, rate,
    /// mode) and anything in the configured params map.
    nlohmann::json property(const std::string& name) const;

    virtual const std::string& stream_name() const = 0;
    virtual std::int64_t drop_count() const = 0;

    /// Begin emitting: first sample lands one period after t_now_ms.
    void activate(double t_now_ms);

protected:
    virtual void emit(double t_ms) = 0;
    /// Registers this sensor (and its output channel) in the runtime graph
    /// the first time application code pulls the data stream.
    void register_in_graph();

    Environment& env_;
    SensorSpec spec_;
    Robot* owner_;

private:
    void fire();
    double emission_time(std::uint64_t k) const;

    bool active_ = false;
    double activated_ms_ = 0.0;
    std::uint64_t emit_count_ = 0;
    bool graph_registered_ = false;
};

class OdometrySensor : public Sensor {
public:
    OdometrySensor(Environment& env, SensorSpec spec, Robot* owner);
    Stream<OdomSample>& data_stream();
    const std::string& stream_name() const override { return stream_.name(); }
    std::int64_t drop_count() const override { return stream_.drop_count(); }

protected:
    void emit(double t_ms) override;

private:
    Stream<OdomSample> stream_;
};

class GpsSensor : public Sensor {
public:
    GpsSensor(Environment& env, SensorSpec spec, Robot* owner);
    Stream<Vec3>& data_stream();
    const std::string& stream_name() const override { return stream_.name(); }
    std::int64_t drop_count() const override { return stream_.drop_count(); }

protected:
    void emit(double t_ms) override;

private:
    Stream<Vec3> stream_;
    Vec3 fixed_position_; // env sensors report a configured position
};

class BatterySensor : public Sensor {
public:
    BatterySensor(Environment& env, SensorSpec spec, Robot* owner);
    Stream<double>& data_stream();
    const std::string& stream_name() const override { return stream_.name(); }
    std::int64_t drop_count() const override { return stream_.drop_count(); }

protected:
    void emit(double t_ms) override;

private:
    Stream<double> stream_;
    double fixed_pct_ = 100.0;
};

/// Synthetic camera. Renders an 8-bit grayscale frame with a deterministic
/// dim background and, when a target script is configured, one bright
/// rectangle placed by a pinhole projection of the scripted target from the
/// drone's pose. Annotations carry the rendered ground truth.
class CameraSensor : public Sensor {
public:
    CameraSensor(Environment& env, SensorSpec spec, Robot* owner);
    Stream<Frame>& data_stream();
    const std::string& stream_name() const override { return stream_.name(); }
    std::int64_t drop_count() const override { return stream_.drop_count(); }

    Frame render(double t_ms) const;
    int width() const { return width_; }
    int height() const { return height_; }
    double focal_px() const { return focal_px_; }

protected:
    void emit(double t_ms) override;

private:
    Stream<Frame> stream_;
    int width_ = 320;
    int height_ = 240;
    double focal_px_ = 800.0;
    double pitch_rad_ = 0.0;
    double target_w_m_ = 0.5;
    double target_h_m_ = 0.5;
    TargetScript script_;
    LabelScript pose_script_;
};

std::unique_ptr<Sensor> make_sensor(Environment& env, const SensorSpec& spec, Robot* owner);

/// Bright-rectangle intensity used by the renderer (above the detector
/// threshold).
inline constexpr std::uint8_t kTargetIntensity = 230;

} // namespace droneflow
