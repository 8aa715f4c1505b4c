#include "droneflow/analytics.hpp"

#include <fstream>

namespace droneflow {

void ensure_writable_directory(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec || !std::filesystem::is_directory(dir)) {
        throw IoError("cannot create directory '" + dir.string() + "'");
    }
    const auto probe = dir / ".write_probe";
    {
        std::ofstream out(probe);
        if (!out) {
            throw IoError("directory '" + dir.string() + "' is not writable");
        }
    }
    std::filesystem::remove(probe, ec);
}

// ---------------------------------------------------------------------------
// FollowObjectNavigation

FollowObjectNavigation::FollowObjectNavigation(std::string name, PidGains gains)
    : NavigableAnalytic(std::move(name)),
      gains_(gains),
      yaw_pid_(gains.yaw, gains.integral_clamp, gains.output_clamp),
      vertical_pid_(gains.vertical, gains.integral_clamp, gains.output_clamp),
      forward_pid_(gains.forward, gains.integral_clamp, gains.output_clamp) {}

void FollowObjectNavigation::set_target_area(double area) {
    if (area <= 0.0 || area > 1.0) throw ArgumentError("target area must be in (0, 1]");
    target_area_ = area;
}

void FollowObjectNavigation::set_no_target_timeout_ms(double ms) {
    if (ms <= 0.0) throw ArgumentError("timeout must be > 0");
    timeout_ms_ = ms;
}

std::vector<NavigationCommand> FollowObjectNavigation::transform(
    const AeroData<BoundingBox>& item, double t_out_ms) {
    const BoundingBox& box = item.get_data();
    double period_ms = nominal_period_ms_;
    double dt_s = 0.0;
    if (last_arrival_ms_ >= 0.0 && t_out_ms > last_arrival_ms_) {
        period_ms = t_out_ms - last_arrival_ms_;
        dt_s = period_ms / 1000.0;
    }
    last_arrival_ms_ = t_out_ms;

    const double yaw_rate = yaw_pid_.step(0.5 - box.cx, dt_s);
    const double vertical = vertical_pid_.step(0.5 - box.cy, dt_s);
    const double forward = forward_pid_.step(target_area_ - box.area(), dt_s);
    return {NavigationCommand::velocity(forward, 0.0, vertical, yaw_rate, period_ms)};
}

void FollowObjectNavigation::on_wired(Stream<NavigationCommand>& out) {
    if (out_) return; // one starvation watchdog per analytic
    out_ = &out;
    wired_at_ms_ = runtime().calendar().now();
    const double first_check = wired_at_ms_ + timeout_ms_;
    runtime().calendar().schedule(first_check, [this, first_check] {
        starvation_check(first_check);
    });
}

void FollowObjectNavigation::starvation_check(double t_check_ms) {
    const double last_activity = last_arrival_ms_ >= 0.0 ? last_arrival_ms_ : wired_at_ms_;
    double next_check;
    if (t_check_ms - last_activity >= timeout_ms_ - 1e-9) {
        out_->publish(NavigationCommand::hover(), t_check_ms);
        next_check = t_check_ms + timeout_ms_;
    } else {
        next_check = last_activity + timeout_ms_;
    }
    runtime().calendar().schedule(next_check, [this, next_check] {
        starvation_check(next_check);
    });
}

// ---------------------------------------------------------------------------
// BodyPoseNavigation

std::vector<NavigationCommand> BodyPoseNavigation::transform(const AeroData<Frame>& item,
                                                             double t_out_ms) {
    const std::string label = item.get_data().annotation("pose_label").value_or("normal");
    if (label == "hand_raised") {
        return {NavigationCommand::land()};
    }
    if (label == "fall") {
        runtime().record_alert({t_out_ms, "fall", name(), label, 1.0, 0.5, 0.5, 0.0, 0.0});
        return {NavigationCommand::hover()};
    }
    return {};
}

// ---------------------------------------------------------------------------
// FireAlertAnalytics

std::vector<AlertRecord> FireAlertAnalytics::transform(const AeroData<BoundingBox>& item,
                                                       double t_out_ms) {
    const BoundingBox& box = item.get_data();
    if (box.confidence < threshold_) return {};
    if (last_alert_ms_ >= 0.0 && t_out_ms - last_alert_ms_ < window_ms_) return {};
    last_alert_ms_ = t_out_ms;
    AlertRecord alert{t_out_ms, "fire",  name(), box.label, box.confidence,
                      box.cx,   box.cy, box.w,  box.h};
    runtime().record_alert(alert);
    return {alert};
}

// ---------------------------------------------------------------------------
// SaveDataAnalytics

void SaveDataAnalytics::on_deploy() { ensure_writable_directory(dir_); }

void SaveDataAnalytics::write_item(Pipe<double>& p, const AeroData<double>& item,
                                   std::int64_t) {
    p.file.row(format_fixed(item.timestamp_ms()) + "," + format_fixed(item.get_data()));
}

void SaveDataAnalytics::write_item(Pipe<Vec3>& p, const AeroData<Vec3>& item, std::int64_t) {
    const Vec3& v = item.get_data();
    p.file.row(format_fixed(item.timestamp_ms()) + "," + format_fixed(v.x) + "," +
               format_fixed(v.y) + "," + format_fixed(v.z));
}

void SaveDataAnalytics::write_item(Pipe<OdomSample>& p, const AeroData<OdomSample>& item,
                                   std::int64_t) {
    const OdomSample& s = item.get_data();
    p.file.row(format_fixed(item.timestamp_ms()) + "," + format_fixed(s.x) + "," +
               format_fixed(s.y) + "," + format_fixed(s.z) + "," + format_fixed(s.yaw));
}

void SaveDataAnalytics::write_item(Pipe<BoundingBox>& p, const AeroData<BoundingBox>& item,
                                   std::int64_t) {
    const BoundingBox& b = item.get_data();
    p.file.row(format_fixed(item.timestamp_ms()) + "," + b.label + "," +
               format_fixed(b.confidence) + "," + format_fixed(b.cx) + "," +
               format_fixed(b.cy) + "," + format_fixed(b.w) + "," + format_fixed(b.h));
}

void SaveDataAnalytics::write_item(Pipe<Frame>& p, const AeroData<Frame>& item,
                                   std::int64_t seq) {
    char name_buf[64];
    std::snprintf(name_buf, sizeof(name_buf), "%s_%06lld.bin", p.stream_id.c_str(),
                  static_cast<long long>(seq));
    const auto path = dir_ / name_buf;
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw IoError("cannot write frame file '" + path.string() + "'");
    }
    const Frame& f = item.get_data();
    out.write(reinterpret_cast<const char*>(f.pixels.data()),
              static_cast<std::streamsize>(f.pixels.size()));
    p.file.row(std::to_string(seq) + "," + format_fixed(item.timestamp_ms()) + "," + name_buf);
}

// ---------------------------------------------------------------------------
// MonitoringAnalytics

MonitoringAnalytics::MonitoringAnalytics(std::vector<std::string> metrics,
                                         std::filesystem::path directory)
    : AnalyticBase("monitoring"), dir_(std::move(directory)) {
    if (metrics.empty()) {
        throw ValidationError("monitoring requires at least one metric");
    }
    for (const auto& m : metrics) {
        if (m != "battery" && m != "trajectory") {
            throw ValidationError("unknown monitoring metric '" + m +
                                  "' (known: battery, trajectory)");
        }
        metrics_.insert(m);
    }
}

MonitoringAnalytics::~MonitoringAnalytics() {
    for (auto& [stream, sub] : odom_subs_) stream->unsubscribe(sub);
    for (auto& [stream, sub] : battery_subs_) stream->unsubscribe(sub);
}

void MonitoringAnalytics::on_deploy() { ensure_writable_directory(dir_); }

Stream<OdomSample>& MonitoringAnalytics::analyse(Stream<OdomSample>& odometry) {
    require_deployed();
    if (!odom_out_) {
        odom_out_ = std::make_unique<Stream<OdomSample>>(output_channel_name());
    }
    Runtime& rt = runtime();
    rt.add_analytic_edge(name(), odometry.name(), odom_out_->name(), false, false);
    if (wants("trajectory") && !trajectory_csv_.is_open()) {
        trajectory_csv_.open(dir_ / "trajectory.csv", "t_ms,x,y,z,yaw");
    }
    auto sub = odometry.subscribe([this](const AeroData<OdomSample>& item, std::int64_t) {
        auto keep = std::make_shared<const AeroData<OdomSample>>(item);
        deployment().submit(name(), item.provenance(), [this, keep](const CompletionInfo& c) {
            if (wants("trajectory")) {
                const OdomSample& s = keep->get_data();
                trajectory_csv_.row(format_fixed(keep->timestamp_ms()) + "," +
                                    format_fixed(s.x) + "," + format_fixed(s.y) + "," +
                                    format_fixed(s.z) + "," + format_fixed(s.yaw));
            }
            odom_out_->publish(keep->get_data(), c.t_return_ms, keep->provenance());
        });
    });
    odom_subs_.emplace_back(&odometry, sub);
    return *odom_out_;
}

Stream<double>& MonitoringAnalytics::analyse(Stream<double>& battery) {
    require_deployed();
    if (!battery_out_) {
        battery_out_ = std::make_unique<Stream<double>>(output_channel_name());
    }
    Runtime& rt = runtime();
    rt.add_analytic_edge(name(), battery.name(), battery_out_->name(), false, false);
    if (wants("battery") && !battery_csv_.is_open()) {
        battery_csv_.open(dir_ / "battery.csv", "t_ms,percent");
    }
    auto sub = battery.subscribe([this](const AeroData<double>& item, std::int64_t) {
        auto keep = std::make_shared<const AeroData<double>>(item);
        deployment().submit(name(), item.provenance(), [this, keep](const CompletionInfo& c) {
            if (wants("battery")) {
                battery_csv_.row(format_fixed(keep->timestamp_ms()) + "," +
                                 format_fixed(keep->get_data()));
            }
            battery_out_->publish(keep->get_data(), c.t_return_ms, keep->provenance());
        });
    });
    battery_subs_.emplace_back(&battery, sub);
    return *battery_out_;
}

} // namespace droneflow
