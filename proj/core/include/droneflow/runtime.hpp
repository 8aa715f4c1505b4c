#pragma once

#include <chrono>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "droneflow/aerodata.hpp"
#include "droneflow/compute.hpp"
#include "droneflow/navigation.hpp"
#include "droneflow/vision.hpp"

namespace droneflow {

class Environment;
class Robot;
class AnalyticBase;

enum class RunMode { Virtual, Wall };

enum class ServiceRole { Compute, Sensor, Analytic, Robot };
std::string to_string(ServiceRole r);

/// Validated dataflow topology assembled while the application composes
/// itself against the public API.
class ApplicationGraph {
public:
    struct Service {
        std::string name;
        ServiceRole role;
        std::string binding;
        std::vector<std::string> inputs;
        std::vector<std::string> outputs;
    };

    Service& find_or_add(const std::string& name, ServiceRole role);
    const Service* find(const std::string& name, ServiceRole role) const;
    const std::vector<Service>& services() const { return services_; }
    bool empty() const { return services_.empty(); }

    /// Per-role, insertion-ordered service names in launch order:
    /// compute, sensors, analytics, robots.
    std::vector<std::string> launch_order() const;

    /// Structural checks: every analytic bound to a deployment, every
    /// consumed channel produced exactly once, no cycles through analytics.
    void validate() const;

    bool has_list_navigation = false;

private:
    std::vector<Service> services_;
};

struct TrajectorySample {
    double t_ms, x, y, z, yaw;
};
struct BatterySample {
    double t_ms, pct;
};

struct MissionReport {
    double flight_time_ms = 0.0;
    double distance_m = 0.0;
    double final_battery_pct = 0.0;
    std::map<std::string, std::int64_t> drop_counts;
};

/// Per-dispatched-frame latency decomposition. Virtual stamps are modeled
/// milliseconds; wall stamps (nanoseconds, steady clock) are captured only
/// in wall mode, at the instants the pipeline stages actually execute.
struct FrameRecord {
    std::int64_t frame_seq = -1;
    double t_capture_ms = 0.0;
    double t_dispatch_ms = 0.0;
    double t_infer_start_ms = 0.0;
    double t_infer_end_ms = 0.0;
    double t_command_ms = 0.0;
    /// Modeled latency of every job on the capture->command chain
    /// (queue wait + service + network), summed.
    double chain_jobs_ms = 0.0;
    /// Virtual time spent outside chain jobs (framework plumbing). Gaps
    /// are measured between identical clock readings, so this is exactly
    /// 0.0 unless a dispatch delay is configured.
    double plumbing_gap_ms = 0.0;
    double last_chain_mark_ms = 0.0;

    std::int64_t wall_capture_ns = 0;
    std::int64_t wall_dispatch_ns = 0;
    std::int64_t wall_infer_start_ns = 0;
    std::int64_t wall_infer_end_ns = 0;
    std::int64_t wall_command_ns = 0;
    /// Measured transform execution time of the chain's jobs.
    std::int64_t wall_chain_compute_ns = 0;

    bool infer_done = false;
    bool command_done = false;

    double end_to_end_ms() const { return t_command_ms - t_capture_ms; }
    /// Framework overhead of this frame in virtual time: end-to-end minus
    /// everything attributed to modeled compute.
    double overhead_ms() const { return plumbing_gap_ms; }
};

struct RunMetrics {
    RunMode mode = RunMode::Virtual;
    double requested_duration_ms = 0.0;
    double virtual_end_ms = 0.0;
    double wall_elapsed_s = 0.0;
    std::vector<FrameRecord> frames;
    std::int64_t memory_hwm_bytes = 0;
    std::map<std::string, std::int64_t> drop_counts;
    std::vector<TrajectorySample> trajectory;
    std::vector<BatterySample> battery;
    std::optional<MissionReport> report;
    std::string vision_analytic;  // head of the latency chain, "" if none
    std::string command_analytic; // analytic whose outputs close the chain
};

/// State of one registered navigation source feeding the priority merge.
struct NavSourceState {
    int priority = 0;
    bool has_command = false;
    double last_emit_ms = -1.0;
    std::optional<NavigationCommand> command;
};

/// Index of the source that drives the robot: the highest-priority source
/// that has emitted within the freshness window. -1 when none is live.
int select_nav_source(const std::vector<NavSourceState>& sources, double now_ms,
                      double freshness_ms);

inline constexpr double kDefaultFreshnessMs = 2000.0;
inline constexpr double kDefaultTickMs = 20.0;
inline constexpr int kDefaultFrameCadence = 2;

/// Executes a composed application graph over the virtual clock: pumps the
/// event calendar, merges navigation sources, captures per-frame metrics,
/// and emits deployment plans.
class Runtime {
public:
    explicit Runtime(Environment& env);

    // -- composition-time registration ------------------------------------
    void register_compute(ComputeBase& c);
    void register_sensor(const std::string& id, const std::string& owner,
                         const std::string& channel, bool is_camera);
    void register_analytic(const std::string& name, const std::string& binding);
    void add_analytic_edge(const std::string& name, const std::string& input_channel,
                           const std::string& output_channel, bool input_is_frame,
                           bool emits_navigation);
    void register_nav_sources(Robot& robot, std::vector<Stream<NavigationCommand>*> sources);
    void register_list_navigation(Robot& robot, std::size_t n_commands);
    void track_stream_drops(const std::string& name, std::function<std::int64_t()> getter);

    // -- knobs -------------------------------------------------------------
    void set_frame_cadence(int every_nth);
    int frame_cadence() const { return frame_cadence_; }
    /// Cadence applied when an analytic subscribes to this channel:
    /// camera sensor channels run at the frame cadence, everything else at 1.
    int cadence_for_stream(const std::string& channel) const;
    void set_virtual_dispatch_delay_ms(double ms);
    double virtual_dispatch_delay_ms() const { return dispatch_delay_ms_; }
    void set_nav_freshness_ms(double ms) { freshness_ms_ = ms; }

    // -- metrics hooks (called by sensors / analytics machinery) -----------
    void note_frame_captured(const std::string& channel, std::int64_t seq, double t_ms);
    void note_dispatch(const std::string& analytic, std::int64_t frame_seq, double t_capture_ms,
                       double t_dispatch_ms);
    void note_chain_submit(const std::string& analytic, std::int64_t frame_seq,
                           double t_submit_ms);
    void note_completion(const std::string& analytic, std::int64_t frame_seq,
                         const CompletionInfo& info, std::int64_t wall_start_ns,
                         std::int64_t wall_end_ns);
    void note_command(const std::string& analytic, std::int64_t frame_seq, double t_ms);
    void record_alert(AlertRecord alert);
    std::int64_t wall_now_ns() const;
    bool wall_mode() const { return mode_ == RunMode::Wall; }
    /// Called by the environment after each kinematics tick; samples the
    /// tracked robot's trajectory and battery while a run is in progress.
    void on_tick(double t_ms);

    // -- navigation merge ---------------------------------------------------
    /// The active stream command for this robot at `now_ms`, or nullptr for
    /// hover. Applies priority, the freshness window, velocity expiry, and
    /// the terminal-Land latch.
    const NavigationCommand* active_stream_command(const Robot& robot, double now_ms);
    bool land_latched(const Robot& robot) const;

    // -- execution -----------------------------------------------------------
    RunMetrics run(double duration_ms, RunMode mode = RunMode::Virtual);
    nlohmann::ordered_json emit_plan() const;
    void validate_graph() const { graph_.validate(); }
    const ApplicationGraph& graph() const { return graph_; }
    ApplicationGraph& graph() { return graph_; }

    JobLog& job_log() { return job_log_; }
    const std::vector<AlertRecord>& alerts() const { return alerts_; }
    EventCalendar& calendar();
    const RunMetrics& last_metrics() const { return metrics_; }

private:
    struct RobotNav {
        Robot* robot = nullptr;
        std::vector<NavSourceState> sources;
        std::vector<std::pair<Stream<NavigationCommand>*, SubscriptionId>> subscriptions;
        bool land_latched = false;
    };

    void resolve_metrics_chain();
    FrameRecord* record_for(std::int64_t frame_seq);

    Environment& env_;
    ApplicationGraph graph_;
    JobLog job_log_;
    std::vector<AlertRecord> alerts_;
    RunMetrics metrics_;
    std::map<std::int64_t, std::size_t> frame_index_;
    std::map<std::string, std::function<std::int64_t()>> drop_getters_;
    std::vector<std::string> camera_channels_;
    std::map<std::string, std::pair<std::int64_t, std::int64_t>> last_capture_wall_;
    // Deque: subscriptions hold pointers to entries, so references must
    // stay stable as more robots register.
    std::deque<RobotNav> robot_nav_;
    std::vector<std::string> chain_analytics_;
    Robot* recording_robot_ = nullptr;
    RunMode mode_ = RunMode::Virtual;
    int frame_cadence_ = kDefaultFrameCadence;
    double dispatch_delay_ms_ = 0.0;
    double freshness_ms_ = kDefaultFreshnessMs;
    double tick_ms_ = kDefaultTickMs;
    std::chrono::steady_clock::time_point wall_epoch_ = std::chrono::steady_clock::now();
};

/// Peak resident set size of this process, in bytes (0 if unavailable).
std::int64_t read_peak_rss_bytes();

} // namespace droneflow
