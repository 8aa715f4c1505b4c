#pragma once

#include <filesystem>
#include <memory>
#include <set>
#include <string>
#include <type_traits>
#include <vector>

#include "droneflow/aerodata.hpp"
#include "droneflow/calendar.hpp"
#include "droneflow/compute.hpp"
#include "droneflow/csvio.hpp"
#include "droneflow/detector.hpp"
#include "droneflow/navigation.hpp"
#include "droneflow/pid.hpp"
#include "droneflow/runtime.hpp"
#include "droneflow/vision.hpp"

namespace droneflow {

/// Deployable analytic. Every analytic must be deployed onto a compute
/// resource (or scheduler) before use; processing each item is charged to
/// that target through the compute layer's job submission.
class AnalyticBase {
public:
    explicit AnalyticBase(std::string name) : name_(std::move(name)) {}
    virtual ~AnalyticBase() = default;

    const std::string& name() const { return name_; }

    void deploy(ComputeBase& target) {
        if (!target.can_run(name_)) {
            throw DeployError("no service time configured for '" + name_ + "' on '" +
                              target.id() + "'");
        }
        deployment_ = &target;
        target.runtime().register_compute(target);
        target.runtime().register_analytic(name_, target.id());
        on_deploy();
    }

    bool deployed() const { return deployment_ != nullptr; }

    ComputeBase& deployment() const {
        require_deployed();
        return *deployment_;
    }

protected:
    virtual void on_deploy() {}

    void require_deployed() const {
        if (!deployment_) {
            throw DeployError("analytic '" + name_ + "' used before deploy");
        }
    }
    Runtime& runtime() const { return deployment().runtime(); }

    std::string output_channel_name() {
        ++output_count_;
        if (output_count_ == 1) return name_ + ".out";
        return name_ + ".out" + std::to_string(output_count_);
    }

private:
    std::string name_;
    ComputeBase* deployment_ = nullptr;
    int output_count_ = 0;
};

/// Typed analytic: consumes a stream of In, emits zero or more Out per
/// item. Input items are submitted as jobs to the deployed target; the
/// transform runs when the job's result returns and outputs are published
/// with that completion timestamp, so pipeline latency accounting is exact
/// in virtual time.
///
/// Frame inputs wired from a camera sensor stream honor the runtime's
/// frame cadence (analysis on every alternate frame by default).
template <typename In, typename Out>
class Analytic : public AnalyticBase {
public:
    using AnalyticBase::AnalyticBase;

    ~Analytic() override {
        for (auto& [stream, sub] : subscriptions_) stream->unsubscribe(sub);
    }

    Stream<Out>& analyse(Stream<In>& input) {
        require_deployed();
        auto out = std::make_unique<Stream<Out>>(output_channel_name());
        Stream<Out>* out_ptr = out.get();
        outputs_.push_back(std::move(out));

        Runtime& rt = runtime();
        rt.add_analytic_edge(name(), input.name(), out_ptr->name(),
                             std::is_same_v<In, Frame>, emits_navigation());
        rt.track_stream_drops(out_ptr->name(), [out_ptr] { return out_ptr->drop_count(); });

        // Cadence is a graph-level setting resolved per item, so it can be
        // reconfigured after wiring but before the run.
        const std::string channel = input.name();
        auto sub = input.subscribe(
            [this, out_ptr, channel](const AeroData<In>& item, std::int64_t seq) {
                if (std::is_same_v<In, Frame>) {
                    const int cadence = runtime().cadence_for_stream(channel);
                    if (cadence > 1 && (seq % cadence) != 0) return;
                }
                dispatch(std::make_shared<const AeroData<In>>(item), seq, out_ptr);
            });
        subscriptions_.emplace_back(&input, sub);
        on_wired(*out_ptr);
        return *out_ptr;
    }

protected:
    virtual std::vector<Out> transform(const AeroData<In>& item, double t_out_ms) = 0;
    virtual bool emits_navigation() const { return false; }
    /// Called once per analyse() after the pipe is set up.
    virtual void on_wired(Stream<Out>&) {}

    Stream<Out>* primary_output() {
        return outputs_.empty() ? nullptr : outputs_.front().get();
    }

private:
    void dispatch(std::shared_ptr<const AeroData<In>> item, std::int64_t seq,
                  Stream<Out>* out) {
        Runtime& rt = runtime();
        const double delay = rt.virtual_dispatch_delay_ms();
        if (delay > 0.0) {
            rt.calendar().schedule(rt.calendar().now() + delay,
                                   [this, item, seq, out] { submit_item(item, seq, out); });
        } else {
            submit_item(item, seq, out);
        }
    }

    void submit_item(std::shared_ptr<const AeroData<In>> item, std::int64_t seq,
                     Stream<Out>* out) {
        Runtime& rt = runtime();
        const std::int64_t prov = std::is_same_v<In, Frame> ? seq : item->provenance();
        rt.note_dispatch(name(), prov, item->timestamp_ms(), rt.calendar().now());
        rt.note_chain_submit(name(), prov, rt.calendar().now());
        deployment().submit(name(), prov, [this, item, prov, out](const CompletionInfo& c) {
            Runtime& rt2 = runtime();
            const std::int64_t w0 = rt2.wall_now_ns();
            std::vector<Out> outs = transform(*item, c.t_return_ms);
            const std::int64_t w1 = rt2.wall_now_ns();
            rt2.note_completion(name(), prov, c, w0, w1);
            bool published = false;
            for (auto& o : outs) {
                out->publish(std::move(o), c.t_return_ms, prov);
                published = true;
            }
            if (published && emits_navigation()) {
                rt2.note_command(name(), prov, c.t_return_ms);
            }
        });
    }

    std::vector<std::unique_ptr<Stream<Out>>> outputs_;
    std::vector<std::pair<Stream<In>*, SubscriptionId>> subscriptions_;
};

/// Analytic whose outputs are navigation commands; generate_navigation is
/// the domain-facing alias for analyse.
template <typename In>
class NavigableAnalytic : public Analytic<In, NavigationCommand> {
public:
    using Analytic<In, NavigationCommand>::Analytic;

    Stream<NavigationCommand>& generate_navigation(Stream<In>& input) {
        return this->analyse(input);
    }

protected:
    bool emits_navigation() const override { return true; }
};

/// Deterministic stand-in for a learned object detector: finds the largest
/// connected bright region and reports it under this analytic's label.
class BlobDetectionAnalytic : public Analytic<Frame, BoundingBox> {
public:
    BlobDetectionAnalytic(std::string name, std::string label,
                          BlobDetectorConfig config = {})
        : Analytic(std::move(name)), label_(std::move(label)), config_(config) {}

protected:
    std::vector<BoundingBox> transform(const AeroData<Frame>& item, double) override {
        return builtin_blob_detector(item.get_data(), config_, label_);
    }

private:
    std::string label_;
    BlobDetectorConfig config_;
};

/// Visual-servo follower: one body-frame velocity command per detection.
/// Yaw centers the box horizontally, the vertical channel centers it
/// vertically, and the forward channel regulates apparent box area as a
/// distance proxy. Emits Hover when detections stop arriving for longer
/// than the configured timeout.
class FollowObjectNavigation : public NavigableAnalytic<BoundingBox> {
public:
    explicit FollowObjectNavigation(std::string name, PidGains gains = {});

    void set_target_area(double area);
    void set_no_target_timeout_ms(double ms);
    double target_area() const { return target_area_; }

protected:
    std::vector<NavigationCommand> transform(const AeroData<BoundingBox>& item,
                                             double t_out_ms) override;
    void on_wired(Stream<NavigationCommand>& out) override;

private:
    void starvation_check(double t_check_ms);

    PidGains gains_;
    PidController yaw_pid_;
    PidController vertical_pid_;
    PidController forward_pid_;
    double target_area_ = 0.23;
    double timeout_ms_ = 1000.0;
    double nominal_period_ms_ = 100.0;
    double last_arrival_ms_ = -1.0;
    double wired_at_ms_ = 0.0;
    Stream<NavigationCommand>* out_ = nullptr;
};

/// Emergency commands from body-pose labels: a raised hand lands the
/// drone; a detected fall holds position and raises an alert.
class BodyPoseNavigation : public NavigableAnalytic<Frame> {
public:
    using NavigableAnalytic<Frame>::NavigableAnalytic;

protected:
    std::vector<NavigationCommand> transform(const AeroData<Frame>& item,
                                             double t_out_ms) override;
};

/// Turns confident detections into alert records, suppressing duplicates
/// inside a sliding window.
class FireAlertAnalytics : public Analytic<BoundingBox, AlertRecord> {
public:
    explicit FireAlertAnalytics(std::string name, double confidence_threshold = 0.5,
                                double suppression_window_ms = 2000.0)
        : Analytic(std::move(name)),
          threshold_(confidence_threshold),
          window_ms_(suppression_window_ms) {}

protected:
    std::vector<AlertRecord> transform(const AeroData<BoundingBox>& item,
                                       double t_out_ms) override;

private:
    double threshold_;
    double window_ms_;
    double last_alert_ms_ = -1.0;
};

/// Persists every item of the analysed streams under a directory, one file
/// per stream: scalar/tuple streams as timestamped CSV rows, frames as
/// numbered binary files plus a manifest.
class SaveDataAnalytics : public AnalyticBase {
public:
    SaveDataAnalytics(std::string name, std::filesystem::path directory)
        : AnalyticBase(std::move(name)), dir_(std::move(directory)) {}

    template <typename E>
    Stream<E>& analyse(Stream<E>& input) {
        require_deployed();
        auto pipe = std::make_unique<Pipe<E>>();
        pipe->out = std::make_unique<Stream<E>>(output_channel_name(), input.capacity());
        pipe->in = &input;
        pipe->stream_id = input.name();
        Pipe<E>* p = pipe.get();
        pipes_.push_back(std::move(pipe));

        Runtime& rt = runtime();
        // Storage, not vision: never the head of the latency chain and not
        // subject to the frame cadence.
        rt.add_analytic_edge(name(), input.name(), p->out->name(), false, false);
        open_sink(*p);
        p->sub = input.subscribe([this, p](const AeroData<E>& item, std::int64_t seq) {
            auto keep = std::make_shared<const AeroData<E>>(item);
            deployment().submit(name(), std::is_same_v<E, Frame> ? seq : item.provenance(),
                                [this, keep, p, seq](const CompletionInfo& c) {
                                    write_item(*p, *keep, seq);
                                    p->out->publish(keep->get_data(), c.t_return_ms,
                                                    keep->provenance());
                                });
        });
        return *p->out;
    }

protected:
    void on_deploy() override;

private:
    struct PipeBase {
        virtual ~PipeBase() = default;
    };
    template <typename E>
    struct Pipe : PipeBase {
        std::unique_ptr<Stream<E>> out;
        Stream<E>* in = nullptr;
        SubscriptionId sub{};
        std::string stream_id;
        CsvFile file;
        ~Pipe() override {
            if (in) in->unsubscribe(sub);
        }
    };

    void open_sink(Pipe<double>& p) { p.file.open(dir_ / (p.stream_id + ".csv"), "t_ms,value"); }
    void open_sink(Pipe<Vec3>& p) { p.file.open(dir_ / (p.stream_id + ".csv"), "t_ms,x,y,z"); }
    void open_sink(Pipe<OdomSample>& p) {
        p.file.open(dir_ / (p.stream_id + ".csv"), "t_ms,x,y,z,yaw");
    }
    void open_sink(Pipe<BoundingBox>& p) {
        p.file.open(dir_ / (p.stream_id + ".csv"), "t_ms,label,confidence,cx,cy,w,h");
    }
    void open_sink(Pipe<Frame>& p) {
        p.file.open(dir_ / (p.stream_id + "_manifest.csv"), "seq,t_ms,filename");
    }

    void write_item(Pipe<double>& p, const AeroData<double>& item, std::int64_t);
    void write_item(Pipe<Vec3>& p, const AeroData<Vec3>& item, std::int64_t);
    void write_item(Pipe<OdomSample>& p, const AeroData<OdomSample>& item, std::int64_t);
    void write_item(Pipe<BoundingBox>& p, const AeroData<BoundingBox>& item, std::int64_t);
    void write_item(Pipe<Frame>& p, const AeroData<Frame>& item, std::int64_t seq);

    std::filesystem::path dir_;
    std::vector<std::unique_ptr<PipeBase>> pipes_;
};

/// Pass-through monitor writing battery and trajectory time series for the
/// wired sensor streams.
class MonitoringAnalytics : public AnalyticBase {
public:
    MonitoringAnalytics(std::vector<std::string> metrics, std::filesystem::path directory);

    Stream<OdomSample>& analyse(Stream<OdomSample>& odometry);
    Stream<double>& analyse(Stream<double>& battery);

protected:
    void on_deploy() override;

private:
    bool wants(const std::string& metric) const { return metrics_.contains(metric); }

    std::set<std::string> metrics_;
    std::filesystem::path dir_;
    CsvFile trajectory_csv_;
    CsvFile battery_csv_;
    std::unique_ptr<Stream<OdomSample>> odom_out_;
    std::unique_ptr<Stream<double>> battery_out_;
    std::vector<std::pair<Stream<OdomSample>*, SubscriptionId>> odom_subs_;
    std::vector<std::pair<Stream<double>*, SubscriptionId>> battery_subs_;

public:
    ~MonitoringAnalytics() override;
};

/// Probe that a directory exists and is writable; throws IoError.
void ensure_writable_directory(const std::filesystem::path& dir);

} // namespace droneflow
