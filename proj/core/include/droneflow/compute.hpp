#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <json.hpp>

#include "droneflow/config.hpp"

namespace droneflow {

class EventCalendar;
class Runtime;
class ComputeResource;

enum class SchedulerPolicy { EdgeOnly, CloudOnly, RoundRobinEC, QueueAware };

SchedulerPolicy scheduler_policy_from_string(const std::string& s);
/// CLI/config token ("edge-only", "queue-aware", ...).
std::string to_string(SchedulerPolicy p);
/// Human-facing label used in plans, properties and summaries. The
/// queue-aware policy is labeled "DEMS-like": it is a greedy stand-in for
/// the external scheduler it approximates, not that scheduler itself.
std::string policy_label(SchedulerPolicy p);
const std::vector<std::string>& scheduler_policy_names();

/// Timeline of one processed job, fully determined at submit time.
struct CompletionInfo {
    std::int64_t job_id = -1;
    std::string resource_id;
    double t_submit_ms = 0.0;
    double t_start_ms = 0.0;  // service start on the resource
    double t_end_ms = 0.0;    // service end
    double t_return_ms = 0.0; // result back at the submitter

    double latency_ms() const { return t_return_ms - t_submit_ms; }
    double queue_wait_ms(double network_delay_ms) const {
        return t_start_ms - (t_submit_ms + network_delay_ms);
    }
};

struct InferenceJob {
    std::int64_t job_id = -1;
    std::string analytic;
    std::int64_t frame_seq = -1;
    std::string resource_id;
    double t_submit_ms = 0.0;
    double t_start_ms = 0.0;
    double t_end_ms = 0.0;
    double t_return_ms = 0.0;
    double latency_ms = 0.0;
};

/// Append-only record of every job processed in a run.
class JobLog {
public:
    std::int64_t next_job_id() { return next_id_++; }
    void append(InferenceJob job) { jobs_.push_back(std::move(job)); }
    const std::vector<InferenceJob>& jobs() const { return jobs_; }
    std::size_t size() const { return jobs_.size(); }
    void clear() {
        jobs_.clear();
        next_id_ = 0;
    }

private:
    std::vector<InferenceJob> jobs_;
    std::int64_t next_id_ = 0;
};

/// Common surface of edge/cloud resources and schedulers: something an
/// analytic can be deployed onto.
class ComputeBase {
public:
    ComputeBase(std::string id, EventCalendar& calendar, Runtime& runtime)
        : id_(std::move(id)), calendar_(calendar), runtime_(runtime) {}
    virtual ~ComputeBase() = default;

    const std::string& id() const { return id_; }
    virtual ComputeKind kind() const = 0;

    /// True when a service time is configured for `analytic` (on every
    /// member, for schedulers).
    virtual bool can_run(const std::string& analytic) const = 0;

    /// getComputeProperties(): kind, capacity, service times, delays;
    /// member ids and policy for schedulers.
    virtual nlohmann::ordered_json properties() const = 0;

    /// Queue the job, compute its timeline, and deliver `on_complete` at the
    /// virtual instant the result is back. Returns the timeline immediately.
    CompletionInfo submit(const std::string& analytic, std::int64_t frame_seq,
                          std::function<void(const CompletionInfo&)> on_complete);

    Runtime& runtime() { return runtime_; }
    EventCalendar& calendar() { return calendar_; }

protected:
    /// Resolve which concrete resource executes this job.
    virtual ComputeResource& route(const std::string& analytic) = 0;

    std::string id_;
    EventCalendar& calendar_;
    Runtime& runtime_;
};

/// A single edge or cloud resource: `capacity` concurrent slots, FIFO
/// admission, fixed one-way network delay, per-analytic service times.
class ComputeResource : public ComputeBase {
public:
    ComputeResource(const ComputeSpec& spec, EventCalendar& calendar, Runtime& runtime,
                    std::uint64_t seed);

    ComputeKind kind() const override { return kind_; }
    bool can_run(const std::string& analytic) const override {
        return service_times_ms_.contains(analytic);
    }
    nlohmann::ordered_json properties() const override;

    double network_delay_ms() const { return network_delay_ms_; }
    int capacity() const { return capacity_; }
    double service_time_ms(const std::string& analytic) const;

    /// Estimated completion for a job submitted now:
    /// 2 x network delay + queue wait + service time.
    double estimate_completion_ms(const std::string& analytic, double now_ms) const;

    /// Jobs admitted but not yet started at `now_ms`.
    int queue_length(double now_ms) const;

    /// Assign the job to the earliest-free slot. Start times per resource
    /// are FIFO in admission order.
    CompletionInfo admit(const std::string& analytic, double now_ms);

    /// Uniform +-10% service-time jitter drawn from the root seed. Off by
    /// default so runs stay exactly reproducible against configured values.
    void set_service_jitter(bool enabled) { jitter_enabled_ = enabled; }

protected:
    ComputeResource& route(const std::string&) override { return *this; }

private:
    ComputeKind kind_;
    std::map<std::string, double> service_times_ms_;
    int capacity_;
    double network_delay_ms_;
    std::vector<double> slot_free_at_ms_;
    mutable std::vector<double> pending_starts_ms_;
    bool jitter_enabled_ = false;
    std::mt19937_64 rng_;
};

/// Selects which member runs a job under `policy` at decision time
/// `now_ms`. `rr_counter` carries round-robin state across calls.
ComputeResource& pick_member(SchedulerPolicy policy,
                             const std::vector<ComputeResource*>& members,
                             const std::string& analytic, double now_ms,
                             std::uint64_t& rr_counter);

/// A scheduler wrapping edge/cloud members and placing each job per its
/// policy. Members keep their own queues; the scheduler adds no latency.
class SchedulerResource : public ComputeBase {
public:
    SchedulerResource(const ComputeSpec& spec, std::vector<ComputeResource*> members,
                      EventCalendar& calendar, Runtime& runtime);

    ComputeKind kind() const override { return ComputeKind::Scheduler; }
    bool can_run(const std::string& analytic) const override;
    nlohmann::ordered_json properties() const override;

    SchedulerPolicy policy() const { return policy_; }
    void set_policy(SchedulerPolicy p);
    const std::vector<ComputeResource*>& members() const { return members_; }

    struct Decision {
        double t_ms;
        std::string analytic;
        std::string chosen;
        std::vector<std::pair<std::string, double>> estimates;
    };
    const std::vector<Decision>& decisions() const { return decisions_; }

protected:
    ComputeResource& route(const std::string& analytic) override;

private:
    std::vector<ComputeResource*> members_;
    SchedulerPolicy policy_;
    std::uint64_t rr_counter_ = 0;
    std::vector<Decision> decisions_;
};

} // namespace droneflow
