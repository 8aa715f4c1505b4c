#include "droneflow/compute.hpp"

#include <algorithm>
#include <limits>

#include "droneflow/calendar.hpp"
#include "droneflow/errors.hpp"
#include "droneflow/runtime.hpp"

namespace droneflow {

SchedulerPolicy scheduler_policy_from_string(const std::string& s) {
    if (s == "edge-only") return SchedulerPolicy::EdgeOnly;
    if (s == "cloud-only") return SchedulerPolicy::CloudOnly;
    if (s == "ec") return SchedulerPolicy::RoundRobinEC;
    if (s == "queue-aware") return SchedulerPolicy::QueueAware;
    std::string names;
    for (const auto& n : scheduler_policy_names()) names += (names.empty() ? "" : ", ") + n;
    throw ValidationError("unknown scheduler policy '" + s + "' (known: " + names + ")");
}

std::string to_string(SchedulerPolicy p) {
    switch (p) {
    case SchedulerPolicy::EdgeOnly: return "edge-only";
    case SchedulerPolicy::CloudOnly: return "cloud-only";
    case SchedulerPolicy::RoundRobinEC: return "ec";
    case SchedulerPolicy::QueueAware: return "queue-aware";
    }
    return "?";
}

std::string policy_label(SchedulerPolicy p) {
    if (p == SchedulerPolicy::QueueAware) return "queue-aware (DEMS-like)";
    return to_string(p);
}

const std::vector<std::string>& scheduler_policy_names() {
    static const std::vector<std::string> names = {"edge-only", "cloud-only", "ec", "queue-aware"};
    return names;
}

CompletionInfo ComputeBase::submit(const std::string& analytic, std::int64_t frame_seq,
                                   std::function<void(const CompletionInfo&)> on_complete) {
    const double now = calendar_.now();
    ComputeResource& executor = route(analytic);
    CompletionInfo info = executor.admit(analytic, now);

    JobLog& log = runtime_.job_log();
    info.job_id = log.next_job_id();
    log.append(InferenceJob{info.job_id, analytic, frame_seq, info.resource_id, info.t_submit_ms,
                            info.t_start_ms, info.t_end_ms, info.t_return_ms, info.latency_ms()});

    if (on_complete) {
        calendar_.schedule(info.t_return_ms,
                           [cb = std::move(on_complete), info]() { cb(info); });
    }
    return info;
}

ComputeResource::ComputeResource(const ComputeSpec& spec, EventCalendar& calendar,
                                 Runtime& runtime, std::uint64_t seed)
    : ComputeBase(spec.id, calendar, runtime),
      kind_(spec.kind),
      service_times_ms_(spec.service_times_ms),
      capacity_(spec.capacity),
      network_delay_ms_(spec.network_delay_ms),
      slot_free_at_ms_(static_cast<std::size_t>(spec.capacity), 0.0),
      rng_(seed) {
    if (kind_ == ComputeKind::Scheduler) {
        throw ArgumentError("ComputeResource cannot have scheduler kind");
    }
}

double ComputeResource::service_time_ms(const std::string& analytic) const {
    auto it = service_times_ms_.find(analytic);
    if (it == service_times_ms_.end()) {
        throw DeployError("no service time configured for '" + analytic + "' on '" + id_ + "'");
    }
    return it->second;
}

double ComputeResource::estimate_completion_ms(const std::string& analytic,
                                               double now_ms) const {
    const double arrive = now_ms + network_delay_ms_;
    const double earliest_slot = *std::min_element(slot_free_at_ms_.begin(),
                                                   slot_free_at_ms_.end());
    const double queue_wait = std::max(0.0, earliest_slot - arrive);
    return 2.0 * network_delay_ms_ + queue_wait + service_time_ms(analytic);
}

int ComputeResource::queue_length(double now_ms) const {
    std::erase_if(pending_starts_ms_, [now_ms](double t) { return t <= now_ms; });
    return static_cast<int>(pending_starts_ms_.size());
}

CompletionInfo ComputeResource::admit(const std::string& analytic, double now_ms) {
    double service = service_time_ms(analytic);
    if (jitter_enabled_) {
        std::uniform_real_distribution<double> jitter(-0.1, 0.1);
        service *= 1.0 + jitter(rng_);
    }
    const double arrive = now_ms + network_delay_ms_;
    auto slot = std::min_element(slot_free_at_ms_.begin(), slot_free_at_ms_.end());
    const double t_start = std::max(arrive, *slot);
    const double t_end = t_start + service;
    *slot = t_end;
    if (t_start > now_ms) pending_starts_ms_.push_back(t_start);

    CompletionInfo info;
    info.resource_id = id_;
    info.t_submit_ms = now_ms;
    info.t_start_ms = t_start;
    info.t_end_ms = t_end;
    info.t_return_ms = t_end + network_delay_ms_;
    return info;
}

nlohmann::ordered_json ComputeResource::properties() const {
    nlohmann::ordered_json p;
    p["kind"] = to_string(kind_);
    p["capacity"] = capacity_;
    p["network_delay_ms"] = network_delay_ms_;
    nlohmann::ordered_json st;
    for (const auto& [name, ms] : service_times_ms_) st[name] = ms;
    p["service_times"] = st;
    return p;
}

ComputeResource& pick_member(SchedulerPolicy policy,
                             const std::vector<ComputeResource*>& members,
                             const std::string& analytic, double now_ms,
                             std::uint64_t& rr_counter) {
    if (members.empty()) throw ArgumentError("scheduler has no members");

    auto first_of_kind = [&](ComputeKind k) -> ComputeResource* {
        for (auto* m : members) {
            if (m->kind() == k) return m;
        }
        return nullptr;
    };

    switch (policy) {
    case SchedulerPolicy::EdgeOnly: {
        auto* m = first_of_kind(ComputeKind::Edge);
        if (!m) throw ValidationError("edge-only policy with no edge member");
        return *m;
    }
    case SchedulerPolicy::CloudOnly: {
        auto* m = first_of_kind(ComputeKind::Cloud);
        if (!m) throw ValidationError("cloud-only policy with no cloud member");
        return *m;
    }
    case SchedulerPolicy::RoundRobinEC:
        return *members[rr_counter++ % members.size()];
    case SchedulerPolicy::QueueAware: {
        ComputeResource* best = nullptr;
        double best_est = std::numeric_limits<double>::infinity();
        for (auto* m : members) {
            const double est = m->estimate_completion_ms(analytic, now_ms);
            const bool better =
                est < best_est ||
                (est == best_est && best && best->kind() != ComputeKind::Edge &&
                 m->kind() == ComputeKind::Edge);
            if (!best || better) {
                best = m;
                best_est = est;
            }
        }
        return *best;
    }
    }
    throw ArgumentError("unhandled scheduler policy");
}

SchedulerResource::SchedulerResource(const ComputeSpec& spec,
                                     std::vector<ComputeResource*> members,
                                     EventCalendar& calendar, Runtime& runtime)
    : ComputeBase(spec.id, calendar, runtime),
      members_(std::move(members)),
      policy_(scheduler_policy_from_string(spec.policy)) {
    if (members_.empty()) throw ValidationError("scheduler '" + id_ + "' has no members");
}

bool SchedulerResource::can_run(const std::string& analytic) const {
    return std::all_of(members_.begin(), members_.end(),
                       [&](const ComputeResource* m) { return m->can_run(analytic); });
}

void SchedulerResource::set_policy(SchedulerPolicy p) {
    auto has_kind = [&](ComputeKind k) {
        return std::any_of(members_.begin(), members_.end(),
                           [k](const ComputeResource* m) { return m->kind() == k; });
    };
    if (p == SchedulerPolicy::EdgeOnly && !has_kind(ComputeKind::Edge)) {
        throw ValidationError("scheduler '" + id_ + "': edge-only needs an edge member");
    }
    if (p == SchedulerPolicy::CloudOnly && !has_kind(ComputeKind::Cloud)) {
        throw ValidationError("scheduler '" + id_ + "': cloud-only needs a cloud member");
    }
    policy_ = p;
}

ComputeResource& SchedulerResource::route(const std::string& analytic) {
    const double now = calendar_.now();
    Decision d;
    d.t_ms = now;
    d.analytic = analytic;
    if (policy_ == SchedulerPolicy::QueueAware) {
        for (auto* m : members_) {
            d.estimates.emplace_back(m->id(), m->estimate_completion_ms(analytic, now));
        }
    }
    ComputeResource& chosen = pick_member(policy_, members_, analytic, now, rr_counter_);
    d.chosen = chosen.id();
    decisions_.push_back(std::move(d));
    return chosen;
}

nlohmann::ordered_json SchedulerResource::properties() const {
    nlohmann::ordered_json p;
    p["kind"] = "scheduler";
    p["policy"] = policy_label(policy_);
    nlohmann::ordered_json m = nlohmann::ordered_json::array();
    for (const auto* member : members_) m.push_back(member->id());
    p["members"] = m;
    return p;
}

} // namespace droneflow
