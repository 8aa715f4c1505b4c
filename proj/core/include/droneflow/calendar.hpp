#pragma once

#include <cstdint>
#include <functional>
#include <queue>
#include <vector>

#include "droneflow/errors.hpp"

namespace droneflow {

/// Virtual-time event calendar. Events execute strictly in (timestamp,
/// insertion sequence) order; the clock only moves forward. All of the
/// simulation (kinematics ticks, sensor emissions, compute completions)
/// is driven through one calendar so runs are deterministic.
class EventCalendar {
public:
    double now() const { return now_ms_; }

    /// Schedule `fn` at virtual time `t_ms` (must not be in the past).
    void schedule(double t_ms, std::function<void()> fn) {
        if (t_ms < now_ms_) {
            throw ArgumentError("event scheduled in the past");
        }
        heap_.push(Entry{t_ms, next_insert_seq_++, std::move(fn)});
    }

    /// Execute every event with timestamp <= t_ms, then set the clock to t_ms.
    void advance_to(double t_ms) {
        if (t_ms < now_ms_) {
            throw ArgumentError("calendar cannot move backwards");
        }
        while (!heap_.empty() && heap_.top().t_ms <= t_ms) {
            // Copy out before pop: the handler may schedule new events.
            Entry e = heap_.top();
            heap_.pop();
            now_ms_ = e.t_ms;
            last_executed_t_ms_ = e.t_ms;
            ++events_executed_;
            e.fn();
        }
        now_ms_ = t_ms;
    }

    std::uint64_t events_executed() const { return events_executed_; }
    double last_executed_t_ms() const { return last_executed_t_ms_; }
    bool empty() const { return heap_.empty(); }

private:
    struct Entry {
        double t_ms;
        std::uint64_t seq;
        std::function<void()> fn;
    };
    struct Later {
        bool operator()(const Entry& a, const Entry& b) const {
            if (a.t_ms != b.t_ms) return a.t_ms > b.t_ms;
            return a.seq > b.seq;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, Later> heap_;
    double now_ms_ = 0.0;
    double last_executed_t_ms_ = 0.0;
    std::uint64_t next_insert_seq_ = 0;
    std::uint64_t events_executed_ = 0;
};

} // namespace droneflow
