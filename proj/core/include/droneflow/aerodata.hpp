#pragma once

#include <cstdint>
#include <deque>
#include <functional>
#include <mutex>
#include <string>
#include <utility>
#include <vector>

#include "droneflow/errors.hpp"

namespace droneflow {

/// Items per stream unless the producer asks for something else.
inline constexpr std::size_t kDefaultStreamCapacity = 64;
/// Camera streams keep fewer frames: they are large and freshness matters.
inline constexpr std::size_t kDefaultFrameStreamCapacity = 8;

/// A single timestamped data item. Timestamps are virtual milliseconds.
///
/// `provenance` links derived items back to the originating camera frame
/// sequence number so the runtime can assemble per-frame latency records;
/// -1 means "no upstream frame".
template <typename E>
class AeroData {
public:
    AeroData(E data, double timestamp_ms, std::int64_t provenance = -1)
        : data_(std::move(data)), timestamp_ms_(timestamp_ms), provenance_(provenance) {
        if (timestamp_ms_ < 0.0) {
            throw ArgumentError("AeroData timestamp must be >= 0");
        }
    }

    const E& get_data() const { return data_; }
    E& get_data() { return data_; }

    /// Replaces the payload; the timestamp is preserved.
    void set_data(E value) { data_ = std::move(value); }

    double timestamp_ms() const { return timestamp_ms_; }
    std::int64_t provenance() const { return provenance_; }

private:
    E data_;
    double timestamp_ms_;
    std::int64_t provenance_;
};

/// An immutable, finite, ordered list of items.
template <typename E>
class ListData {
public:
    ListData() = default;
    explicit ListData(std::vector<E> items) : items_(std::move(items)) {}

    const std::vector<E>& items() const { return items_; }
    std::size_t size() const { return items_.size(); }
    bool empty() const { return items_.empty(); }
    const E& operator[](std::size_t i) const { return items_[i]; }

    auto begin() const { return items_.begin(); }
    auto end() const { return items_.end(); }

private:
    std::vector<E> items_;
};

using SubscriptionId = std::uint64_t;

/// Bounded, ordered event stream with push (callback) and pull (cursor)
/// access.
///
/// Semantics:
///  - publish assigns strictly increasing sequence numbers starting at 0
///    and requires non-decreasing timestamps;
///  - overflow evicts the oldest buffered item (drop-oldest); drop_count
///    counts evicted items that no consumer ever saw (neither pushed to a
///    subscriber nor returned by a poll);
///  - subscribers see every item published after they subscribed, in
///    publish order (delivery is synchronous on the simulation thread);
///  - poll(cursor) returns still-buffered items with sequence > cursor.
///    Evicted items are skipped silently; consumers detect loss from the
///    sequence gap. Pass kPollFromStart to read from the beginning.
template <typename E>
class Stream {
public:
    static constexpr std::int64_t kPollFromStart = -1;

    struct StampedItem {
        std::int64_t seq;
        AeroData<E> item;
        bool consumed = false;
    };
    struct PollResult {
        std::vector<StampedItem> items;
        std::int64_t cursor;
    };
    using Callback = std::function<void(const AeroData<E>&, std::int64_t seq)>;

    explicit Stream(std::string name, std::size_t capacity = kDefaultStreamCapacity)
        : name_(std::move(name)), capacity_(capacity) {
        if (capacity_ < 1) {
            throw ArgumentError("stream capacity must be >= 1");
        }
    }

    Stream(const Stream&) = delete;
    Stream& operator=(const Stream&) = delete;

    std::int64_t publish(E item, double t_ms, std::int64_t provenance = -1) {
        std::vector<std::pair<SubscriptionId, Callback>> subs;
        std::int64_t seq;
        AeroData<E> stamped(std::move(item), t_ms, provenance);
        {
            std::lock_guard lock(mutex_);
            if (t_ms < last_timestamp_ms_) {
                throw TimestampError("stream '" + name_ + "': timestamp regression");
            }
            last_timestamp_ms_ = t_ms;
            seq = next_seq_++;
            buffer_.push_back(StampedItem{seq, stamped, !subscribers_.empty()});
            if (buffer_.size() > capacity_) {
                if (!buffer_.front().consumed) ++drop_count_;
                buffer_.pop_front();
            }
            subs.assign(subscribers_.begin(), subscribers_.end());
        }
        // Deliver outside the lock so a callback may publish downstream.
        for (auto& [id, cb] : subs) {
            if (is_subscribed(id)) {
                cb(stamped, seq);
            }
        }
        return seq;
    }

    SubscriptionId subscribe(Callback cb) {
        std::lock_guard lock(mutex_);
        SubscriptionId id = next_subscription_id_++;
        subscribers_.emplace_back(id, std::move(cb));
        return id;
    }

    void unsubscribe(SubscriptionId id) {
        std::lock_guard lock(mutex_);
        std::erase_if(subscribers_, [id](const auto& s) { return s.first == id; });
    }

    PollResult poll(std::int64_t cursor) {
        std::lock_guard lock(mutex_);
        PollResult result;
        result.cursor = cursor;
        for (auto& entry : buffer_) {
            if (entry.seq > cursor) {
                entry.consumed = true;
                result.items.push_back(entry);
                result.cursor = entry.seq;
            }
        }
        return result;
    }

    const std::string& name() const { return name_; }
    std::size_t capacity() const { return capacity_; }

    std::int64_t next_seq() const {
        std::lock_guard lock(mutex_);
        return next_seq_;
    }
    std::int64_t drop_count() const {
        std::lock_guard lock(mutex_);
        return drop_count_;
    }
    std::size_t buffered() const {
        std::lock_guard lock(mutex_);
        return buffer_.size();
    }
    std::size_t subscriber_count() const {
        std::lock_guard lock(mutex_);
        return subscribers_.size();
    }
    double last_timestamp_ms() const {
        std::lock_guard lock(mutex_);
        return last_timestamp_ms_;
    }

private:
    bool is_subscribed(SubscriptionId id) const {
        std::lock_guard lock(mutex_);
        for (const auto& s : subscribers_) {
            if (s.first == id) return true;
        }
        return false;
    }

    std::string name_;
    std::size_t capacity_;
    mutable std::mutex mutex_;
    std::deque<StampedItem> buffer_;
    std::vector<std::pair<SubscriptionId, Callback>> subscribers_;
    std::int64_t next_seq_ = 0;
    std::int64_t drop_count_ = 0;
    double last_timestamp_ms_ = 0.0;
    SubscriptionId next_subscription_id_ = 0;
};

} // namespace droneflow
