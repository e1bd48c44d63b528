#ifndef COGSIM_SIM_CORE_HPP
#define COGSIM_SIM_CORE_HPP

#include <cstdint>
#include <functional>
#include <ostream>
#include <queue>
#include <string>
#include <vector>

#include "cogsim/errors.hpp"
#include "cogsim/sim_time.hpp"

namespace cogsim {

using NodeId = std::int32_t;
constexpr NodeId kNoNode = -1;

struct Event {
    SimTime fire_at;
    std::uint64_t seq = 0;    // insertion order, breaks ties deterministically
    const char* kind = "";    // short label for traces
    NodeId target = kNoNode;
    std::function<void()> action;
};

struct EventAfter {
    bool operator()(const Event& a, const Event& b) const {
        if (a.fire_at != b.fire_at) return a.fire_at > b.fire_at;
        return a.seq > b.seq;
    }
};

// Single-threaded event loop: one virtual clock, one ordered queue.
// Dispatch order is (fire_at ascending, seq ascending); distinct runs share
// nothing, so whole runs can execute in parallel.
class Simulator {
public:
    SimTime now() const { return now_; }

    void schedule(SimTime fire_at, const char* kind, NodeId target, std::function<void()> action) {
        if (fire_at < now_)
            throw ConfigError(std::string("event '") + kind + "' scheduled into the past");
        queue_.push(Event{fire_at, next_seq_++, kind, target, std::move(action)});
    }

    void schedule_in(SimTime delay, const char* kind, NodeId target, std::function<void()> action) {
        schedule(now_ + delay, kind, target, std::move(action));
    }

    // Dispatches every event with fire_at <= end, then pins the clock to end.
    // An empty queue just fast-forwards the clock.
    void run_until(SimTime end) {
        while (!queue_.empty() && queue_.top().fire_at <= end) {
            Event ev = queue_.top();
            queue_.pop();
            now_ = ev.fire_at;
            ++dispatched_;
            if (trace_) (*trace_) << ev.fire_at.nanoseconds() << " node=" << ev.target
                                  << " ev=" << ev.kind << '\n';
            ev.action();
        }
        if (now_ < end) now_ = end;
    }

    std::uint64_t dispatched_count() const { return dispatched_; }
    std::size_t pending_count() const { return queue_.size(); }

    // Optional line-delimited event trace.
    void set_trace(std::ostream* os) { trace_ = os; }
    std::ostream* trace() const { return trace_; }

private:
    SimTime now_{};
    std::uint64_t next_seq_ = 0;
    std::uint64_t dispatched_ = 0;
    std::ostream* trace_ = nullptr;
    std::priority_queue<Event, std::vector<Event>, EventAfter> queue_;
};

} // namespace cogsim

#endif
