#ifndef COGSIM_MAC_CONTROL_HPP
#define COGSIM_MAC_CONTROL_HPP

#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <vector>

#include "cogsim/frames.hpp"
#include "cogsim/rng.hpp"
#include "cogsim/sim_core.hpp"

namespace cogsim {

// The two prioritized frame classes on the 2.4 GHz control channel: 60 GHz
// channel requests contend with a tighter window than plain WiFi traffic.
enum class AccessCategory { Req60 = 0, Wifi24 = 1 };
constexpr int kCategoryCount = 2;

struct AccessCategoryParams {
    int cw_min = 0;
    int cw_max = 0;
    int retry_limit = 0;
    SimTime sifs;
    SimTime difs;
    SimTime slot;
    std::uint64_t ctrl_rate_bps = 0; // RTS/CTS/ACK and small management frames
    std::uint64_t data_rate_bps = 0; // body-bearing frames
};

// Both categories contend on the same 2.4 GHz channel, so they share the
// 2.4 GHz slot/SIFS/DIFS timing. aifs_differentiation additionally gives
// Req60 the shorter DIFS = SIFS + slot row (off by default).
AccessCategoryParams category_params(AccessCategory cat, bool aifs_differentiation = false);

// Scenario-level MAC knobs, indexed by AccessCategory where per-category.
struct MacConfig {
    bool aifs_differentiation = false;
    int cw_min[2] = {defaults::kReq60CwMin, defaults::kWifi24CwMin};
    int cw_max[2] = {defaults::kReq60CwMax, defaults::kWifi24CwMax};
    int retry_limit[2] = {defaults::kRetryLimit, defaults::kRetryLimit};
    std::int64_t sifs_us = defaults::kSifs24Us;
    std::int64_t slot_us = defaults::kSlot24Us;

    AccessCategoryParams build(AccessCategory cat) const;
};

struct BackoffState {
    AccessCategory category = AccessCategory::Wifi24;
    int retry_count = 0;
    int remaining_slots = 0;
    int cw_current = 0;
};

// Contention window after `retry_count` failures: min(cw_min * 2^k, cw_max).
int contention_window(const AccessCategoryParams& params, int retry_count);

// Draws the backoff for the state's current retry stage and stores it.
int next_backoff(BackoffState& state, const AccessCategoryParams& params, RngStream& rng);

struct MacTxResult {
    bool delivered = false;
    SimTime grant_time;    // start of the winning RTS
    SimTime done_time;     // end of the full exchange (or of the drop)
    SimTime access_delay;  // grant_time - enqueue time
    int retries = 0;
};

struct PendingFrame {
    FrameSpec frame;
    AccessCategory category = AccessCategory::Wifi24;
    SimTime enqueued_at;
    NodeId dest = kNoNode;
    std::function<void(const MacTxResult&)> on_done; // optional
};

// Per-channel counters, split by category. The channel only counts; rates and
// means are derived at finalize time.
struct MacChannelStats {
    std::uint64_t generated[kCategoryCount] = {0, 0};
    std::uint64_t attempts[kCategoryCount] = {0, 0};
    std::uint64_t successes[kCategoryCount] = {0, 0};
    std::uint64_t collisions[kCategoryCount] = {0, 0};
    std::uint64_t dropped[kCategoryCount] = {0, 0};
    std::uint64_t backoff_decrements[kCategoryCount] = {0, 0};
    std::int64_t access_delay_ns_sum[kCategoryCount] = {0, 0};

    std::uint64_t queued_at_end[kCategoryCount] = {0, 0}; // filled on finalize

    // Per-slot transmission probability of the saturation model: attempts over
    // slots in which a station's backoff process was live (decrement or
    // transmit), frozen busy periods excluded.
    double tau(AccessCategory cat) const {
        const auto i = static_cast<int>(cat);
        const double denom = static_cast<double>(attempts[i] + backoff_decrements[i]);
        return denom > 0 ? static_cast<double>(attempts[i]) / denom : 0.0;
    }
    double success_ratio(AccessCategory cat) const {
        const auto i = static_cast<int>(cat);
        return attempts[i] > 0 ? static_cast<double>(successes[i]) / static_cast<double>(attempts[i])
                               : 0.0;
    }
    double mean_access_delay_us(AccessCategory cat) const {
        const auto i = static_cast<int>(cat);
        return successes[i] > 0
                   ? static_cast<double>(access_delay_ns_sum[i]) / 1000.0 / static_cast<double>(successes[i])
                   : 0.0;
    }
};

class ControlChannel;

// One node's seat on the control channel: a FIFO frame queue plus the backoff
// state of the head frame.
class MacStation {
public:
    MacStation(NodeId id, RngStream backoff_rng) : id_(id), rng_(std::move(backoff_rng)) {}

    NodeId id() const { return id_; }
    bool has_frame() const { return !queue_.empty(); }
    std::size_t queue_length() const { return queue_.size(); }

private:
    friend class ControlChannel;

    NodeId id_;
    RngStream rng_;
    std::deque<PendingFrame> queue_;
    BackoffState backoff_;
    bool contending_ = false;   // head frame has a live backoff
    SimTime ready_at_;          // earliest boundary this station may act on
};

// Slotted CSMA/CA with RTS/CTS/ACK over one shared medium. Stations decrement
// their backoff in idle slots, freeze while the channel is busy, and collide
// when they reach zero in the same slot. The slot grid is anchored DIFS after
// the channel last went idle.
class ControlChannel {
public:
    ControlChannel(Simulator& sim, bool aifs_differentiation = false);

    void set_params(AccessCategory cat, const AccessCategoryParams& params);
    // Sets both categories at once; needed when the shared channel timing
    // (slot, SIFS) itself changes.
    void set_params(const AccessCategoryParams& req60, const AccessCategoryParams& wifi24);
    const AccessCategoryParams& params(AccessCategory cat) const {
        return params_[static_cast<int>(cat)];
    }

    MacStation& add_station(NodeId id, RngStream backoff_rng);
    MacStation* station(NodeId id);

    // Entry point for every sender: traffic generators and the controller.
    void enqueue(MacStation& st, PendingFrame frame);

    const MacChannelStats& stats() const { return stats_; }
    MacChannelStats& mutable_stats() { return stats_; }

    // Queue audit for the conservation identity, called once at run end.
    void finalize_stats();

private:
    enum class State { Quiescent, Slotted, Busy };

    void start_contention(MacStation& st);
    void arm_grid(SimTime idle_from);
    void schedule_boundary(SimTime at);
    void on_boundary(SimTime at);
    void begin_exchange(std::vector<MacStation*>& transmitters, SimTime at);
    void on_busy_end();
    void frame_done(MacStation& st, bool delivered, SimTime grant, const MacTxResult& result);
    // The 1024-byte data-class frames are RTS/CTS protected; requests and
    // responses shorter than an RTS itself go out bare.
    static bool uses_rts(FrameKind kind) {
        return kind == FrameKind::Data || kind == FrameKind::AssocReq;
    }
    SimTime first_tx_airtime(const PendingFrame& f, const AccessCategoryParams& p) const;
    SimTime success_duration(const PendingFrame& f, const AccessCategoryParams& p) const;
    SimTime collision_duration(const std::vector<MacStation*>& transmitters) const;
    std::uint64_t payload_rate(const PendingFrame& f, const AccessCategoryParams& p) const;

    Simulator& sim_;
    AccessCategoryParams params_[kCategoryCount];
    std::vector<std::unique_ptr<MacStation>> stations_;
    MacChannelStats stats_;

    State state_ = State::Quiescent;
    SimTime busy_until_;
    std::uint64_t grid_epoch_ = 0; // invalidates stale boundary events
};

} // namespace cogsim

#endif
