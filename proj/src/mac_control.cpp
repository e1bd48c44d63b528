#include "cogsim/mac_control.hpp"

#include <algorithm>
#include <memory>

namespace cogsim {

AccessCategoryParams category_params(AccessCategory cat, bool aifs_differentiation) {
    AccessCategoryParams p;
    p.retry_limit = defaults::kRetryLimit;
    p.sifs = SimTime::us(defaults::kSifs24Us);
    p.slot = SimTime::us(defaults::kSlot24Us);
    p.difs = p.sifs + p.slot * 2;
    p.ctrl_rate_bps = defaults::kCtrlRateBps;
    p.data_rate_bps = defaults::kWifiDataRateBps;
    if (cat == AccessCategory::Req60) {
        p.cw_min = defaults::kReq60CwMin;
        p.cw_max = defaults::kReq60CwMax;
        if (aifs_differentiation) p.difs = p.sifs + p.slot;
    } else {
        p.cw_min = defaults::kWifi24CwMin;
        p.cw_max = defaults::kWifi24CwMax;
    }
    return p;
}

AccessCategoryParams MacConfig::build(AccessCategory cat) const {
    AccessCategoryParams p = category_params(cat, aifs_differentiation);
    const auto c = static_cast<int>(cat);
    p.cw_min = cw_min[c];
    p.cw_max = cw_max[c];
    p.retry_limit = retry_limit[c];
    p.sifs = SimTime::us(sifs_us);
    p.slot = SimTime::us(slot_us);
    p.difs = cat == AccessCategory::Req60 && aifs_differentiation ? p.sifs + p.slot
                                                                  : p.sifs + p.slot * 2;
    return p;
}

int contention_window(const AccessCategoryParams& params, int retry_count) {
    long cw = params.cw_min;
    for (int i = 0; i < retry_count && cw < params.cw_max; ++i) cw *= 2;
    return static_cast<int>(std::min<long>(cw, params.cw_max));
}

int next_backoff(BackoffState& state, const AccessCategoryParams& params, RngStream& rng) {
    state.cw_current = contention_window(params, state.retry_count);
    state.remaining_slots = static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(state.cw_current)));
    return state.remaining_slots;
}

ControlChannel::ControlChannel(Simulator& sim, bool aifs_differentiation) : sim_(sim) {
    params_[static_cast<int>(AccessCategory::Req60)] =
        category_params(AccessCategory::Req60, aifs_differentiation);
    params_[static_cast<int>(AccessCategory::Wifi24)] =
        category_params(AccessCategory::Wifi24, aifs_differentiation);
}

void ControlChannel::set_params(AccessCategory cat, const AccessCategoryParams& params) {
    params_[static_cast<int>(cat)] = params;
    // Both categories ride the same physical channel.
    if (params_[0].slot != params_[1].slot || params_[0].sifs != params_[1].sifs)
        throw ConfigError("access categories must share the channel slot time and SIFS");
}

void ControlChannel::set_params(const AccessCategoryParams& req60,
                                const AccessCategoryParams& wifi24) {
    params_[static_cast<int>(AccessCategory::Req60)] = req60;
    set_params(AccessCategory::Wifi24, wifi24);
}

MacStation& ControlChannel::add_station(NodeId id, RngStream backoff_rng) {
    stations_.push_back(std::make_unique<MacStation>(id, std::move(backoff_rng)));
    return *stations_.back();
}

MacStation* ControlChannel::station(NodeId id) {
    for (auto& st : stations_)
        if (st->id() == id) return st.get();
    return nullptr;
}

void ControlChannel::enqueue(MacStation& st, PendingFrame frame) {
    frame.enqueued_at = sim_.now();
    stats_.generated[static_cast<int>(frame.category)]++;
    st.queue_.push_back(std::move(frame));
    if (!st.contending_) start_contention(st);
}

void ControlChannel::start_contention(MacStation& st) {
    const auto& f = st.queue_.front();
    st.backoff_ = BackoffState{f.category, 0, 0, 0};
    next_backoff(st.backoff_, params(f.category), st.rng_);
    st.contending_ = true;
    if (state_ == State::Busy) return; // re-anchored when the exchange ends
    // A fresh frame senses the medium for a full DIFS before its first slot,
    // even when the channel has been idle for a while.
    st.ready_at_ = sim_.now() + params(f.category).difs;
    if (state_ == State::Quiescent) {
        state_ = State::Slotted;
        schedule_boundary(st.ready_at_);
    }
    // In Slotted state the grid is already ticking; the station joins at the
    // first boundary past ready_at_.
}

void ControlChannel::arm_grid(SimTime idle_from) {
    SimTime anchor;
    bool any = false;
    for (auto& st : stations_) {
        if (!st->contending_) continue;
        st->ready_at_ = idle_from + params(st->backoff_.category).difs;
        anchor = any ? std::min(anchor, st->ready_at_) : st->ready_at_;
        any = true;
    }
    if (!any) {
        state_ = State::Quiescent;
        return;
    }
    state_ = State::Slotted;
    schedule_boundary(anchor);
}

void ControlChannel::schedule_boundary(SimTime at) {
    const std::uint64_t epoch = ++grid_epoch_;
    sim_.schedule(at, "mac_slot", kNoNode, [this, epoch, at] {
        if (epoch != grid_epoch_ || state_ != State::Slotted) return;
        on_boundary(at);
    });
}

void ControlChannel::on_boundary(SimTime at) {
    std::vector<MacStation*> transmitters;
    std::vector<MacStation*> counting;
    bool any_contending = false;
    for (auto& st : stations_) {
        if (!st->contending_) continue;
        any_contending = true;
        if (st->ready_at_ > at) continue;
        if (st->backoff_.remaining_slots == 0)
            transmitters.push_back(st.get());
        else
            counting.push_back(st.get());
    }

    if (!transmitters.empty()) {
        begin_exchange(transmitters, at);
        return;
    }
    if (!any_contending) {
        state_ = State::Quiescent;
        return;
    }
    int dec[kCategoryCount] = {0, 0};
    for (auto* st : counting) {
        st->backoff_.remaining_slots--;
        const auto c = static_cast<int>(st->backoff_.category);
        stats_.backoff_decrements[c]++;
        dec[c]++;
    }
    if (auto* tr = sim_.trace(); tr && !counting.empty())
        (*tr) << at.nanoseconds() << " ch slot_idle d60=" << dec[0] << " d24=" << dec[1] << '\n';
    schedule_boundary(at + params_[0].slot);
}

std::uint64_t ControlChannel::payload_rate(const PendingFrame& f, const AccessCategoryParams& p) const {
    switch (f.frame.kind) {
        case FrameKind::Data:
        case FrameKind::AssocReq:
            return p.data_rate_bps;
        default:
            return p.ctrl_rate_bps; // small request/management frames
    }
}

SimTime ControlChannel::first_tx_airtime(const PendingFrame& f, const AccessCategoryParams& p) const {
    return uses_rts(f.frame.kind) ? frame_airtime(FrameSpec::of(FrameKind::Rts), p.ctrl_rate_bps)
                                  : frame_airtime(f.frame, payload_rate(f, p));
}

SimTime ControlChannel::success_duration(const PendingFrame& f, const AccessCategoryParams& p) const {
    SimTime d;
    if (uses_rts(f.frame.kind)) {
        d = frame_airtime(FrameSpec::of(FrameKind::Rts), p.ctrl_rate_bps) + p.sifs +
            frame_airtime(FrameSpec::of(FrameKind::Cts), p.ctrl_rate_bps) + p.sifs;
    }
    return d + frame_airtime(f.frame, payload_rate(f, p)) + p.sifs +
           frame_airtime(FrameSpec::of(FrameKind::Ack), p.ctrl_rate_bps);
}

SimTime ControlChannel::collision_duration(const std::vector<MacStation*>& transmitters) const {
    // The colliders time out waiting for a CTS (or ACK) that never comes; the
    // channel stays busy for the longest garbled transmission plus that wait.
    const auto& p = params_[0];
    SimTime longest;
    for (const auto* st : transmitters) {
        const auto t = first_tx_airtime(st->queue_.front(), params(st->backoff_.category));
        longest = std::max(longest, t);
    }
    return longest + p.sifs + frame_airtime(FrameSpec::of(FrameKind::Cts), p.ctrl_rate_bps);
}

void ControlChannel::begin_exchange(std::vector<MacStation*>& transmitters, SimTime at) {
    auto* tr = sim_.trace();
    for (auto* st : transmitters) {
        const auto c = static_cast<int>(st->backoff_.category);
        stats_.attempts[c]++;
        if (tr) (*tr) << at.nanoseconds() << " ch attempt st=" << st->id() << " cat=" << c << '\n';
    }

    SimTime duration;
    if (transmitters.size() == 1) {
        MacStation* st = transmitters.front();
        PendingFrame& f = st->queue_.front();
        const auto c = static_cast<int>(f.category);
        duration = success_duration(f, params(f.category));
        stats_.successes[c]++;
        stats_.access_delay_ns_sum[c] += (at - f.enqueued_at).nanoseconds();
        if (tr) (*tr) << at.nanoseconds() << " ch success st=" << st->id() << " cat=" << c
                      << " delay_ns=" << (at - f.enqueued_at).nanoseconds() << '\n';
        MacTxResult result{true, at, at + duration, at - f.enqueued_at, st->backoff_.retry_count};
        frame_done(*st, true, at, result);
    } else {
        duration = collision_duration(transmitters);
        if (tr) (*tr) << at.nanoseconds() << " ch collision n=" << transmitters.size() << '\n';
        for (auto* st : transmitters) {
            const auto c = static_cast<int>(st->backoff_.category);
            stats_.collisions[c]++;
            st->backoff_.retry_count++;
            if (st->backoff_.retry_count > params(st->backoff_.category).retry_limit) {
                stats_.dropped[c]++;
                if (tr) (*tr) << at.nanoseconds() << " ch drop st=" << st->id() << " cat=" << c << '\n';
                MacTxResult result{false, at, at + duration, at - st->queue_.front().enqueued_at,
                                   st->backoff_.retry_count - 1};
                frame_done(*st, false, at, result);
            } else {
                next_backoff(st->backoff_, params(st->backoff_.category), st->rng_);
            }
        }
    }

    busy_until_ = at + duration;
    state_ = State::Busy;
    grid_epoch_++; // stale boundaries die
    sim_.schedule(busy_until_, "mac_busy_end", kNoNode, [this] { on_busy_end(); });
}

void ControlChannel::frame_done(MacStation& st, bool /*delivered*/, SimTime /*grant*/,
                                const MacTxResult& result) {
    PendingFrame frame = std::move(st.queue_.front());
    st.queue_.pop_front();
    if (!st.queue_.empty()) {
        const auto& next = st.queue_.front();
        st.backoff_ = BackoffState{next.category, 0, 0, 0};
        next_backoff(st.backoff_, params(next.category), st.rng_);
        // stays contending; ready_at_ is re-anchored when the channel idles
    } else {
        st.contending_ = false;
    }
    if (frame.on_done)
        sim_.schedule(result.done_time, "mac_done", st.id(),
                      [cb = std::move(frame.on_done), result] { cb(result); });
}

void ControlChannel::on_busy_end() {
    arm_grid(sim_.now());
}

void ControlChannel::finalize_stats() {
    stats_.queued_at_end[0] = stats_.queued_at_end[1] = 0;
    for (auto& st : stations_)
        for (const auto& f : st->queue_)
            stats_.queued_at_end[static_cast<int>(f.category)]++;
}

} // namespace cogsim
