#include "cogsim/controller.hpp"

#include <algorithm>

namespace cogsim {

DataRoute FallbackTracker::update(bool link_available, SimTime now) {
    if (!link_available) {
        restored_since_.reset();
        if (!outage_since_) outage_since_ = now;
        if (route_ == DataRoute::Use60g && now - *outage_since_ >= policy_.outage_threshold) {
            route_ = DataRoute::Use24g;
            ++changes_;
        }
    } else {
        outage_since_.reset();
        if (!restored_since_) restored_since_ = now;
        if (route_ == DataRoute::Use24g && now - *restored_since_ >= policy_.hysteresis) {
            route_ = DataRoute::Use60g;
            ++changes_;
        }
    }
    return route_;
}

void FallbackTracker::force(DataRoute route, SimTime /*now*/) {
    if (route_ != route) ++changes_;
    route_ = route;
    outage_since_.reset();
    restored_since_.reset();
}

std::optional<SimTime> FallbackTracker::pending_flip() const {
    if (route_ == DataRoute::Use60g && outage_since_) return *outage_since_ + policy_.outage_threshold;
    if (route_ == DataRoute::Use24g && restored_since_) return *restored_since_ + policy_.hysteresis;
    return std::nullopt;
}

CogcellController::CogcellController(Simulator& sim, ControlChannel& channel,
                                     MetricsCollector& metrics, ControllerConfig config)
    : sim_(sim), channel_(channel), metrics_(metrics), config_(std::move(config)) {
    if (config_.picocell_positions.empty()) {
        for (const auto& room : config_.plan.rooms())
            config_.picocell_positions.push_back(room.center());
    }
    picocell_free_.assign(config_.picocell_positions.size(), SimTime::ns(0));
    window_claimed_.assign(config_.picocell_positions.size(), SimTime::ns(0));
    ap_station_ = &channel_.add_station(0, RngStream::for_node(config_.seed, 0, RngPurpose::Backoff));
    for (std::size_t i = 0; i < config_.picocell_positions.size(); ++i) {
        const NodeId id = static_cast<NodeId>(1000 + i);
        pico_stations_.push_back(
            config_.picocell_positions[i]
                ? &channel_.add_station(id, RngStream::for_node(config_.seed,
                                                                static_cast<std::uint32_t>(id),
                                                                RngPurpose::Backoff))
                : nullptr);
    }

    if (config_.blockage_start >= SimTime::ns(0)) {
        sim_.schedule(config_.blockage_start, "blockage", kNoNode, [this] {
            for (auto& d : devices_) {
                d.window_epoch++;
                evaluate_route(d);
            }
        });
    }
}

CogcellController::Device& CogcellController::dev(NodeId id) {
    for (auto& d : devices_)
        if (d.spec.id == id) return d;
    throw SimError("unknown device id");
}

const CogcellController::Device& CogcellController::dev(NodeId id) const {
    for (const auto& d : devices_)
        if (d.spec.id == id) return d;
    throw SimError("unknown device id");
}

DevicePhase CogcellController::phase(NodeId device) const { return dev(device).phase; }
int CogcellController::decision_changes(NodeId device) const {
    return dev(device).fallback.decision_changes();
}
int CogcellController::association_count(NodeId device) const { return dev(device).associations; }

void CogcellController::add_device(DeviceSpec spec) {
    Device d;
    d.spec = std::move(spec);
    d.fallback = FallbackTracker(config_.fallback);
    d.sched = CbapSchedule{SimTime::ns(0), config_.sectors.sector_count, config_.sectors.cbap_duration};
    const Vec2 start_pos = d.spec.trace.position_at(SimTime::ns(0));
    d.room = config_.plan.room_of(start_pos);
    if (d.room < 0) throw ConfigError("device starts outside every room");
    d.picocell = d.room < static_cast<int>(config_.picocell_positions.size()) &&
                         config_.picocell_positions[static_cast<std::size_t>(d.room)]
                     ? std::optional<int>(d.room)
                     : std::nullopt;
    const auto node = static_cast<std::uint32_t>(d.spec.id);
    d.station = &channel_.add_station(d.spec.id,
                                      RngStream::for_node(config_.seed, node, RngPurpose::Backoff));
    d.sensor_rng = RngStream::for_node(config_.seed, node, RngPurpose::SensorNoise);
    d.estimate_rng = RngStream::for_node(config_.seed, node, RngPurpose::EstimateNoise);
    devices_.push_back(std::move(d));
    Device& ref = devices_.back();

    sim_.schedule(SimTime::ns(0), "associate", ref.spec.id, [this, id = ref.spec.id] { associate(dev(id)); });
    if (ref.spec.session_start >= SimTime::ns(0)) {
        sim_.schedule(ref.spec.session_start, "session_start", ref.spec.id, [this, id = ref.spec.id] {
            Device& d2 = dev(id);
            if (d2.phase == DevicePhase::Idle) {
                d2.pending_session = true; // start as soon as association lands
                return;
            }
            start_session(d2);
        });
    }
    schedule_handovers(ref);
}

void CogcellController::associate(Device& d) {
    PendingFrame req;
    req.frame = FrameSpec::of(FrameKind::AssocReq);
    req.category = AccessCategory::Wifi24;
    req.dest = 0;
    const NodeId id = d.spec.id;
    req.on_done = [this, id](const MacTxResult& res) {
        Device& d2 = dev(id);
        if (!res.delivered) {
            associate(d2); // associations retry until they land
            return;
        }
        PendingFrame resp;
        resp.frame = FrameSpec::of(FrameKind::AssocResp);
        resp.category = AccessCategory::Wifi24;
        resp.dest = id;
        resp.on_done = [this, id](const MacTxResult& rres) {
            Device& d3 = dev(id);
            if (!rres.delivered) return;
            d3.phase = DevicePhase::WifiAssociated;
            d3.associations++;
            if (d3.pending_session) {
                d3.pending_session = false;
                start_session(d3);
            }
        };
        channel_.enqueue(*ap_station_, std::move(resp));
    };
    channel_.enqueue(*d.station, std::move(req));
}

void CogcellController::start_session(Device& d) {
    if (d.phase != DevicePhase::WifiAssociated) return;
    d.phase = DevicePhase::Requesting60g;
    d.session_active = true;
    d.remaining = d.spec.session_bytes;
    d.request_t0 = sim_.now();
    metrics_.record(MetricKind::BytesOffered, static_cast<std::int64_t>(d.spec.session_bytes));

    PendingFrame req;
    req.frame = FrameSpec::of(FrameKind::ChanReq60);
    req.category = AccessCategory::Req60;
    req.dest = 0;
    const NodeId id = d.spec.id;
    req.on_done = [this, id](const MacTxResult& res) {
        Device& d2 = dev(id);
        if (!res.delivered) {
            // the prioritized request exhausted its retries
            metrics_.record(MetricKind::SessionFailed);
            d2.session_active = false;
            d2.phase = DevicePhase::WifiAssociated;
            return;
        }
        handle_request_granted(d2);
    };
    channel_.enqueue(*d.station, std::move(req));
}

void CogcellController::handle_request_granted(Device& d) {
    if (!d.picocell) {
        enter_fallback_session(d);
        return;
    }
    coordinate_picocell(d);
}

void CogcellController::coordinate_picocell(Device& d) {
    // directive to the room's PCP/AP plus its confirm, both over 2.4 GHz
    PendingFrame coord;
    coord.frame = FrameSpec::of(FrameKind::Coord);
    coord.category = AccessCategory::Wifi24;
    coord.dest = static_cast<NodeId>(1000 + *d.picocell);
    const NodeId id = d.spec.id;
    const int pico = *d.picocell;
    coord.on_done = [this, id, pico](const MacTxResult& res) {
        Device& d2 = dev(id);
        if (!d2.session_active || d2.picocell != std::optional<int>(pico)) return;
        if (!res.delivered) {
            coordinate_picocell(d2);
            return;
        }
        PendingFrame confirm;
        confirm.frame = FrameSpec::of(FrameKind::Coord);
        confirm.category = AccessCategory::Wifi24;
        confirm.dest = 0;
        confirm.on_done = [this, id, pico](const MacTxResult& cres) {
            Device& d3 = dev(id);
            if (!cres.delivered || !d3.session_active) return;
            if (d3.picocell != std::optional<int>(pico)) return; // crossed rooms meanwhile
            begin_beamforming(d3);
        };
        channel_.enqueue(*pico_stations_[static_cast<std::size_t>(pico)], std::move(confirm));
    };
    channel_.enqueue(*ap_station_, std::move(coord));
}

void CogcellController::begin_beamforming(Device& d) {
    if (!d.picocell) {
        enter_fallback_session(d);
        return;
    }
    const int pico = *d.picocell;
    const Vec2 pico_pos = *config_.picocell_positions[static_cast<std::size_t>(pico)];
    const Vec2 pos = position(d);
    const int walls = config_.plan.walls_crossed(pico_pos, pos);

    const DirectionEstimate est = make_estimate(bearing_deg(pico_pos, pos), config_.estimate_sigma_deg,
                                                config_.estimate_uncertainty, d.estimate_rng);
    const SectorConfig iso{1, 360.0, config_.sectors.cbap_duration};
    const auto snr = make_pair_snr(config_.prop, config_.sectors, pico_pos, defaults::kTxPowerDbm,
                                   defaults::kNoiseFloor60Dbm, iso, pos, 0.0,
                                   blockage_active() ? 1 : walls);
    const double min_snr = config_.prop.rate_table_60.front().first;
    SweepResult sweep =
        sector_sweep(config_.sectors.sector_count, 1,
                     SectorWindow{config_.sectors.sector_of(est.azimuth_deg), est.uncertainty_sectors},
                     std::nullopt, snr, min_snr);
    SimTime total = sweep.duration;
    if (!sweep.found) {
        const SweepResult full =
            sector_sweep(config_.sectors.sector_count, 1, std::nullopt, std::nullopt, snr, min_snr);
        total += full.duration;
        sweep = full;
    }

    const SimTime start = std::max(sim_.now(), picocell_free_[static_cast<std::size_t>(pico)]);
    const SimTime end = start + total;
    picocell_free_[static_cast<std::size_t>(pico)] = end;
    const NodeId id = d.spec.id;
    sim_.schedule(end, "beamformed", id, [this, id, pico, sweep] {
        Device& d2 = dev(id);
        if (d2.picocell != std::optional<int>(pico)) return; // crossed rooms mid-sweep
        beamforming_done(d2, sweep);
    });
}

void CogcellController::beamforming_done(Device& d, const SweepResult& sweep) {
    if (!d.session_active) return;
    if (!sweep.found) {
        enter_fallback_session(d);
        return;
    }
    d.phase = DevicePhase::Beamformed;
    d.beam_ok = true;
    d.ap_sector = sweep.best.tx_sector;
    d.est_pos = position(d);
    evaluate_route(d);
    if (d.remaining == 0) {
        complete_session(d); // zero-byte request: transfer time 0
        return;
    }
    d.phase = DevicePhase::Transferring;
    schedule_window_pass(d);
    schedule_sensor_tick(d);
}

void CogcellController::enter_fallback_session(Device& d) {
    d.phase = DevicePhase::Fallback;
    d.beam_ok = false;
    d.fallback.force(DataRoute::Use24g, sim_.now());
    if (d.remaining == 0) {
        complete_session(d);
        return;
    }
    pump_fallback_frame(d);
}

void CogcellController::schedule_window_pass(Device& d) {
    if (!d.session_active || d.remaining == 0) return;
    const std::uint64_t epoch = ++d.window_epoch;
    const TimeInterval w = d.sched.next_window(d.ap_sector, sim_.now());
    const SimTime at = std::max(w.start, sim_.now());
    const NodeId id = d.spec.id;
    sim_.schedule(at, "cbap_window", id, [this, id, epoch] { window_pass(dev(id), epoch); });
}

void CogcellController::window_pass(Device& d, std::uint64_t epoch) {
    if (epoch != d.window_epoch || !d.session_active || d.remaining == 0) return;
    evaluate_route(d);
    if (d.fallback.route() == DataRoute::Use24g) return; // pump owns delivery now
    if (!d.picocell) return;                             // re-checked when a room link exists

    const TimeInterval w = d.sched.next_window(d.ap_sector, sim_.now());
    if (sim_.now() < w.start) {
        schedule_window_pass(d);
        return;
    }
    const LinkBudget lb = current_link(d);
    const bool claimed = d.picocell && sim_.now() < window_claimed_[static_cast<std::size_t>(*d.picocell)];
    if (!link_available(d) || lb.rate_bps == 0 || claimed) {
        // window blocked or already serving another device; try the next one
        const std::uint64_t epoch2 = ++d.window_epoch;
        const NodeId id = d.spec.id;
        sim_.schedule(w.end, "cbap_window", id, [this, id, epoch2] { window_pass(dev(id), epoch2); });
        return;
    }

    const SimTime avail = w.end - sim_.now();
    const SimTime needed = payload_airtime(d.remaining, lb.rate_bps);
    const NodeId id = d.spec.id;
    window_claimed_[static_cast<std::size_t>(*d.picocell)] = w.end;
    if (needed <= avail) {
        const std::uint64_t bytes = d.remaining;
        const std::uint64_t epoch2 = ++d.window_epoch;
        sim_.schedule(sim_.now() + needed, "tx_done", id, [this, id, epoch2, bytes] {
            Device& d2 = dev(id);
            if (epoch2 != d2.window_epoch || !d2.session_active) return;
            metrics_.record(MetricKind::Bytes60, static_cast<std::int64_t>(bytes));
            d2.remaining = 0;
            complete_session(d2);
        });
        return;
    }
    const std::uint64_t bytes =
        static_cast<std::uint64_t>(static_cast<unsigned __int128>(lb.rate_bps) *
                                   static_cast<std::uint64_t>(avail.nanoseconds()) / 8u /
                                   1'000'000'000u);
    if (bytes == 0) {
        const std::uint64_t epoch2 = ++d.window_epoch;
        sim_.schedule(w.end, "cbap_window", id, [this, id, epoch2] { window_pass(dev(id), epoch2); });
        return;
    }
    const std::uint64_t epoch2 = ++d.window_epoch;
    sim_.schedule(w.end, "window_end", id, [this, id, epoch2, bytes] {
        Device& d2 = dev(id);
        if (epoch2 != d2.window_epoch || !d2.session_active) return;
        const std::uint64_t credited = std::min(bytes, d2.remaining);
        metrics_.record(MetricKind::Bytes60, static_cast<std::int64_t>(credited));
        d2.remaining -= credited;
        if (d2.remaining == 0) {
            complete_session(d2);
            return;
        }
        schedule_window_pass(d2);
    });
}

void CogcellController::complete_session(Device& d) {
    if (!d.session_active) return;
    d.session_active = false;
    d.phase = DevicePhase::WifiAssociated;
    d.window_epoch++;
    metrics_.record(MetricKind::SessionDone, (sim_.now() - d.request_t0).nanoseconds());
}

void CogcellController::schedule_sensor_tick(Device& d) {
    const NodeId id = d.spec.id;
    sim_.schedule_in(config_.sensor_period, "sensor_tick", id, [this, id] { sensor_tick(dev(id)); });
}

void CogcellController::sensor_tick(Device& d) {
    if (!d.session_active) return;
    if (d.picocell && d.beam_ok && !blockage_active()) {
        const Vec2 pico_pos = *config_.picocell_positions[static_cast<std::size_t>(*d.picocell)];
        const PoseSample pose = d.spec.trace.pose_at(sim_.now());
        if (config_.plan.walls_crossed(pico_pos, pose.position) == 0) {
            const BeamAlignment align =
                check_alignment(config_.sectors, d.ap_sector, pico_pos, pose.position);
            if (!align.aligned) {
                trigger_rebeam(d, config_.beam_mode == BeamtrackMode::SensorOn
                                      ? RebeamCause::PredictionMiss
                                      : RebeamCause::Misalignment);
            } else if (config_.beam_mode == BeamtrackMode::SensorOn) {
                // advance the dead-reckoned estimate to now, then predict one
                // horizon ahead and switch for the coming period
                const SensorSample s = sample_sensor(sim_.now(), pose.heading_deg,
                                                     config_.sensor_sigma_deg, d.sensor_rng);
                const double rad = s.azimuth_deg * M_PI / 180.0;
                d.est_pos = d.est_pos + Vec2{std::cos(rad), std::sin(rad)} *
                                            (d.spec.trace.speed_mps() * config_.sensor_period.seconds());
                const int predicted = predict_sector(s, d.est_pos, pico_pos,
                                                     d.spec.trace.speed_mps(),
                                                     config_.sensor_period, config_.sectors);
                if (predicted != d.ap_sector) {
                    d.ap_sector = predicted; // free beam switch
                    schedule_window_pass(d);
                }
            }
        }
    }
    schedule_sensor_tick(d);
}

void CogcellController::trigger_rebeam(Device& d, RebeamCause cause) {
    const SimTime cost = SweepTimings::standard().duration_for_pairs(config_.sectors.sector_count);
    metrics_.record(MetricKind::Rebeam, config_.beam_mode == BeamtrackMode::SensorOn ? 1 : 0,
                    cost.nanoseconds());
    if (auto* tr = sim_.trace())
        (*tr) << sim_.now().nanoseconds() << " rebeam dev=" << d.spec.id << " cause="
              << (cause == RebeamCause::Misalignment ? "misalign" : "prediction_miss") << '\n';
    d.beam_ok = false;
    d.window_epoch++;
    const NodeId id = d.spec.id;
    sim_.schedule_in(cost, "rebeam_done", id, [this, id] {
        Device& d2 = dev(id);
        if (!d2.picocell) return;
        const Vec2 pico_pos = *config_.picocell_positions[static_cast<std::size_t>(*d2.picocell)];
        const Vec2 pos = position(d2);
        if (blockage_active() || config_.plan.walls_crossed(pico_pos, pos) != 0) return;
        d2.beam_ok = true;
        d2.ap_sector = config_.sectors.sector_of(bearing_deg(pico_pos, pos));
        d2.est_pos = pos;
        evaluate_route(d2);
        schedule_window_pass(d2);
    });
}

void CogcellController::schedule_handovers(Device& d) {
    // Exact wall-crossing times from the route geometry.
    const auto& segs = d.spec.trace.motion_segments();
    for (const auto& seg : segs) {
        for (const auto& wall : config_.plan.walls()) {
            const auto t = segment_crossing_param(seg.from, seg.to, wall);
            if (!t) continue;
            const SimTime when =
                seg.start + SimTime::ns(static_cast<std::int64_t>(
                                static_cast<double>((seg.end - seg.start).nanoseconds()) * *t));
            const double frac = std::min(1.0, *t + 1e-9);
            const Vec2 after = seg.from + (seg.to - seg.from) * frac;
            const int new_room = config_.plan.room_of(after);
            const NodeId id = d.spec.id;
            sim_.schedule(when, "room_crossing", id,
                          [this, id, new_room] { handover(dev(id), new_room); });
        }
    }
}

void CogcellController::handover(Device& d, int new_room) {
    if (new_room < 0 || new_room == d.room) return;
    metrics_.record(MetricKind::Handover);
    d.room = new_room;
    d.picocell = new_room < static_cast<int>(config_.picocell_positions.size()) &&
                         config_.picocell_positions[static_cast<std::size_t>(new_room)]
                     ? std::optional<int>(new_room)
                     : std::nullopt;
    d.beam_ok = false;
    d.window_epoch++;
    if (!d.session_active || d.phase == DevicePhase::Fallback) {
        evaluate_route(d);
        return;
    }
    evaluate_route(d);
    if (!d.picocell) return; // outage clock decides what happens next
    start_rediscovery(d);
}

// Assisted re-discovery with the new picocell: announce over 2.4 GHz, the AP
// answers and re-directs, and the restricted sweep runs on the new room's
// PCP/AP.
void CogcellController::start_rediscovery(Device& d) {
    PendingFrame announce;
    announce.frame = FrameSpec::of(FrameKind::AssocReq);
    announce.category = AccessCategory::Wifi24;
    announce.dest = 0;
    const NodeId id = d.spec.id;
    const int room_at_send = d.room;
    announce.on_done = [this, id, room_at_send](const MacTxResult& res) {
        Device& d2 = dev(id);
        if (!d2.session_active || d2.room != room_at_send) return;
        if (!res.delivered) {
            start_rediscovery(d2);
            return;
        }
        PendingFrame resp;
        resp.frame = FrameSpec::of(FrameKind::AssocResp);
        resp.category = AccessCategory::Wifi24;
        resp.dest = id;
        resp.on_done = [this, id, room_at_send](const MacTxResult& rres) {
            Device& d3 = dev(id);
            if (!rres.delivered || !d3.session_active || d3.room != room_at_send) return;
            if (!d3.picocell) return;
            coordinate_picocell(d3);
        };
        channel_.enqueue(*ap_station_, std::move(resp));
    };
    channel_.enqueue(*d.station, std::move(announce));
}

void CogcellController::evaluate_route(Device& d) {
    const DataRoute before = d.fallback.route();
    const DataRoute now_route = d.fallback.update(link_available(d), sim_.now());
    if (before != now_route) {
        if (now_route == DataRoute::Use24g) {
            pump_fallback_frame(d);
        } else {
            schedule_window_pass(d);
        }
    }
    if (const auto flip = d.fallback.pending_flip()) {
        const NodeId id = d.spec.id;
        sim_.schedule(*flip, "route_check", id, [this, id] {
            Device& d2 = dev(id);
            if (!d2.session_active) return;
            evaluate_route(d2);
        });
    }
}

void CogcellController::pump_fallback_frame(Device& d) {
    if (!d.session_active || d.remaining == 0 || d.pump_active) return;
    if (d.fallback.route() != DataRoute::Use24g) return;
    d.pump_active = true;
    const std::uint64_t chunk = std::min<std::uint64_t>(defaults::kWifiDataBytes, d.remaining);
    PendingFrame frame;
    frame.frame = FrameSpec::of(FrameKind::Data);
    frame.frame.body_bytes = static_cast<std::uint32_t>(chunk);
    frame.category = AccessCategory::Wifi24;
    frame.dest = 0;
    const NodeId id = d.spec.id;
    frame.on_done = [this, id, chunk](const MacTxResult& res) {
        Device& d2 = dev(id);
        d2.pump_active = false;
        if (!d2.session_active) return;
        if (res.delivered) {
            metrics_.record(MetricKind::Bytes24, static_cast<std::int64_t>(chunk), 1);
            d2.remaining -= chunk;
            if (d2.remaining == 0) {
                complete_session(d2);
                return;
            }
        }
        evaluate_route(d2);
        pump_fallback_frame(d2);
    };
    channel_.enqueue(*d.station, std::move(frame));
}

bool CogcellController::link_available(const Device& d) const {
    if (!d.picocell || blockage_active() || !d.beam_ok) return false;
    const Vec2 pico_pos = *config_.picocell_positions[static_cast<std::size_t>(*d.picocell)];
    const Vec2 pos = d.spec.trace.position_at(sim_.now());
    if (config_.plan.walls_crossed(pico_pos, pos) != 0) return false;
    return current_link(d).rate_bps > 0;
}

LinkBudget CogcellController::current_link(const Device& d) const {
    const Vec2 pico_pos = *config_.picocell_positions[static_cast<std::size_t>(*d.picocell)];
    const Vec2 pos = d.spec.trace.position_at(sim_.now());
    RadioConfig tx = RadioConfig::mmwave(AntennaPattern::sectorized(
        config_.sectors.beamwidth_deg, config_.sectors.boresight_of(d.ap_sector)));
    RadioConfig rx = RadioConfig::mmwave(AntennaPattern::isotropic());
    const int walls = blockage_active() ? 1 : config_.plan.walls_crossed(pico_pos, pos);
    return link_budget(config_.prop, tx, pico_pos, rx, pos, walls);
}

void CogcellController::finalize(SimTime /*end*/) {
    channel_.finalize_stats();
    std::uint64_t pending = 0;
    for (const auto& d : devices_) pending += d.remaining;
    metrics_.record(MetricKind::BytesPending, static_cast<std::int64_t>(pending));
}

} // namespace cogsim
