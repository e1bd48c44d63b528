#include "cogsim/discovery.hpp"

#include <algorithm>

#include "cogsim/sim_core.hpp"

namespace cogsim {

SweepTimings two_level_training_timings() {
    SweepTimings t = SweepTimings::standard();
    // level two: both ends re-sweep a fixed grid of sub-beams within the
    // winning sector, then exchange feedback once more
    t.refine_extra = SimTime::ns(defaults::kRefinePairs *
                                 (t.frame_airtime + t.inter_frame).nanoseconds()) +
                     t.rifs + t.feedback_airtime;
    return t;
}

std::vector<Vec2> place_devices(int devices, const DiscoveryConfig& cfg, std::uint64_t seed) {
    std::vector<Vec2> out;
    out.reserve(static_cast<std::size_t>(devices));
    for (int d = 0; d < devices; ++d) {
        RngStream rng = RngStream::for_node(seed, static_cast<std::uint32_t>(d), RngPurpose::Placement);
        for (;;) {
            const Vec2 p{cfg.room_x0 + rng.uniform01() * (cfg.room_x1 - cfg.room_x0),
                         cfg.room_y0 + rng.uniform01() * (cfg.room_y1 - cfg.room_y0)};
            if (distance(p, cfg.ap_position) >= cfg.min_device_distance_m) {
                out.push_back(p);
                break;
            }
        }
    }
    return out;
}

DirectionEstimate make_estimate(double true_bearing_deg, double sigma_deg, int uncertainty,
                                RngStream& rng) {
    double az = true_bearing_deg;
    if (sigma_deg > 0.0) az += rng.gaussian(0.0, sigma_deg);
    return {wrap_deg(az), uncertainty};
}

namespace {

std::function<double(int, int)> device_pair_snr(const DiscoveryConfig& cfg,
                                                const PropagationParams& prop, Vec2 device_pos) {
    return make_pair_snr(prop, cfg.ap_sectors, cfg.ap_position, defaults::kTxPowerDbm,
                         defaults::kNoiseFloor60Dbm, cfg.device_sectors, device_pos, 0.0, 0);
}

} // namespace

std::vector<DiscoveryResult> discover_standalone(int devices, const DiscoveryConfig& cfg,
                                                 std::uint64_t seed) {
    if (devices < 1) throw ConfigError("discovery needs at least one device");
    const auto positions = place_devices(devices, cfg, seed);
    const PropagationParams prop;

    struct DeviceState {
        int true_ap_sector;
        int true_dev_sector;
        RngStream listen;
        bool discovered = false;
        int responses = 0;
    };
    std::vector<DeviceState> devs;
    devs.reserve(positions.size());
    for (int d = 0; d < devices; ++d) {
        devs.push_back({cfg.ap_sectors.sector_of(bearing_deg(cfg.ap_position, positions[d])),
                        cfg.device_sectors.sector_of(bearing_deg(positions[d], cfg.ap_position)),
                        RngStream::for_node(seed, static_cast<std::uint32_t>(d), RngPurpose::ListenSector)});
    }

    // One scan step: a directional beacon plus the response opportunity.
    const SimTime step = cfg.timings.frame_airtime + cfg.timings.inter_frame +
                         cfg.timings.frame_airtime + cfg.timings.inter_frame;
    std::vector<DiscoveryResult> results(static_cast<std::size_t>(devices));

    int remaining = devices;
    SimTime elapsed;
    for (std::int64_t s = 0; remaining > 0; ++s) {
        elapsed += step;
        if (elapsed > cfg.time_limit) break;
        const int beacon_sector = static_cast<int>(s % cfg.ap_sectors.sector_count);

        std::vector<int> responders;
        for (int d = 0; d < devices; ++d) {
            auto& dev = devs[static_cast<std::size_t>(d)];
            if (dev.discovered) continue;
            const int listen = static_cast<int>(
                dev.listen.uniform_below(static_cast<std::uint32_t>(cfg.device_sectors.sector_count)));
            if (beacon_sector == dev.true_ap_sector && listen == dev.true_dev_sector) {
                dev.responses++;
                responders.push_back(d);
            }
        }
        // two or more aligned responders garble each other and retry at the
        // next opportunity
        if (responders.size() == 1) {
            // contact made; the pair still needs the exhaustive training to
            // pick its beam pair, and the single PCP/AP radio pauses the scan
            // for its duration
            const auto di = static_cast<std::size_t>(responders.front());
            auto& dev = devs[di];
            const SweepResult training =
                sector_sweep(cfg.ap_sectors.sector_count, cfg.device_sectors.sector_count,
                             std::nullopt, std::nullopt, device_pair_snr(cfg, prop, positions[di]),
                             cfg.min_snr_db, cfg.standalone_training);
            elapsed += training.duration;
            dev.discovered = true;
            remaining--;
            auto& r = results[di];
            r.discovered = training.found;
            r.elapsed = elapsed;
            r.frames_sent = static_cast<int>(s + 1) + dev.responses + training.frames_sent;
        }
    }
    for (int d = 0; d < devices; ++d) {
        auto& r = results[static_cast<std::size_t>(d)];
        if (!r.discovered && r.elapsed == SimTime::ns(0)) {
            r.elapsed = cfg.time_limit;
            r.frames_sent = devs[static_cast<std::size_t>(d)].responses;
        }
    }
    return results;
}

std::vector<DiscoveryResult> discover_assisted(int devices, const DiscoveryConfig& cfg,
                                               std::uint64_t seed) {
    if (devices < 1) throw ConfigError("discovery needs at least one device");
    const auto positions = place_devices(devices, cfg, seed);

    Simulator sim;
    ControlChannel channel(sim);
    if (cfg.zero_overhead_24g) {
        auto free_airtime = [&channel](AccessCategory c) {
            auto p = channel.params(c);
            p.sifs = p.difs = p.slot = SimTime::ns(0);
            p.ctrl_rate_bps = p.data_rate_bps = 1'000'000'000'000ull;
            return p;
        };
        channel.set_params(free_airtime(AccessCategory::Req60), free_airtime(AccessCategory::Wifi24));
    }

    const PropagationParams prop;
    MacStation& ap_station = channel.add_station(0, RngStream::for_node(seed, 0, RngPurpose::Backoff));
    const NodeId pico_node = devices + 1;
    MacStation& pico_station = channel.add_station(
        pico_node, RngStream::for_node(seed, static_cast<std::uint32_t>(pico_node), RngPurpose::Backoff));

    std::vector<DiscoveryResult> results(static_cast<std::size_t>(devices));
    SimTime picocell_free; // sweeps serialize on the single PCP/AP
    // each hop of the 2.4 GHz setup chain retries through these so a dropped
    // frame re-enters the queue instead of stranding the device
    std::vector<std::function<void()>> chain(static_cast<std::size_t>(devices) * 4);

    auto send = [&channel](MacStation& st, FrameKind kind, NodeId dest,
                           std::function<void(const MacTxResult&)> done) {
        PendingFrame f;
        f.frame = FrameSpec::of(kind);
        f.category = AccessCategory::Wifi24;
        f.dest = dest;
        f.on_done = std::move(done);
        channel.enqueue(st, std::move(f));
    };

    for (int d = 0; d < devices; ++d) {
        const NodeId node = d + 1;
        MacStation* st = &channel.add_station(
            node, RngStream::for_node(seed, static_cast<std::uint32_t>(node), RngPurpose::Backoff));

        auto run_sweep = [&, d](SimTime signaling_done) {
            auto& r = results[static_cast<std::size_t>(d)];
            r.overhead_24ghz = signaling_done; // the whole setup chain rode on 2.4 GHz
            const Vec2 pos = positions[static_cast<std::size_t>(d)];
            RngStream est_rng = RngStream::for_node(seed, static_cast<std::uint32_t>(d + 1),
                                                    RngPurpose::EstimateNoise);
            const DirectionEstimate ap_est =
                make_estimate(bearing_deg(cfg.ap_position, pos), cfg.estimate_sigma_deg,
                              cfg.uncertainty_sectors, est_rng);
            const DirectionEstimate dev_est =
                make_estimate(bearing_deg(pos, cfg.ap_position), cfg.estimate_sigma_deg,
                              cfg.uncertainty_sectors, est_rng);

            const auto snr = device_pair_snr(cfg, prop, pos);
            SweepResult sweep = sector_sweep(
                cfg.ap_sectors.sector_count, cfg.device_sectors.sector_count,
                SectorWindow{cfg.ap_sectors.sector_of(ap_est.azimuth_deg), ap_est.uncertainty_sectors},
                SectorWindow{cfg.device_sectors.sector_of(dev_est.azimuth_deg),
                             dev_est.uncertainty_sectors},
                snr, cfg.min_snr_db, cfg.timings);
            SimTime sweep_time = sweep.duration;
            int frames = sweep.frames_sent;
            if (!sweep.found) {
                // estimate off by more than its slack: pay the full search too
                const SweepResult full =
                    sector_sweep(cfg.ap_sectors.sector_count, cfg.device_sectors.sector_count,
                                 std::nullopt, std::nullopt, snr, cfg.min_snr_db, cfg.timings);
                sweep_time += full.duration;
                frames += full.frames_sent;
                sweep = full;
            }

            const SimTime start = std::max(sim.now(), picocell_free);
            picocell_free = start + sweep_time;
            auto& res = results[static_cast<std::size_t>(d)];
            res.discovered = sweep.found;
            res.elapsed = picocell_free;
            res.frames_sent = frames;
        };

        // announce -> response -> picocell directive -> confirm -> sweep
        const auto base = static_cast<std::size_t>(d) * 4;
        chain[base + 3] = [&send, &pico_station, &chain, base, run_sweep] {
            send(pico_station, FrameKind::AssocResp, 0,
                 [&chain, base, run_sweep](const MacTxResult& res) {
                     if (!res.delivered) { chain[base + 3](); return; }
                     run_sweep(res.done_time);
                 });
        };
        chain[base + 2] = [&send, &ap_station, &chain, base, pico_node] {
            send(ap_station, FrameKind::Coord, pico_node,
                 [&chain, base](const MacTxResult& res) {
                     if (!res.delivered) { chain[base + 2](); return; }
                     chain[base + 3]();
                 });
        };
        chain[base + 1] = [&send, &ap_station, &chain, base, node] {
            send(ap_station, FrameKind::AssocResp, node,
                 [&chain, base](const MacTxResult& res) {
                     if (!res.delivered) { chain[base + 1](); return; }
                     chain[base + 2]();
                 });
        };
        chain[base + 0] = [&send, st, &chain, base] {
            send(*st, FrameKind::AssocReq, 0, [&chain, base](const MacTxResult& res) {
                if (!res.delivered) { chain[base + 0](); return; }
                chain[base + 1]();
            });
        };
        sim.schedule(SimTime::ns(0), "announce", node, [&chain, base] { chain[base + 0](); });
    }

    sim.run_until(cfg.time_limit);
    for (auto& r : results)
        if (!r.discovered && r.elapsed == SimTime::ns(0)) r.elapsed = cfg.time_limit;
    return results;
}

} // namespace cogsim
