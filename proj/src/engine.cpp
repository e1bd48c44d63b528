#include "cogsim/engine.hpp"

#include <functional>
#include <string>
#include <vector>

namespace cogsim {

namespace {

FrameSpec frame_for_category(AccessCategory cat) {
    return cat == AccessCategory::Req60 ? FrameSpec::of(FrameKind::ChanReq60)
                                        : FrameSpec::of(FrameKind::Data);
}

} // namespace

MetricsRecord run_access_mix(const AccessMixParams& params, std::uint64_t seed) {
    Simulator sim;
    sim.set_trace(params.trace);
    ControlChannel channel(sim);
    channel.set_params(params.mac.build(AccessCategory::Req60),
                       params.mac.build(AccessCategory::Wifi24));
    const int n = params.n_req60 + params.n_wifi24;

    std::vector<std::function<void()>> senders(static_cast<std::size_t>(n));
    std::vector<RngStream> arrivals;
    arrivals.reserve(static_cast<std::size_t>(n));

    for (int i = 0; i < n; ++i) {
        const AccessCategory cat =
            i < params.n_req60 ? AccessCategory::Req60 : AccessCategory::Wifi24;
        MacStation* st = &channel.add_station(
            i, RngStream::for_node(seed, static_cast<std::uint32_t>(i), RngPurpose::Backoff));
        arrivals.push_back(RngStream::for_node(seed, static_cast<std::uint32_t>(i), RngPurpose::Traffic));
        const auto idx = static_cast<std::size_t>(i);

        if (params.poisson) {
            // one frame per arrival; independent exponential interarrivals
            senders[idx] = [&channel, st, &sim, &arrivals, &senders, idx, cat,
                            rate = params.arrival_per_s] {
                const double gap_s = arrivals[idx].exponential(1.0 / rate);
                sim.schedule_in(SimTime::from_seconds(gap_s), "arrival", static_cast<NodeId>(idx),
                                [&channel, st, &senders, idx, cat] {
                                    PendingFrame f;
                                    f.frame = frame_for_category(cat);
                                    f.category = cat;
                                    channel.enqueue(*st, std::move(f));
                                    senders[idx]();
                                });
            };
            senders[idx]();
        } else {
            // saturation: the next frame is ready the instant the last one ends
            senders[idx] = [&channel, st, &senders, idx, cat] {
                PendingFrame f;
                f.frame = frame_for_category(cat);
                f.category = cat;
                f.on_done = [&senders, idx](const MacTxResult&) { senders[idx](); };
                channel.enqueue(*st, std::move(f));
            };
            sim.schedule(SimTime::ns(0), "first_frame", i, [&senders, idx] { senders[idx](); });
        }
    }

    sim.run_until(SimTime::from_seconds(params.duration_s));
    channel.finalize_stats();

    MetricsCollector collector;
    return collector.finalize("access_mix_n" + std::to_string(n), seed, params.duration_s,
                              &channel.stats());
}

MetricsRecord run_single_category(const SingleCategoryParams& params, std::uint64_t seed) {
    Simulator sim;
    ControlChannel channel(sim);
    auto p = channel.params(AccessCategory::Wifi24);
    p.cw_min = params.cw_min;
    p.cw_max = params.cw_max;
    p.retry_limit = params.retry_limit;
    channel.set_params(AccessCategory::Wifi24, p);

    std::vector<std::function<void()>> senders(static_cast<std::size_t>(params.stations));
    for (int i = 0; i < params.stations; ++i) {
        MacStation* st = &channel.add_station(
            i, RngStream::for_node(seed, static_cast<std::uint32_t>(i), RngPurpose::Backoff));
        const auto idx = static_cast<std::size_t>(i);
        senders[idx] = [&channel, st, &senders, idx] {
            PendingFrame f;
            f.frame = FrameSpec::of(FrameKind::Data);
            f.category = AccessCategory::Wifi24;
            f.on_done = [&senders, idx](const MacTxResult&) { senders[idx](); };
            channel.enqueue(*st, std::move(f));
        };
        sim.schedule(SimTime::ns(0), "first_frame", i, [&senders, idx] { senders[idx](); });
    }

    sim.run_until(SimTime::from_seconds(params.duration_s));
    channel.finalize_stats();

    MetricsCollector collector;
    return collector.finalize("bianchi_n" + std::to_string(params.stations), seed,
                              params.duration_s, &channel.stats());
}

MetricsRecord run_discovery_cmp(const DiscoveryCmpParams& params, std::uint64_t seed) {
    DiscoveryConfig cfg = params.base;
    cfg.ap_sectors = SectorConfig::from_beamwidth(params.beamwidth_deg);
    cfg.device_sectors = SectorConfig::from_beamwidth(params.beamwidth_deg);
    cfg.estimate_sigma_deg = params.estimate_sigma_deg >= 0.0
                                 ? params.estimate_sigma_deg
                                 : params.beamwidth_deg * defaults::kEstimateSigmaSectorFraction;

    MetricsCollector collector;
    if (params.mode != DiscoveryMode::Assisted)
        for (const auto& r : discover_standalone(params.devices, cfg, seed))
            if (r.discovered)
                collector.record(MetricKind::DiscoveryDone, 0, r.elapsed.nanoseconds());
    if (params.mode != DiscoveryMode::Standalone)
        for (const auto& r : discover_assisted(params.devices, cfg, seed)) {
            if (r.discovered) {
                collector.record(MetricKind::DiscoveryDone, 1, r.elapsed.nanoseconds());
                collector.add_overhead_24g(r.overhead_24ghz);
            }
        }
    return collector.finalize("discovery_d" + std::to_string(params.devices), seed, 0.0, nullptr);
}

MetricsRecord run_rebeam_cmp(const RebeamCmpParams& params, std::uint64_t seed) {
    const MobilityTrace route =
        rectangle_loop_trace(params.x0, params.y0, params.x1, params.y1, params.speed_mps);
    BeamtrackConfig cfg = BeamtrackConfig::with_beamwidth(params.beamwidth_deg, params.ap_position);
    cfg.sample_period = params.sample_period;
    cfg.noise_sigma_deg = params.noise_sigma_deg;
    cfg.assumed_speed_mps = params.speed_mps;

    MetricsCollector collector;
    // Identical sensor noise for both modes: the A/B comparison only differs
    // in how the beam is maintained.
    RngStream rng_off = RngStream::for_node(seed, 0, RngPurpose::SensorNoise);
    RngStream rng_on = RngStream::for_node(seed, 0, RngPurpose::SensorNoise);
    const RebeamLog off = maintain_link(route, BeamtrackMode::SensorOff, cfg, rng_off);
    const RebeamLog on = maintain_link(route, BeamtrackMode::SensorOn, cfg, rng_on);
    for (const auto& e : off.events) collector.record(MetricKind::Rebeam, 0, e.cost.nanoseconds());
    for (const auto& e : on.events) collector.record(MetricKind::Rebeam, 1, e.cost.nanoseconds());
    return collector.finalize("rebeam_bw" + std::to_string(static_cast<int>(params.beamwidth_deg)),
                              seed, route.span().seconds(), nullptr);
}

MetricsRecord run_cogcell(const CogcellRunParams& params, std::uint64_t seed) {
    Simulator sim;
    sim.set_trace(params.trace);
    ControlChannel channel(sim);
    channel.set_params(params.mac.build(AccessCategory::Req60),
                       params.mac.build(AccessCategory::Wifi24));
    MetricsCollector collector;
    ControllerConfig cfg = params.controller;
    cfg.seed = seed;
    CogcellController controller(sim, channel, collector, cfg);
    for (const auto& d : params.devices) controller.add_device(d);

    sim.run_until(SimTime::from_seconds(params.duration_s));
    controller.finalize(sim.now());
    return collector.finalize("cogcell", seed, params.duration_s, &channel.stats());
}

} // namespace cogsim
