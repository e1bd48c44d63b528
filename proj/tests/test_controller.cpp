#include <doctest.h>

#include "cogsim/engine.hpp"

using namespace cogsim;

namespace {

ControllerConfig base_config() {
    ControllerConfig cfg;
    cfg.sectors = SectorConfig::from_beamwidth(90.0);
    return cfg;
}

DeviceSpec stationary_device(NodeId id, Vec2 pos, std::uint64_t bytes, double start_s) {
    DeviceSpec d;
    d.id = id;
    d.trace = stationary_trace(pos);
    d.session_bytes = bytes;
    d.session_start = SimTime::from_seconds(start_s);
    return d;
}

} // namespace

TEST_CASE("fallback tracker switches after a full outage threshold, not before") {
    FallbackTracker t(FallbackPolicy{SimTime::ms(20), SimTime::ms(100)});
    CHECK(t.update(false, SimTime::ms(0)) == DataRoute::Use60g);
    CHECK(t.update(false, SimTime::ms(19)) == DataRoute::Use60g);
    CHECK(t.update(false, SimTime::ms(20)) == DataRoute::Use24g);
    CHECK(t.decision_changes() == 1);
}

TEST_CASE("an outage shorter than the threshold never flips the route") {
    FallbackTracker t(FallbackPolicy{SimTime::ms(20), SimTime::ms(100)});
    t.update(false, SimTime::ms(0));
    t.update(true, SimTime::ms(15)); // restored before the threshold
    CHECK(t.update(false, SimTime::ms(30)) == DataRoute::Use60g);
    CHECK(t.update(false, SimTime::ms(49)) == DataRoute::Use60g); // clock restarted at 30
    CHECK(t.update(false, SimTime::ms(50)) == DataRoute::Use24g);
}

TEST_CASE("restoration needs the hysteresis before traffic moves home") {
    FallbackTracker t(FallbackPolicy{SimTime::ms(20), SimTime::ms(100)});
    t.update(false, SimTime::ms(0));
    t.update(false, SimTime::ms(20));
    REQUIRE(t.route() == DataRoute::Use24g);
    CHECK(t.update(true, SimTime::ms(30)) == DataRoute::Use24g);
    CHECK(t.update(true, SimTime::ms(129)) == DataRoute::Use24g);
    CHECK(t.update(true, SimTime::ms(130)) == DataRoute::Use60g);
    CHECK(t.decision_changes() == 2);
}

TEST_CASE("decisions are at least threshold plus hysteresis apart") {
    // alternating availability every millisecond cannot flap the route
    FallbackTracker t(FallbackPolicy{SimTime::ms(20), SimTime::ms(100)});
    bool avail = false;
    for (int ms = 0; ms <= 1000; ++ms) {
        t.update(avail, SimTime::ms(ms));
        avail = !avail;
    }
    CHECK(t.decision_changes() == 0);
}

TEST_CASE("an idle-network session completes and accounts its bytes on 60 GHz") {
    CogcellRunParams run;
    run.controller = base_config();
    run.devices.push_back(stationary_device(1, {6, 4}, 2'000'000, 0.01));
    run.duration_s = 2.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_completed == 1);
    CHECK(r.bytes_offered == 2'000'000);
    CHECK(r.bytes_60g == 2'000'000);
    CHECK(r.bytes_24g == 0);
    CHECK(r.bytes_pending == 0);
    CHECK(r.ctrl_frames_60g == 0);
    CHECK(r.session_latency_mean_us > 0.0);
}

TEST_CASE("a zero-byte request completes with zero transfer time") {
    CogcellRunParams run;
    run.controller = base_config();
    run.devices.push_back(stationary_device(1, {6, 4}, 0, 0.01));
    run.duration_s = 1.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_completed == 1);
    CHECK(r.bytes_offered == 0);
    CHECK(r.bytes_60g == 0);
}

TEST_CASE("a room without a picocell falls back to 2.4 GHz immediately") {
    CogcellRunParams run;
    run.controller = base_config();
    run.controller.picocell_positions = {FloorPlan::four_room().rooms()[0].center(), std::nullopt,
                                         std::nullopt, std::nullopt};
    run.devices.push_back(stationary_device(1, {12, 3}, 200'000, 0.01)); // room 1, no picocell
    run.duration_s = 5.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_completed == 1);
    CHECK(r.bytes_24g == 200'000);
    CHECK(r.bytes_60g == 0);
}

TEST_CASE("a permanent blockage moves the remaining bytes to 2.4 GHz") {
    CogcellRunParams run;
    run.controller = base_config();
    run.controller.blockage_start = SimTime::from_seconds(0.2);
    run.devices.push_back(stationary_device(1, {6, 4}, 20'000'000, 0.01));
    run.duration_s = 20.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_completed == 1);
    CHECK(r.bytes_offered == 20'000'000);
    CHECK(r.bytes_60g > 0);
    CHECK(r.bytes_24g > 0);
    CHECK(r.bytes_60g + r.bytes_24g == 20'000'000);
    CHECK(r.bytes_pending == 0);
    CHECK(r.payload_bytes_24g_nonfallback == 0); // all 2.4 payload was fallback
}

TEST_CASE("a blockage shorter than the outage threshold does not reroute") {
    // the window pass sits out blocked windows; with the threshold high the
    // route never flips: emulate with a long hysteresis policy and a brief
    // manual outage through the tracker (controller-level blockages are
    // permanent by construction)
    FallbackTracker t(FallbackPolicy{SimTime::ms(20), SimTime::ms(100)});
    t.update(false, SimTime::ms(0));
    t.update(true, SimTime::ms(10));
    t.update(true, SimTime::ms(200));
    CHECK(t.route() == DataRoute::Use60g);
    CHECK(t.decision_changes() == 0);
}

TEST_CASE("a roaming route hands over once per wall crossing and keeps one association") {
    CogcellRunParams run;
    run.controller = base_config();
    DeviceSpec d;
    d.id = 1;
    // room 0 -> room 1 -> room 3 -> room 2: three crossings
    d.trace = MobilityTrace(
        {{{2.0, 2.0}, 0.0}, {{11.5, 2.0}, 0.0}, {{11.5, 9.5}, 0.0}, {{4.0, 9.5}, 0.0}}, 1.0);
    d.session_bytes = 50'000'000'000; // stays busy the whole run
    d.session_start = SimTime::from_seconds(0.01);
    run.devices.push_back(d);
    run.duration_s = 26.0;

    Simulator sim;
    ControlChannel channel(sim);
    MetricsCollector collector;
    ControllerConfig cfg = run.controller;
    cfg.seed = 3;
    CogcellController controller(sim, channel, collector, cfg);
    controller.add_device(run.devices[0]);
    sim.run_until(SimTime::from_seconds(run.duration_s));
    controller.finalize(sim.now());
    const MetricsRecord r = collector.finalize("roam", 3, run.duration_s, &channel.stats());

    CHECK(r.handover_count == 3);
    CHECK(controller.association_count(1) == 1);
    CHECK(r.ctrl_frames_60g == 0);
    CHECK(r.payload_bytes_24g_nonfallback == 0);
    CHECK(r.bytes_60g > 0);
    CHECK(r.bytes_offered == r.bytes_60g + r.bytes_24g + r.bytes_pending);
    CHECK(r.bytes_pending > 0); // the session outlives the run
}

TEST_CASE("a route that never leaves its room performs no handover") {
    CogcellRunParams run;
    run.controller = base_config();
    DeviceSpec d;
    d.id = 1;
    d.trace = rectangle_loop_trace(1, 1, 7, 5, 1.0);
    d.session_bytes = 1'000'000;
    d.session_start = SimTime::from_seconds(0.01);
    run.devices.push_back(d);
    run.duration_s = 21.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.handover_count == 0);
    CHECK(r.sessions_completed == 1);
}

TEST_CASE("prioritized requests that exhaust their retries fail the session") {
    CogcellRunParams run;
    run.controller = base_config();
    run.mac.cw_min[0] = run.mac.cw_max[0] = 1; // both requests always draw slot 0
    run.devices.push_back(stationary_device(1, {6, 4}, 1000, 0.01));
    run.devices.push_back(stationary_device(2, {2, 4}, 1000, 0.01));
    run.duration_s = 2.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_failed == 2);
    CHECK(r.sessions_completed == 0);
    CHECK(r.dropped[0] == 2);
    CHECK(r.bytes_offered == 2000);
    CHECK(r.bytes_pending == 2000); // nothing moved, nothing lost
}

TEST_CASE("two devices in the same sector share the picocell one window at a time") {
    CogcellRunParams run;
    run.controller = base_config();
    run.devices.push_back(stationary_device(1, {6.0, 4.0}, 5'000'000, 0.01));
    run.devices.push_back(stationary_device(2, {6.5, 4.3}, 5'000'000, 0.01));
    run.duration_s = 3.0;
    const MetricsRecord r = run_cogcell(run, 3);
    CHECK(r.sessions_completed == 2);
    CHECK(r.bytes_60g == 10'000'000);
    CHECK(r.bytes_pending == 0);
}

TEST_CASE("session latency composes request, coordination, sweep and transfer") {
    CogcellRunParams run;
    run.controller = base_config();
    run.devices.push_back(stationary_device(1, {6, 4}, 1'000'000, 0.05));
    run.duration_s = 2.0;
    const MetricsRecord r = run_cogcell(run, 3);
    REQUIRE(r.sessions_completed == 1);
    // lower bound: one restricted sweep plus the transfer airtime at the top
    // 60 GHz rate; the 2.4 GHz signaling adds on top
    const SimTime sweep = SweepTimings::standard().duration_for_pairs(3);
    const double transfer_us = 1'000'000 * 8 / 7000.0; // bytes at 7 Gb/s, in us
    CHECK(r.session_latency_mean_us > sweep.microseconds() + transfer_us);
    CHECK(r.session_latency_mean_us < 50'000.0); // and it is not stuck either
}
