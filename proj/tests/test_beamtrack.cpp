#include <doctest.h>

#include <cmath>

#include "cogsim/beamtrack.hpp"

using namespace cogsim;

namespace {

MobilityTrace rectangle_route() { return rectangle_loop_trace(1, 1, 7, 5, 1.0); }
const Vec2 kAp{4, 3};

BeamtrackConfig config_for(double bw, double sigma) {
    BeamtrackConfig cfg = BeamtrackConfig::with_beamwidth(bw, kAp);
    cfg.noise_sigma_deg = sigma;
    return cfg;
}

} // namespace

TEST_CASE("noiseless sensor reports the exact heading") {
    RngStream rng(1, 1);
    const auto s = sample_sensor(SimTime::ns(0), 123.4, 0.0, rng);
    CHECK(s.azimuth_deg == 123.4);
}

TEST_CASE("sensor noise wraps into [0, 360)") {
    RngStream rng(1, 2);
    for (int i = 0; i < 200; ++i) {
        const auto s = sample_sensor(SimTime::ns(0), 359.0, 15.0, rng);
        CHECK(s.azimuth_deg >= 0.0);
        CHECK(s.azimuth_deg < 360.0);
    }
}

TEST_CASE("sensor noise has the configured spread") {
    RngStream rng(7, 3);
    double sum = 0, sq = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        double err = sample_sensor(SimTime::ns(0), 180.0, 2.0, rng).azimuth_deg - 180.0;
        sum += err;
        sq += err * err;
    }
    const double mean = sum / n;
    const double std = std::sqrt(sq / n - mean * mean);
    CHECK(std == doctest::Approx(2.0).epsilon(0.1));
}

TEST_CASE("a stationary device predicts its current sector") {
    const auto sectors = SectorConfig::from_beamwidth(30.0);
    const Vec2 dev{6, 3}; // bearing 0 from the AP
    const SensorSample s{SimTime::ns(0), 90.0, 0.0};
    CHECK(predict_sector(s, dev, kAp, 0.0, SimTime::ms(100), sectors) == sectors.sector_of(0.0));
}

TEST_CASE("prediction quantizes the dead-reckoned bearing into sector intervals") {
    const auto sectors = SectorConfig::from_beamwidth(30.0);
    // place the device so the AP sees it at 44 deg, then at 46 deg
    const double r = 3.0;
    for (auto [deg, want] : {std::pair{44.0, 1}, std::pair{46.0, 2}}) {
        const Vec2 dev{kAp.x + r * std::cos(deg * M_PI / 180),
                       kAp.y + r * std::sin(deg * M_PI / 180)};
        const SensorSample s{SimTime::ns(0), 0.0, 0.0};
        CHECK(predict_sector(s, dev, kAp, 0.0, SimTime::ms(100), sectors) == want);
    }
}

TEST_CASE("a stationary trace needs no re-beamforming in either mode") {
    RngStream rng(5, 4);
    const auto cfg = config_for(30.0, 2.0);
    for (auto mode : {BeamtrackMode::SensorOff, BeamtrackMode::SensorOn}) {
        const auto log = maintain_link(stationary_trace({6, 3}), mode, cfg, rng);
        CHECK(log.count() == 0);
    }
}

TEST_CASE("with zero noise, sensor-off events equal the route's boundary crossings") {
    for (double bw : {30.0, 20.0}) {
        auto cfg = config_for(bw, 0.0);
        RngStream rng(11, 5);
        const auto route = rectangle_route();
        const auto log = maintain_link(route, BeamtrackMode::SensorOff, cfg, rng);
        const int crossings = sector_boundary_crossings(route, kAp, cfg.ap_sectors);
        CHECK(log.count() == crossings);
        // a full loop around an interior point sweeps every boundary once
        CHECK(crossings == cfg.ap_sectors.sector_count);
    }
}

TEST_CASE("with zero noise and fine sampling, prediction never misses") {
    auto cfg = config_for(30.0, 0.0);
    cfg.sample_period = SimTime::ms(10);
    RngStream rng(11, 6);
    const auto log = maintain_link(rectangle_route(), BeamtrackMode::SensorOn, cfg, rng);
    CHECK(log.count() == 0);
}

TEST_CASE("narrower beams mean more sensor-off events on the same route") {
    RngStream rng1(13, 7), rng2(13, 7);
    const auto off30 =
        maintain_link(rectangle_route(), BeamtrackMode::SensorOff, config_for(30.0, 2.0), rng1);
    const auto off20 =
        maintain_link(rectangle_route(), BeamtrackMode::SensorOff, config_for(20.0, 2.0), rng2);
    CHECK(off20.count() > off30.count());
}

TEST_CASE("sensor-assisted switching stays below the blind count on the loop route") {
    for (double bw : {30.0, 20.0}) {
        RngStream rng_off(17, 8), rng_on(17, 8);
        const auto cfg = config_for(bw, 2.0);
        const auto off = maintain_link(rectangle_route(), BeamtrackMode::SensorOff, cfg, rng_off);
        const auto on = maintain_link(rectangle_route(), BeamtrackMode::SensorOn, cfg, rng_on);
        CHECK(on.count() < off.count());
        CHECK(off.count() >= 2 * on.count());
    }
}

TEST_CASE("sensor dominance holds across routes and moderate noise") {
    // noise up to a quarter of the beamwidth
    const double bw = 30.0;
    for (double sigma : {0.5, 2.0, 5.0, 7.5}) {
        for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
            RngStream route_rng(seed, 30);
            const auto route = random_waypoint_trace(1.0, 1.0, 7.0, 5.0, 6, 1.0, route_rng);
            RngStream rng_off(seed, 31), rng_on(seed, 31);
            const auto cfg = config_for(bw, sigma);
            const auto off = maintain_link(route, BeamtrackMode::SensorOff, cfg, rng_off);
            const auto on = maintain_link(route, BeamtrackMode::SensorOn, cfg, rng_on);
            CHECK(on.count() <= off.count());
        }
    }
}

TEST_CASE("event costs add up to the logged overhead") {
    RngStream rng(19, 9);
    const auto cfg = config_for(20.0, 2.0);
    const auto off = maintain_link(rectangle_route(), BeamtrackMode::SensorOff, cfg, rng);
    REQUIRE(off.count() > 0);
    SimTime sum;
    for (const auto& e : off.events) {
        CHECK(e.cost == cfg.sweep_cost);
        sum += e.cost;
    }
    CHECK(off.total_cost() == sum);

    RngStream rng_on(19, 9);
    const auto on = maintain_link(rectangle_route(), BeamtrackMode::SensorOn, cfg, rng_on);
    CHECK(on.total_cost() <= off.total_cost());
}
