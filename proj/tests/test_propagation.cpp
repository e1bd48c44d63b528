#include <doctest.h>

#include "cogsim/propagation.hpp"
#include "cogsim/rng.hpp"

using namespace cogsim;

TEST_CASE("free-space loss matches the closed form at 1 m") {
    // 20*log10(4*pi*d*f/c), evaluated independently and frozen
    CHECK(*path_loss_db(Band::Ghz24, 1.0, 0) == doctest::Approx(40.05).epsilon(0.0025));
    CHECK(*path_loss_db(Band::Ghz60, 1.0, 0) == doctest::Approx(68.0).epsilon(0.0015));
}

TEST_CASE("any wall blocks 60 GHz outright; 2.4 GHz pays per wall") {
    CHECK_FALSE(path_loss_db(Band::Ghz60, 3.0, 1).has_value());
    const double clear = *path_loss_db(Band::Ghz24, 3.0, 0);
    CHECK(*path_loss_db(Band::Ghz24, 3.0, 2) == doctest::Approx(clear + 10.0));
}

TEST_CASE("non-positive distance is rejected") {
    CHECK_THROWS_AS(path_loss_db(Band::Ghz24, 0.0, 0), SimError);
    CHECK_THROWS_AS(path_loss_db(Band::Ghz24, -1.0, 0), SimError);
}

TEST_CASE("path loss grows strictly with distance") {
    RngStream rng(3, 1);
    for (int i = 0; i < 200; ++i) {
        const double d = 0.2 + rng.uniform01() * 20.0;
        const double step = 0.01 + rng.uniform01();
        for (Band band : {Band::Ghz24, Band::Ghz60})
            CHECK(*path_loss_db(band, d + step, 0) > *path_loss_db(band, d, 0));
    }
}

TEST_CASE("path loss is reciprocal for a fixed geometry") {
    const PropagationParams prop;
    const RadioConfig a = RadioConfig::wifi();
    const RadioConfig b = RadioConfig::wifi();
    RngStream rng(17, 2);
    for (int i = 0; i < 100; ++i) {
        const Vec2 pa{rng.uniform01() * 10, rng.uniform01() * 10};
        const Vec2 pb{rng.uniform01() * 10, rng.uniform01() * 10};
        if (pa == pb) continue;
        const LinkBudget fwd = link_budget(prop, a, pa, b, pb, 1);
        const LinkBudget rev = link_budget(prop, b, pb, a, pa, 1);
        CHECK(fwd.rx_power_dbm == doctest::Approx(rev.rx_power_dbm));
    }
}

TEST_CASE("isotropic pattern has zero gain everywhere") {
    const auto iso = AntennaPattern::isotropic();
    for (double a : {0.0, 45.0, 90.0, 180.0}) CHECK(antenna_gain_dbi(iso, a) == 0.0);
}

TEST_CASE("cone mainlobe gain for a 60 degree beam") {
    // 10*log10(2 / (1 - cos 30)), evaluated independently and frozen
    CHECK(cone_mainlobe_gain_dbi(60.0) == doctest::Approx(11.74).epsilon(0.0043));
    const auto p = AntennaPattern::sectorized(60.0);
    CHECK(antenna_gain_dbi(p, 0.0) == doctest::Approx(11.74).epsilon(0.0043));
}

TEST_CASE("angles outside the mainlobe fall to the sidelobe floor") {
    const auto p = AntennaPattern::sectorized(60.0);
    CHECK(antenna_gain_dbi(p, 180.0) == defaults::kSidelobeGainDbi);
    CHECK(antenna_gain_dbi(p, 30.0) == p.mainlobe_gain_dbi); // edge inclusive
    CHECK(antenna_gain_dbi(p, 30.1) == defaults::kSidelobeGainDbi);
}

TEST_CASE("rate staircase peaks and cut-offs") {
    const PropagationParams prop;
    CHECK(achievable_rate_bps(prop, Band::Ghz60, -5.0) == 0);
    CHECK(achievable_rate_bps(prop, Band::Ghz24, 40.0) == 54'000'000);
    CHECK(achievable_rate_bps(prop, Band::Ghz60, 30.0) == 7'000'000'000);
}

TEST_CASE("rates are table steps, never interpolated") {
    const PropagationParams prop;
    RngStream rng(23, 4);
    for (int i = 0; i < 300; ++i) {
        const double snr = -10.0 + rng.uniform01() * 50.0;
        const auto r = achievable_rate_bps(prop, Band::Ghz60, snr);
        bool in_table = r == 0;
        for (const auto& [s, v] : prop.rate_table_60) in_table = in_table || r == v;
        CHECK(in_table);
    }
}

TEST_CASE("blocking dominance: a walled 60 GHz link carries nothing at any distance") {
    const PropagationParams prop;
    RadioConfig tx = RadioConfig::mmwave(AntennaPattern::sectorized(30.0));
    tx.tx_power_dbm = 40.0; // even absurd power does not help
    const RadioConfig rx = RadioConfig::mmwave(AntennaPattern::isotropic());
    for (double d : {0.5, 1.0, 3.0}) {
        const LinkBudget lb = link_budget(prop, tx, {0, 0}, rx, {d, 0}, 1);
        CHECK(lb.blocked);
        CHECK(lb.rate_bps == 0);
    }
}

TEST_CASE("four-room floor plan geometry") {
    const FloorPlan plan = FloorPlan::four_room();
    REQUIRE(plan.rooms().size() == 4);
    CHECK(plan.room_of({4, 3}) == 0);
    CHECK(plan.room_of({12, 3}) == 1);
    CHECK(plan.room_of({4, 9}) == 2);
    CHECK(plan.room_of({12, 9}) == 3);
    CHECK(plan.room_of({100, 100}) == -1);

    CHECK(plan.walls_crossed({4, 3}, {7, 5}) == 0);   // same room
    CHECK(plan.walls_crossed({4, 3}, {12, 3}) == 1);  // adjacent rooms
    CHECK(plan.walls_crossed({4, 3}, {12, 9}) == 2);  // diagonal rooms
}

TEST_CASE("coverage complementarity on the default plan") {
    // a central 2.4 GHz AP reaches every room above the minimum rate, while a
    // 60 GHz picocell only covers its own room
    const FloorPlan plan = FloorPlan::four_room();
    const PropagationParams prop;
    const RadioConfig wifi_ap = RadioConfig::wifi();
    const Vec2 ap_pos{8, 6};

    const RadioConfig pico =
        RadioConfig::mmwave(AntennaPattern::isotropic()); // worst case, no beam gain
    const Vec2 pico_pos = plan.rooms()[0].center();

    for (const auto& room : plan.rooms()) {
        for (double fx : {0.2, 0.45, 0.8}) {
            for (double fy : {0.2, 0.45, 0.8}) {
                const Vec2 p{room.x + fx * room.w, room.y + fy * room.h};
                const RadioConfig dev24 = RadioConfig::wifi();
                const LinkBudget lb24 = link_budget(prop, plan, wifi_ap, ap_pos, dev24, p);
                CHECK(lb24.rate_bps > 0);

                RadioConfig dev60 = RadioConfig::mmwave(AntennaPattern::isotropic());
                const LinkBudget lb60 = link_budget(prop, plan, pico, pico_pos, dev60, p);
                if (plan.room_of(p) == 0) {
                    CHECK_FALSE(lb60.blocked);
                } else {
                    CHECK(lb60.rate_bps == 0);
                }
            }
        }
    }
}
