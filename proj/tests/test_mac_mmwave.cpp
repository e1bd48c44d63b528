#include <doctest.h>

#include "cogsim/mac_mmwave.hpp"
#include "cogsim/rng.hpp"

using namespace cogsim;

namespace {

CbapSchedule sched4() { return {SimTime::ns(0), 4, SimTime::ms(10)}; }

} // namespace

TEST_CASE("sector count derives from beamwidth") {
    CHECK(SectorConfig::from_beamwidth(90.0).sector_count == 4);
    CHECK(SectorConfig::from_beamwidth(60.0).sector_count == 6);
    CHECK(SectorConfig::from_beamwidth(20.0).sector_count == 18);
    CHECK_THROWS_AS(SectorConfig::from_beamwidth(0.0), ConfigError);
}

TEST_CASE("sectors tile the circle around their boresights") {
    const auto s = SectorConfig::from_beamwidth(30.0);
    CHECK(s.sector_of(44.0) == 1); // [15, 45)
    CHECK(s.sector_of(46.0) == 2);
    CHECK(s.sector_of(0.0) == 0);
    CHECK(s.sector_of(359.0) == 0); // wraps into [-15, 15)
}

TEST_CASE("a request at its own CBAP start waits nothing") {
    const auto w = sched4().next_window(2, SimTime::ms(20));
    CHECK(w.start == SimTime::ms(20));
    CHECK(w.end == SimTime::ms(30));
}

TEST_CASE("a request just after its window waits three full CBAPs (4 sectors)") {
    // sector 1's window is [10, 20) ms; arriving right at 20 ms waits 30 ms
    const auto w = sched4().next_window(1, SimTime::ms(20));
    CHECK(w.start == SimTime::ms(50));
    CHECK(w.start - SimTime::ms(20) == SimTime::ms(30));
}

TEST_CASE("a request just after its window waits five CBAPs with 6 sectors") {
    const CbapSchedule s{SimTime::ns(0), 6, SimTime::ms(10)};
    const auto w = s.next_window(0, SimTime::ms(10));
    CHECK(w.start == SimTime::ms(60));
    CHECK(w.start - SimTime::ms(10) == SimTime::ms(50));
}

TEST_CASE("mean CBAP wait over arrivals outside the own window is 1.5 cycles-worth") {
    const auto s = sched4();
    RngStream rng(11, 0);
    const std::int64_t d = s.cbap_duration.nanoseconds();
    double total = 0;
    const int n = 10000;
    for (int i = 0; i < n; ++i) {
        // uniform over the three foreign windows following sector 0's own
        const std::int64_t offset = d + rng.uniform_int(0, 3 * d - 1);
        const SimTime arrival = SimTime::ns(offset);
        const auto w = s.next_window(0, arrival);
        total += static_cast<double>((w.start - arrival).nanoseconds());
    }
    const double mean = total / n;
    CHECK(mean == doctest::Approx(1.5 * static_cast<double>(d)).epsilon(0.02));
}

namespace {

// flat quality surface with one clear peak
std::function<double(int, int)> peaked(int best_tx, int best_rx) {
    return [=](int i, int j) { return (i == best_tx && j == best_rx) ? 20.0 : -5.0; };
}

} // namespace

TEST_CASE("unrestricted 6x6 sweep sends 36 training frames plus one feedback") {
    const auto r = sector_sweep(6, 6, std::nullopt, std::nullopt, peaked(2, 3), 0.0);
    CHECK(r.pairs_evaluated == 36);
    CHECK(r.frames_sent == 37);
    CHECK(r.found);
    CHECK(r.best.tx_sector == 2);
    CHECK(r.best.rx_sector == 3);
}

TEST_CASE("a +-1 window on both ends evaluates 9 pairs") {
    const auto r = sector_sweep(6, 6, SectorWindow{2, 1}, SectorWindow{3, 1}, peaked(2, 3), 0.0);
    CHECK(r.pairs_evaluated == 9);
    CHECK(r.frames_sent == 10);
    CHECK(r.best.tx_sector == 2);
}

TEST_CASE("degenerate 1x1 sweep sends one training frame plus feedback") {
    const auto r = sector_sweep(1, 1, std::nullopt, std::nullopt, peaked(0, 0), 0.0);
    CHECK(r.pairs_evaluated == 1);
    CHECK(r.frames_sent == 2);
}

TEST_CASE("sweep fails when nothing clears the minimum SNR") {
    const auto r = sector_sweep(4, 1, std::nullopt, std::nullopt,
                                [](int, int) { return -30.0; }, 1.0);
    CHECK_FALSE(r.found);
}

TEST_CASE("sweep duration is linear in the evaluated pairs") {
    const auto t = SweepTimings::standard();
    const auto one = sector_sweep(1, 1, std::nullopt, std::nullopt, peaked(0, 0), 0.0, t);
    const auto nine = sector_sweep(3, 3, std::nullopt, std::nullopt, peaked(0, 0), 0.0, t);
    const auto slope = (nine.duration - one.duration).nanoseconds() / 8;
    CHECK(SimTime::ns(slope) == t.frame_airtime + t.inter_frame);
}

TEST_CASE("restricted sweep agrees with exhaustive whenever the peak is inside the window") {
    RngStream rng(31, 5);
    const PropagationParams prop;
    const auto ap = SectorConfig::from_beamwidth(60.0);
    const auto dev = SectorConfig::from_beamwidth(60.0);
    for (int i = 0; i < 50; ++i) {
        const Vec2 ap_pos{4, 3};
        const Vec2 dev_pos{rng.uniform01() * 8, rng.uniform01() * 6};
        if (distance(ap_pos, dev_pos) < 0.3) continue;
        const auto snr = make_pair_snr(prop, ap, ap_pos, 10.0, -70.0, dev, dev_pos, 0.0, 0);
        const auto full = sector_sweep(6, 6, std::nullopt, std::nullopt, snr, 1.0);
        REQUIRE(full.found);
        const auto restricted = sector_sweep(6, 6, SectorWindow{full.best.tx_sector, 1},
                                             SectorWindow{full.best.rx_sector, 1}, snr, 1.0);
        REQUIRE(restricted.found);
        CHECK(restricted.best.tx_sector == full.best.tx_sector);
        CHECK(restricted.best.rx_sector == full.best.rx_sector);
        CHECK(restricted.best.quality_db == doctest::Approx(full.best.quality_db));
    }
}

TEST_CASE("875 MB at 7 Gb/s is exactly one second of airtime") {
    CHECK(payload_airtime(875'000'000, 7'000'000'000) == SimTime::sec(1));
}

TEST_CASE("transfer inside one window finishes without suspension") {
    // sector 0 window [0, 10) ms; 1 ms of airtime starting at 2 ms
    const auto done = transfer_completion(sched4(), 0, SimTime::ms(2), SimTime::ms(1));
    CHECK(done == SimTime::ms(3));
}

TEST_CASE("transfer spanning a CBAP boundary suspends and resumes, airtime unchanged") {
    // needs 15 ms of airtime from t=0 in 10 ms windows every 40 ms
    const auto done = transfer_completion(sched4(), 0, SimTime::ns(0), SimTime::ms(15));
    CHECK(done == SimTime::ms(45)); // 10 ms in cycle 0, 5 ms into cycle 1
    const auto used = usable_airtime(sched4(), 0, SimTime::ns(0), done);
    CHECK(used == SimTime::ms(15));
}

TEST_CASE("transfer starting outside the window waits for it") {
    // sector 2 owns [20, 30) ms
    const auto done = transfer_completion(sched4(), 2, SimTime::ms(5), SimTime::ms(2));
    CHECK(done == SimTime::ms(22));
}

TEST_CASE("usable airtime accumulates only own-sector time") {
    const auto s = sched4();
    CHECK(usable_airtime(s, 0, SimTime::ns(0), SimTime::ms(80)) == SimTime::ms(20));
    CHECK(usable_airtime(s, 3, SimTime::ns(0), SimTime::ms(40)) == SimTime::ms(10));
    CHECK(usable_airtime(s, 1, SimTime::ms(12), SimTime::ms(18)) == SimTime::ms(6));
}
