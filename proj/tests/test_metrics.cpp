#include <doctest.h>

#include <cmath>
#include <sstream>

#include "cogsim/engine.hpp"
#include "cogsim/metrics.hpp"

using namespace cogsim;

TEST_CASE("recording an access grant accumulates delay and count") {
    MetricsCollector c;
    c.record(MetricKind::AccessGrant, 0, 120'000);
    c.record(MetricKind::AccessGrant, 0, 80'000);
    MacChannelStats mac;
    mac.generated[0] = mac.attempts[0] = mac.successes[0] = 2;
    mac.access_delay_ns_sum[0] = 200'000;
    const auto r = c.finalize("t", 1, 1.0, &mac);
    CHECK(r.mean_access_delay_us[0] == doctest::Approx(100.0));
    CHECK(r.successes[0] == 2);
}

TEST_CASE("a run with no traffic serializes as an all-zero record") {
    MetricsCollector c;
    const auto r = c.finalize("idle", 7, 1.0, nullptr);
    CHECK(r.generated[0] == 0);
    CHECK(r.bytes_offered == 0);
    CHECK(r.mean_access_delay_us[0] == 0.0);
    CHECK(r.session_latency_p95_ns == 0);
}

TEST_CASE("unknown event kinds are a fatal schema error") {
    CHECK_THROWS_AS(metric_kind_from_string("no_such_kind"), SimError);
    CHECK(metric_kind_from_string("handover") == MetricKind::Handover);
}

TEST_CASE("csv round-trips exactly") {
    MetricsCollector c;
    c.record(MetricKind::BytesOffered, 1'000'000);
    c.record(MetricKind::Bytes60, 600'000);
    c.record(MetricKind::Bytes24, 150'000, 1);
    c.record(MetricKind::BytesPending, 250'000);
    c.record(MetricKind::SessionDone, 123'456'789);
    c.record(MetricKind::Handover, 0, 0);
    c.record(MetricKind::Rebeam, 0, 5'000'000);
    MacChannelStats mac;
    mac.generated[1] = 10;
    mac.attempts[1] = 12;
    mac.successes[1] = 9;
    mac.dropped[1] = 1;
    mac.backoff_decrements[1] = 311;
    mac.access_delay_ns_sum[1] = 37'123'457;
    mac.queued_at_end[1] = 0;
    MetricsRecord r = c.finalize("roundtrip", 42, 2.5, &mac);

    std::stringstream ss;
    write_metrics_csv(ss, {r});
    const auto parsed = parse_metrics_csv(ss);
    REQUIRE(parsed.size() == 1);
    CHECK(parsed[0] == r);
}

TEST_CASE("frame conservation failures invalidate the record with a diagnostic") {
    MetricsRecord r;
    r.generated[0] = 5;
    r.successes[0] = 3; // one frame unaccounted for
    r.dropped[0] = 1;
    r.queued_at_end[0] = 0;
    CHECK_THROWS_WITH_AS(validate_record(r),
                         "frame conservation violated: generated != delivered + dropped + queued",
                         SimError);
}

TEST_CASE("byte conservation failures invalidate the record") {
    MetricsRecord r;
    r.bytes_offered = 100;
    r.bytes_60g = 40;
    r.bytes_24g = 10;
    r.bytes_pending = 49;
    CHECK_THROWS_AS(validate_record(r), SimError);
}

TEST_CASE("identical seeded runs serialize to identical rows") {
    AccessMixParams params;
    params.n_req60 = 2;
    params.n_wifi24 = 2;
    params.duration_s = 1.0;
    const MetricsRecord a = run_access_mix(params, 5);
    const MetricsRecord b = run_access_mix(params, 5);
    CHECK(metrics_csv_row(a) == metrics_csv_row(b));
    CHECK(a == b);
}

TEST_CASE("p95 uses the nearest-rank of the stored latencies") {
    MetricsCollector c;
    for (int i = 1; i <= 100; ++i) c.record(MetricKind::SessionDone, i * 1000);
    const auto r = c.finalize("p95", 1, 1.0, nullptr);
    CHECK(r.session_latency_p95_ns == 95'000);
    CHECK(r.sessions_completed == 100);
}

TEST_CASE("live aggregation equals a recount from the event trace") {
    // run a short saturated mix with the trace on, then recompute the MAC
    // statistics from the trace lines alone
    std::stringstream trace;
    AccessMixParams params;
    params.n_req60 = 2;
    params.n_wifi24 = 2;
    params.duration_s = 0.5;
    params.trace = &trace;
    const MetricsRecord live = run_access_mix(params, 31);

    std::uint64_t attempts[2] = {0, 0}, successes[2] = {0, 0}, decrements[2] = {0, 0};
    std::int64_t delay_sum[2] = {0, 0};
    std::string line;
    while (std::getline(trace, line)) {
        std::istringstream ls(line);
        std::int64_t t;
        std::string tag, kind;
        ls >> t >> tag >> kind;
        if (tag != "ch") continue;
        if (kind == "slot_idle") {
            std::string f1, f2;
            ls >> f1 >> f2;
            decrements[0] += std::stoull(f1.substr(4));
            decrements[1] += std::stoull(f2.substr(4));
        } else if (kind == "attempt") {
            std::string st, cat;
            ls >> st >> cat;
            attempts[std::stoi(cat.substr(4))]++;
        } else if (kind == "success") {
            std::string st, cat, delay;
            ls >> st >> cat >> delay;
            const int c = std::stoi(cat.substr(4));
            successes[c]++;
            delay_sum[c] += std::stoll(delay.substr(9));
        }
    }
    for (int c = 0; c < 2; ++c) {
        CHECK(attempts[c] == live.attempts[c]);
        CHECK(successes[c] == live.successes[c]);
        CHECK(decrements[c] == live.backoff_decrements[c]);
        CHECK(delay_sum[c] == live.access_delay_ns_sum[c]);
        if (attempts[c] > 0) {
            const double tau =
                static_cast<double>(attempts[c]) / static_cast<double>(attempts[c] + decrements[c]);
            CHECK(tau == doctest::Approx(live.tau[c]));
            const double tx_prob =
                static_cast<double>(successes[c]) / static_cast<double>(attempts[c]);
            CHECK(tx_prob == doctest::Approx(live.tx_prob[c]));
        }
    }
}
