#ifndef COGSIM_METRICS_HPP
#define COGSIM_METRICS_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "cogsim/mac_control.hpp"
#include "cogsim/sim_time.hpp"

namespace cogsim {

// One run's aggregated statistics: raw counters plus the derived quantities
// reported by the experiment CSVs. Column order is fixed by visit_fields and
// versioned in the file header.
struct MetricsRecord {
    std::string run_id;
    std::uint64_t seed = 0;
    double duration_s = 0.0;

    // control channel, indexed by AccessCategory (0 = req60, 1 = wifi24)
    std::uint64_t generated[2] = {0, 0};
    std::uint64_t attempts[2] = {0, 0};
    std::uint64_t successes[2] = {0, 0};
    std::uint64_t collisions[2] = {0, 0};
    std::uint64_t dropped[2] = {0, 0};
    std::uint64_t backoff_decrements[2] = {0, 0};
    std::uint64_t queued_at_end[2] = {0, 0};
    std::int64_t access_delay_ns_sum[2] = {0, 0};
    double mean_access_delay_us[2] = {0.0, 0.0};
    double tx_prob[2] = {0.0, 0.0}; // successful / attempted transmissions
    double tau[2] = {0.0, 0.0};     // attempts per live backoff slot

    // discovery
    double mean_discovery_standalone_us = 0.0;
    double mean_discovery_assisted_us = 0.0;
    double mean_overhead_24g_us = 0.0;
    std::uint64_t discovered_standalone = 0;
    std::uint64_t discovered_assisted = 0;

    // beam tracking
    std::uint64_t rebeam_count_off = 0;
    std::uint64_t rebeam_count_on = 0;
    std::int64_t rebeam_cost_off_ns = 0;
    std::int64_t rebeam_cost_on_ns = 0;

    // data plane
    std::uint64_t bytes_offered = 0;
    std::uint64_t bytes_60g = 0;
    std::uint64_t bytes_24g = 0;
    std::uint64_t bytes_pending = 0;

    // controller
    std::uint64_t handover_count = 0;
    std::uint64_t ctrl_frames_60g = 0; // association/request frames on 60 GHz: must stay 0
    std::uint64_t payload_bytes_24g_nonfallback = 0;
    std::uint64_t sessions_completed = 0;
    std::uint64_t sessions_failed = 0;
    std::int64_t session_latency_ns_sum = 0;
    std::int64_t session_latency_p95_ns = 0;
    double session_latency_mean_us = 0.0;
    double session_latency_p95_us = 0.0;

    bool operator==(const MetricsRecord&) const = default;
};

// Calls f(name, ref) for every column, in CSV order.
template <typename Record, typename F>
void visit_fields(Record& r, F&& f) {
    f("run_id", r.run_id);
    f("seed", r.seed);
    f("duration_s", r.duration_s);
    f("generated_req60", r.generated[0]);
    f("generated_wifi24", r.generated[1]);
    f("attempts_req60", r.attempts[0]);
    f("attempts_wifi24", r.attempts[1]);
    f("successes_req60", r.successes[0]);
    f("successes_wifi24", r.successes[1]);
    f("collisions_req60", r.collisions[0]);
    f("collisions_wifi24", r.collisions[1]);
    f("dropped_req60", r.dropped[0]);
    f("dropped_wifi24", r.dropped[1]);
    f("backoff_decrements_req60", r.backoff_decrements[0]);
    f("backoff_decrements_wifi24", r.backoff_decrements[1]);
    f("queued_at_end_req60", r.queued_at_end[0]);
    f("queued_at_end_wifi24", r.queued_at_end[1]);
    f("access_delay_ns_sum_req60", r.access_delay_ns_sum[0]);
    f("access_delay_ns_sum_wifi24", r.access_delay_ns_sum[1]);
    f("mean_access_delay_us_req60", r.mean_access_delay_us[0]);
    f("mean_access_delay_us_wifi24", r.mean_access_delay_us[1]);
    f("tx_prob_req60", r.tx_prob[0]);
    f("tx_prob_wifi24", r.tx_prob[1]);
    f("tau_req60", r.tau[0]);
    f("tau_wifi24", r.tau[1]);
    f("mean_discovery_standalone_us", r.mean_discovery_standalone_us);
    f("mean_discovery_assisted_us", r.mean_discovery_assisted_us);
    f("mean_overhead_24g_us", r.mean_overhead_24g_us);
    f("discovered_standalone", r.discovered_standalone);
    f("discovered_assisted", r.discovered_assisted);
    f("rebeam_count_off", r.rebeam_count_off);
    f("rebeam_count_on", r.rebeam_count_on);
    f("rebeam_cost_off_ns", r.rebeam_cost_off_ns);
    f("rebeam_cost_on_ns", r.rebeam_cost_on_ns);
    f("bytes_offered", r.bytes_offered);
    f("bytes_60g", r.bytes_60g);
    f("bytes_24g", r.bytes_24g);
    f("bytes_pending", r.bytes_pending);
    f("handover_count", r.handover_count);
    f("ctrl_frames_60g", r.ctrl_frames_60g);
    f("payload_bytes_24g_nonfallback", r.payload_bytes_24g_nonfallback);
    f("sessions_completed", r.sessions_completed);
    f("sessions_failed", r.sessions_failed);
    f("session_latency_ns_sum", r.session_latency_ns_sum);
    f("session_latency_p95_ns", r.session_latency_p95_ns);
    f("session_latency_mean_us", r.session_latency_mean_us);
    f("session_latency_p95_us", r.session_latency_p95_us);
}

inline constexpr const char* kMetricsCsvVersion = "# cogsim-metrics-v1";

std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsRecord& r);
// Full file: version comment, header, one row per record.
void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records);
// Parses a file produced by write_metrics_csv (any number of rows).
std::vector<MetricsRecord> parse_metrics_csv(std::istream& is);

// Conservation and range identities; throws SimError naming the violation.
void validate_record(const MetricsRecord& r);

// Event-kind tags accepted by MetricsCollector::record. Unknown tags are a
// fatal schema error.
enum class MetricKind {
    AccessGrant,  // a = category, b = delay ns
    FrameDropped, // a = category
    DiscoveryDone,// a = mode (0 standalone, 1 assisted), b = elapsed ns
    Rebeam,       // a = mode (0 off, 1 on), b = cost ns
    Handover,
    Bytes60,      // a = bytes
    Bytes24,      // a = bytes, b = 1 if fallback traffic
    BytesOffered, // a = bytes
    BytesPending, // a = bytes still queued at run end
    SessionDone,  // a = latency ns
    SessionFailed,
    CtrlFrame60
};
MetricKind metric_kind_from_string(const std::string& name);

// Per-run collector. MAC counters are pulled from the channel at finalize;
// everything else arrives through record().
class MetricsCollector {
public:
    void record(MetricKind kind, std::int64_t a = 0, std::int64_t b = 0);

    // Overhead accumulators the controller updates directly.
    void add_overhead_24g(SimTime t) { overhead_24g_ns_ += t.nanoseconds(); }

    MetricsRecord finalize(std::string run_id, std::uint64_t seed, double duration_s,
                           const MacChannelStats* mac = nullptr);

private:
    MetricsRecord rec_;
    std::vector<std::int64_t> session_latencies_ns_;
    std::vector<std::int64_t> discovery_standalone_ns_;
    std::vector<std::int64_t> discovery_assisted_ns_;
    std::int64_t overhead_24g_ns_ = 0;
};

} // namespace cogsim

#endif
