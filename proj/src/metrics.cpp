#include "cogsim/metrics.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <istream>
#include <ostream>
#include <sstream>

#include "cogsim/errors.hpp"

namespace cogsim {

namespace {

std::string to_string_exact(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, p);
}

struct FieldWriter {
    std::string* out;
    bool first = true;

    void sep() {
        if (!first) *out += ',';
        first = false;
    }
    void operator()(const char*, const std::string& v) { sep(); *out += v; }
    void operator()(const char*, const double& v) { sep(); *out += to_string_exact(v); }
    template <typename T>
    void operator()(const char*, const T& v) { sep(); *out += std::to_string(v); }
};

struct FieldParser {
    const std::vector<std::string>* cells;
    std::size_t idx = 0;

    const std::string& next() {
        if (idx >= cells->size()) throw SimError("metrics row has too few columns");
        return (*cells)[idx++];
    }
    void operator()(const char*, std::string& v) { v = next(); }
    void operator()(const char* name, double& v) {
        const auto& s = next();
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw SimError(std::string("bad double in metrics column ") + name);
    }
    template <typename T>
    void operator()(const char* name, T& v) {
        const auto& s = next();
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size())
            throw SimError(std::string("bad integer in metrics column ") + name);
    }
};

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

} // namespace

std::string metrics_csv_header() {
    std::string out;
    MetricsRecord dummy;
    bool first = true;
    visit_fields(dummy, [&](const char* name, auto&) {
        if (!first) out += ',';
        first = false;
        out += name;
    });
    return out;
}

std::string metrics_csv_row(const MetricsRecord& r) {
    std::string out;
    FieldWriter w{&out};
    visit_fields(const_cast<MetricsRecord&>(r), w);
    return out;
}

void write_metrics_csv(std::ostream& os, const std::vector<MetricsRecord>& records) {
    os << kMetricsCsvVersion << '\n' << metrics_csv_header() << '\n';
    for (const auto& r : records) os << metrics_csv_row(r) << '\n';
}

std::vector<MetricsRecord> parse_metrics_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line != kMetricsCsvVersion)
        throw SimError("metrics file missing version header");
    if (!std::getline(is, line) || line != metrics_csv_header())
        throw SimError("metrics file header does not match this version");
    std::vector<MetricsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        const auto cells = split_csv(line);
        MetricsRecord r;
        FieldParser p{&cells};
        visit_fields(r, p);
        if (p.idx != cells.size()) throw SimError("metrics row has too many columns");
        out.push_back(std::move(r));
    }
    return out;
}

void validate_record(const MetricsRecord& r) {
    for (int c = 0; c < 2; ++c) {
        if (r.generated[c] != r.successes[c] + r.dropped[c] + r.queued_at_end[c])
            throw SimError("frame conservation violated: generated != delivered + dropped + queued");
        if (r.tx_prob[c] < 0.0 || r.tx_prob[c] > 1.0 || r.tau[c] < 0.0 || r.tau[c] > 1.0)
            throw SimError("transmission probability out of [0, 1]");
    }
    if (r.bytes_offered != r.bytes_60g + r.bytes_24g + r.bytes_pending)
        throw SimError("byte conservation violated: offered != delivered(60) + delivered(2.4) + pending");
}

MetricKind metric_kind_from_string(const std::string& name) {
    if (name == "access_grant") return MetricKind::AccessGrant;
    if (name == "frame_dropped") return MetricKind::FrameDropped;
    if (name == "discovery_done") return MetricKind::DiscoveryDone;
    if (name == "rebeam") return MetricKind::Rebeam;
    if (name == "handover") return MetricKind::Handover;
    if (name == "bytes_60g") return MetricKind::Bytes60;
    if (name == "bytes_24g") return MetricKind::Bytes24;
    if (name == "bytes_offered") return MetricKind::BytesOffered;
    if (name == "bytes_pending") return MetricKind::BytesPending;
    if (name == "session_done") return MetricKind::SessionDone;
    if (name == "session_failed") return MetricKind::SessionFailed;
    if (name == "ctrl_frame_60g") return MetricKind::CtrlFrame60;
    throw SimError("unknown metric event kind: " + name);
}

void MetricsCollector::record(MetricKind kind, std::int64_t a, std::int64_t b) {
    switch (kind) {
        case MetricKind::AccessGrant:
            rec_.access_delay_ns_sum[a] += b;
            return;
        case MetricKind::FrameDropped:
            rec_.dropped[a]++;
            return;
        case MetricKind::DiscoveryDone:
            (a == 0 ? discovery_standalone_ns_ : discovery_assisted_ns_).push_back(b);
            return;
        case MetricKind::Rebeam:
            if (a == 0) {
                rec_.rebeam_count_off++;
                rec_.rebeam_cost_off_ns += b;
            } else {
                rec_.rebeam_count_on++;
                rec_.rebeam_cost_on_ns += b;
            }
            return;
        case MetricKind::Handover:
            rec_.handover_count++;
            return;
        case MetricKind::Bytes60:
            rec_.bytes_60g += static_cast<std::uint64_t>(a);
            return;
        case MetricKind::Bytes24:
            rec_.bytes_24g += static_cast<std::uint64_t>(a);
            if (!b) rec_.payload_bytes_24g_nonfallback += static_cast<std::uint64_t>(a);
            return;
        case MetricKind::BytesOffered:
            rec_.bytes_offered += static_cast<std::uint64_t>(a);
            return;
        case MetricKind::BytesPending:
            rec_.bytes_pending += static_cast<std::uint64_t>(a);
            return;
        case MetricKind::SessionDone:
            rec_.sessions_completed++;
            session_latencies_ns_.push_back(a);
            return;
        case MetricKind::SessionFailed:
            rec_.sessions_failed++;
            return;
        case MetricKind::CtrlFrame60:
            rec_.ctrl_frames_60g++;
            return;
    }
    throw SimError("unknown metric event kind");
}

namespace {

double mean_us(const std::vector<std::int64_t>& ns) {
    if (ns.empty()) return 0.0;
    long double sum = 0;
    for (auto v : ns) sum += static_cast<long double>(v);
    return static_cast<double>(sum / 1000.0L / static_cast<long double>(ns.size()));
}

} // namespace

MetricsRecord MetricsCollector::finalize(std::string run_id, std::uint64_t seed, double duration_s,
                                         const MacChannelStats* mac) {
    rec_.run_id = std::move(run_id);
    rec_.seed = seed;
    rec_.duration_s = duration_s;

    if (mac) {
        for (int c = 0; c < 2; ++c) {
            rec_.generated[c] = mac->generated[c];
            rec_.attempts[c] = mac->attempts[c];
            rec_.successes[c] = mac->successes[c];
            rec_.collisions[c] = mac->collisions[c];
            rec_.dropped[c] = mac->dropped[c];
            rec_.backoff_decrements[c] = mac->backoff_decrements[c];
            rec_.queued_at_end[c] = mac->queued_at_end[c];
            rec_.access_delay_ns_sum[c] = mac->access_delay_ns_sum[c];
            rec_.mean_access_delay_us[c] = mac->mean_access_delay_us(static_cast<AccessCategory>(c));
            rec_.tx_prob[c] = mac->success_ratio(static_cast<AccessCategory>(c));
            rec_.tau[c] = mac->tau(static_cast<AccessCategory>(c));
        }
    }

    rec_.mean_discovery_standalone_us = mean_us(discovery_standalone_ns_);
    rec_.mean_discovery_assisted_us = mean_us(discovery_assisted_ns_);
    rec_.discovered_standalone = discovery_standalone_ns_.size();
    rec_.discovered_assisted = discovery_assisted_ns_.size();
    rec_.mean_overhead_24g_us = discovery_assisted_ns_.empty()
                                    ? static_cast<double>(overhead_24g_ns_) / 1000.0
                                    : static_cast<double>(overhead_24g_ns_) / 1000.0 /
                                          static_cast<double>(discovery_assisted_ns_.size());

    rec_.session_latency_ns_sum = 0;
    for (auto v : session_latencies_ns_) rec_.session_latency_ns_sum += v;
    if (!session_latencies_ns_.empty()) {
        auto sorted = session_latencies_ns_;
        std::sort(sorted.begin(), sorted.end());
        const auto rank = static_cast<std::size_t>(
            std::ceil(0.95 * static_cast<double>(sorted.size())));
        rec_.session_latency_p95_ns = sorted[rank - 1];
        rec_.session_latency_mean_us =
            static_cast<double>(rec_.session_latency_ns_sum) / 1000.0 /
            static_cast<double>(session_latencies_ns_.size());
        rec_.session_latency_p95_us = static_cast<double>(rec_.session_latency_p95_ns) / 1000.0;
    }

    validate_record(rec_);
    return rec_;
}

} // namespace cogsim
