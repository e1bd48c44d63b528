#ifndef COGSIM_FRAMES_HPP
#define COGSIM_FRAMES_HPP

#include <cstdint>

#include "cogsim/defaults.hpp"
#include "cogsim/errors.hpp"
#include "cogsim/sim_time.hpp"

namespace cogsim {

enum class FrameKind {
    Rts,
    Cts,
    Ack,
    Data,
    AssocReq,
    AssocResp,
    Sweep,
    SweepFeedback,
    ChanReq60,
    Coord // WiFi AP -> picocell directive
};

struct FrameSpec {
    FrameKind kind = FrameKind::Data;
    std::uint32_t body_bytes = 0;
    std::uint32_t phy_header_bytes = defaults::kPhyHeaderBytes;
    std::uint32_t mac_header_bytes = defaults::kMacHeaderBytes;

    // RTS/CTS/ACK sizes already are the whole MAC frame; everything else
    // carries a body behind a MAC header.
    bool has_mac_header() const {
        return kind != FrameKind::Rts && kind != FrameKind::Cts && kind != FrameKind::Ack;
    }

    std::uint64_t bits_on_air() const {
        return 8ull * (body_bytes + phy_header_bytes + (has_mac_header() ? mac_header_bytes : 0));
    }

    static FrameSpec of(FrameKind kind) {
        switch (kind) {
            case FrameKind::Rts: return {kind, defaults::kRtsBytes};
            case FrameKind::Cts: return {kind, defaults::kCtsBytes};
            case FrameKind::Ack: return {kind, defaults::kAckBytes};
            case FrameKind::Data: return {kind, defaults::kWifiDataBytes};
            case FrameKind::AssocReq: return {kind, defaults::kAssocReqBytes};
            case FrameKind::AssocResp: return {kind, defaults::kAssocRespBytes};
            case FrameKind::Sweep: return {kind, defaults::kSweepFrameBytes};
            case FrameKind::SweepFeedback: return {kind, defaults::kSweepFrameBytes};
            case FrameKind::ChanReq60: return {kind, defaults::kChanReq60Bytes};
            case FrameKind::Coord: return {kind, defaults::kCoordFrameBytes};
        }
        throw SimError("unknown frame kind");
    }
};

// Time on air, rounded up to whole nanoseconds.
inline SimTime frame_airtime(const FrameSpec& frame, std::uint64_t rate_bps) {
    if (rate_bps == 0) throw SimError("frame airtime requires a positive rate");
    const std::uint64_t bits = frame.bits_on_air();
    const std::uint64_t ns = (bits * 1'000'000'000ull + rate_bps - 1) / rate_bps;
    return SimTime::ns(static_cast<std::int64_t>(ns));
}

} // namespace cogsim

#endif
