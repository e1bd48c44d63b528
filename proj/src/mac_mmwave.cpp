#include "cogsim/mac_mmwave.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "cogsim/errors.hpp"
#include "cogsim/frames.hpp"

namespace cogsim {

SectorConfig SectorConfig::from_beamwidth(double beamwidth_deg, SimTime cbap) {
    if (beamwidth_deg <= 0.0 || beamwidth_deg > 360.0)
        throw ConfigError("beamwidth must be in (0, 360]");
    SectorConfig cfg;
    cfg.beamwidth_deg = beamwidth_deg;
    cfg.sector_count = static_cast<int>(std::ceil(360.0 / beamwidth_deg));
    cfg.cbap_duration = cbap;
    return cfg;
}

int SectorConfig::sector_of(double bearing) const {
    const double shifted = wrap_deg(bearing + beamwidth_deg / 2.0);
    return static_cast<int>(shifted / beamwidth_deg) % sector_count;
}

TimeInterval CbapSchedule::next_window(int sector, SimTime now) const {
    if (sector < 0 || sector >= sector_count) throw SimError("sector out of range");
    const std::int64_t cycle = cycle_length().nanoseconds();
    const std::int64_t offset = cbap_duration.nanoseconds() * sector;
    const std::int64_t rel = now.nanoseconds() - cycle_start.nanoseconds();
    // earliest cycle k with window end > now
    std::int64_t k = 0;
    if (rel >= 0) {
        k = (rel - offset) >= 0 ? (rel - offset) / cycle : 0;
        if (offset + k * cycle + cbap_duration.nanoseconds() <= rel) ++k;
    } else {
        k = -((-rel + cycle - 1) / cycle);
        while (offset + k * cycle + cbap_duration.nanoseconds() <= rel) ++k;
    }
    const SimTime start = cycle_start + SimTime::ns(offset + k * cycle);
    return {start, start + cbap_duration};
}

SweepTimings SweepTimings::standard() {
    SweepTimings t;
    t.frame_airtime =
        cogsim::frame_airtime(FrameSpec::of(FrameKind::Sweep), defaults::kSweepCtrlRateBps);
    t.inter_frame = SimTime::us(defaults::kSifs60Us);
    t.rifs = SimTime::us(defaults::kRifsUs);
    t.feedback_airtime =
        cogsim::frame_airtime(FrameSpec::of(FrameKind::SweepFeedback), defaults::kSweepCtrlRateBps);
    t.refine_extra = SimTime::us(defaults::kBeamRefineExtraUs);
    return t;
}

namespace {

std::vector<int> sectors_in(int total, const std::optional<SectorWindow>& window) {
    std::vector<int> out;
    if (!window || 2 * window->halfwidth + 1 >= total) {
        out.resize(total);
        for (int i = 0; i < total; ++i) out[i] = i;
        return out;
    }
    for (int d = -window->halfwidth; d <= window->halfwidth; ++d)
        out.push_back(((window->center + d) % total + total) % total);
    return out;
}

} // namespace

SweepResult sector_sweep(int tx_sectors, int rx_sectors,
                         std::optional<SectorWindow> tx_window,
                         std::optional<SectorWindow> rx_window,
                         const std::function<double(int, int)>& pair_snr_db, double min_snr_db,
                         const SweepTimings& timings) {
    if (tx_sectors < 1 || rx_sectors < 1) throw SimError("sector counts must be positive");
    const auto txs = sectors_in(tx_sectors, tx_window);
    const auto rxs = sectors_in(rx_sectors, rx_window);

    SweepResult result;
    double best = -1e300;
    for (int i : txs) {
        for (int j : rxs) {
            ++result.pairs_evaluated;
            const double q = pair_snr_db(i, j);
            if (q > best) {
                best = q;
                result.best = BeamPair{i, j, q};
            }
        }
    }
    result.frames_sent = result.pairs_evaluated + 1;
    result.duration = timings.duration_for_pairs(result.pairs_evaluated);
    result.found = best >= min_snr_db;
    return result;
}

std::function<double(int, int)> make_pair_snr(const PropagationParams& prop,
                                              const SectorConfig& ap_sectors, Vec2 ap_pos,
                                              double tx_power_dbm, double noise_floor_dbm,
                                              const SectorConfig& dev_sectors, Vec2 dev_pos,
                                              double dev_orientation_deg, int walls_crossed) {
    return [=, &prop](int ap_sector, int dev_sector) -> double {
        RadioConfig tx = RadioConfig::mmwave(
            AntennaPattern::sectorized(ap_sectors.beamwidth_deg, ap_sectors.boresight_of(ap_sector)));
        tx.tx_power_dbm = tx_power_dbm;
        AntennaPattern dev =
            dev_sectors.beamwidth_deg >= 360.0
                ? AntennaPattern::isotropic()
                : AntennaPattern::sectorized(
                      dev_sectors.beamwidth_deg,
                      wrap_deg(dev_orientation_deg + dev_sectors.boresight_of(dev_sector)));
        RadioConfig rx = RadioConfig::mmwave(dev);
        rx.noise_floor_dbm = noise_floor_dbm;
        const LinkBudget lb = link_budget(prop, tx, ap_pos, rx, dev_pos, walls_crossed);
        return lb.blocked ? -1e300 : lb.snr_db;
    };
}

SimTime payload_airtime(std::uint64_t bytes, std::uint64_t rate_bps) {
    if (rate_bps == 0) throw SimError("transfer requires a positive rate");
    const auto bits = static_cast<unsigned __int128>(bytes) * 8u;
    const auto ns = (bits * 1'000'000'000u + rate_bps - 1) / rate_bps;
    return SimTime::ns(static_cast<std::int64_t>(ns));
}

SimTime transfer_completion(const CbapSchedule& sched, int sector, SimTime start, SimTime airtime) {
    SimTime t = start;
    SimTime left = airtime;
    if (left <= SimTime::ns(0)) return start;
    for (;;) {
        const TimeInterval w = sched.next_window(sector, t);
        const SimTime begin = std::max(w.start, t);
        const SimTime avail = w.end - begin;
        if (left <= avail) return begin + left;
        left -= avail;
        t = w.end;
    }
}

SimTime usable_airtime(const CbapSchedule& sched, int sector, SimTime from, SimTime until) {
    SimTime total = SimTime::ns(0);
    SimTime t = from;
    while (t < until) {
        const TimeInterval w = sched.next_window(sector, t);
        if (w.start >= until) break;
        const SimTime begin = std::max(w.start, t);
        const SimTime end = std::min(w.end, until);
        if (end > begin) total += end - begin;
        t = w.end;
    }
    return total;
}

} // namespace cogsim
