#ifndef COGSIM_MAC_MMWAVE_HPP
#define COGSIM_MAC_MMWAVE_HPP

#include <cstdint>
#include <functional>
#include <optional>

#include "cogsim/propagation.hpp"
#include "cogsim/sim_time.hpp"

namespace cogsim {

// Sectorized 60 GHz antenna layout. Sector i is centered on azimuth
// i * beamwidth, i.e. it covers [i*bw - bw/2, i*bw + bw/2).
struct SectorConfig {
    int sector_count = 4;
    double beamwidth_deg = 90.0;
    SimTime cbap_duration = SimTime::us(defaults::kCbapDurationUs);

    static SectorConfig from_beamwidth(double beamwidth_deg,
                                       SimTime cbap = SimTime::us(defaults::kCbapDurationUs));

    int sector_of(double bearing_deg) const;
    double boresight_of(int sector) const { return sector * beamwidth_deg; }
};

struct TimeInterval {
    SimTime start;
    SimTime end;
    SimTime duration() const { return end - start; }
};

// Round-robin service rotation: sector i owns slot i of every cycle.
struct CbapSchedule {
    SimTime cycle_start;
    int sector_count = 4;
    SimTime cbap_duration = SimTime::us(defaults::kCbapDurationUs);

    SimTime cycle_length() const { return cbap_duration * sector_count; }

    // Earliest [start, end) of the sector's window not already over at `now`
    // (a window in progress counts).
    TimeInterval next_window(int sector, SimTime now) const;
};

struct BeamPair {
    int tx_sector = 0;
    int rx_sector = 0;
    double quality_db = 0.0; // link SNR with both selected lobes applied
};

// Contiguous run of sector indices, modulo the sector count.
struct SectorWindow {
    int center = 0;
    int halfwidth = 0;
};

struct SweepTimings {
    SimTime frame_airtime;  // one training frame
    SimTime inter_frame;    // spacing between training frames
    SimTime rifs;           // gap before the feedback phase
    SimTime feedback_airtime;
    SimTime refine_extra;   // fixed second-stage refinement cost (default 0)

    static SweepTimings standard();

    SimTime duration_for_pairs(int pairs) const {
        return SimTime::ns(pairs * (frame_airtime + inter_frame).nanoseconds()) + rifs +
               feedback_airtime + refine_extra;
    }
};

struct SweepResult {
    bool found = false;
    BeamPair best;
    SimTime duration;
    int pairs_evaluated = 0;
    int frames_sent = 0; // training frames + one feedback
};

// Evaluates transmit/receive sector pairs (all of them, or only those inside
// the given windows) and picks the best-quality pair. One training frame per
// pair plus a single feedback frame. Fails when nothing clears min_snr_db.
SweepResult sector_sweep(int tx_sectors, int rx_sectors,
                         std::optional<SectorWindow> tx_window,
                         std::optional<SectorWindow> rx_window,
                         const std::function<double(int, int)>& pair_snr_db, double min_snr_db,
                         const SweepTimings& timings = SweepTimings::standard());

// SNR of each (ap sector, device sector) pair for a concrete placement.
// Device sector boresights are offset by its orientation.
std::function<double(int, int)> make_pair_snr(const PropagationParams& prop,
                                              const SectorConfig& ap_sectors, Vec2 ap_pos,
                                              double tx_power_dbm, double noise_floor_dbm,
                                              const SectorConfig& dev_sectors, Vec2 dev_pos,
                                              double dev_orientation_deg, int walls_crossed);

// Airtime needed for a payload at a rate, rounded up to whole ns.
SimTime payload_airtime(std::uint64_t bytes, std::uint64_t rate_bps);

// Completion time of a transfer that may only progress inside the sector's
// CBAP windows: consumes `airtime` starting at `start`, suspending across
// foreign sectors' windows.
SimTime transfer_completion(const CbapSchedule& sched, int sector, SimTime start, SimTime airtime);

// Airtime actually available to the sector between two instants.
SimTime usable_airtime(const CbapSchedule& sched, int sector, SimTime from, SimTime until);

} // namespace cogsim

#endif
