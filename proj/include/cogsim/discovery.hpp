#ifndef COGSIM_DISCOVERY_HPP
#define COGSIM_DISCOVERY_HPP

#include <cstdint>
#include <vector>

#include "cogsim/mac_control.hpp"
#include "cogsim/mac_mmwave.hpp"
#include "cogsim/propagation.hpp"

namespace cogsim {

enum class DiscoveryMode { Standalone, Assisted, Both };

// Coarse bearing inferred from 2.4 GHz frames: a noisy azimuth and how many
// sectors of slack the sweep window gets on each side.
struct DirectionEstimate {
    double azimuth_deg = 0.0;
    int uncertainty_sectors = defaults::kEstimateUncertaintySectors;
};

struct DiscoveryResult {
    bool discovered = false;
    SimTime elapsed;
    int frames_sent = 0;
    SimTime overhead_24ghz; // 2.4 GHz signaling contained in `elapsed`
};

// Timing of the baseline's per-device beam training: the exhaustive
// sector-level pass is followed by a second-level refinement inside the
// winning sector. The assisted procedure replaces this whole two-level search
// with its estimate-restricted single-level sweep.
SweepTimings two_level_training_timings();

struct DiscoveryConfig {
    SectorConfig ap_sectors = SectorConfig::from_beamwidth(defaults::kDeviceBeamwidthDeg);
    SectorConfig device_sectors = SectorConfig::from_beamwidth(defaults::kDeviceBeamwidthDeg);
    SweepTimings timings = SweepTimings::standard();                  // assisted sweeps, scan steps
    SweepTimings standalone_training = two_level_training_timings();  // post-rendezvous training
    double estimate_sigma_deg =
        defaults::kDeviceBeamwidthDeg * defaults::kEstimateSigmaSectorFraction;
    int uncertainty_sectors = defaults::kEstimateUncertaintySectors;
    double min_snr_db = 1.0; // lowest 60 GHz rate step

    // placement area for the experiment runners (one room, AP at its center)
    Vec2 ap_position{4.0, 3.0};
    double room_x0 = 0.0, room_y0 = 0.0, room_x1 = 8.0, room_y1 = 6.0;
    double min_device_distance_m = 0.5;

    // When true, the 2.4 GHz exchange is free of airtime and IFS cost; used to
    // isolate the sweep component of the assisted procedure.
    bool zero_overhead_24g = false;

    SimTime time_limit = SimTime::sec(30);
};

// The 60 GHz-only baseline: the PCP/AP beacons sector by sector in a fixed
// rotation while undiscovered devices listen in a random sector each step and
// respond when they hear one. Two simultaneous responders collide and retry.
std::vector<DiscoveryResult> discover_standalone(int devices, const DiscoveryConfig& cfg,
                                                 std::uint64_t seed);

// The WiFi-assisted procedure: each device announces itself with an
// association exchange on the contended 2.4 GHz channel, both ends derive
// sector estimates from those frames, and the sweep is restricted to the
// estimate windows (falling back to an exhaustive sweep when the estimate was
// wrong by more than its uncertainty).
std::vector<DiscoveryResult> discover_assisted(int devices, const DiscoveryConfig& cfg,
                                               std::uint64_t seed);

// Deterministic device placement shared by both procedures so a seed compares
// like with like.
std::vector<Vec2> place_devices(int devices, const DiscoveryConfig& cfg, std::uint64_t seed);

// Quantizes a noisy azimuth into an estimate window.
DirectionEstimate make_estimate(double true_bearing_deg, double sigma_deg, int uncertainty,
                                RngStream& rng);

} // namespace cogsim

#endif
