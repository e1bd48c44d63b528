#ifndef COGSIM_ENGINE_HPP
#define COGSIM_ENGINE_HPP

#include <cstdint>
#include <ostream>

#include "cogsim/controller.hpp"
#include "cogsim/metrics.hpp"

namespace cogsim {

// Saturated prioritized-access experiment: n_req60 stations send 60 GHz
// channel requests and n_wifi24 stations send WiFi data, everyone always has
// a frame pending.
struct AccessMixParams {
    int n_req60 = 5;
    int n_wifi24 = 5;
    double duration_s = 10.0;
    MacConfig mac;
    bool poisson = false;            // finite load instead of saturation
    double arrival_per_s = 200.0;    // per station, Poisson mode
    std::ostream* trace = nullptr;
};
MetricsRecord run_access_mix(const AccessMixParams& params, std::uint64_t seed);

// Single-category saturation for checking against the two-equation
// fixed-point model: every station uses the same CW ladder and retry limit.
struct SingleCategoryParams {
    int stations = 5;
    int cw_min = defaults::kWifi24CwMin;
    int cw_max = defaults::kWifi24CwMax;
    int retry_limit = defaults::kRetryLimit;
    double duration_s = 20.0;
};
MetricsRecord run_single_category(const SingleCategoryParams& params, std::uint64_t seed);

// Runs the selected discovery procedures over the same placements and
// reports the per-mode means.
struct DiscoveryCmpParams {
    int devices = 10;
    double beamwidth_deg = defaults::kDeviceBeamwidthDeg;
    double estimate_sigma_deg = -1.0; // < 0: half a sector of the beamwidth
    DiscoveryMode mode = DiscoveryMode::Both;
    DiscoveryConfig base; // ap/device sector fields are overwritten from beamwidth
};
MetricsRecord run_discovery_cmp(const DiscoveryCmpParams& params, std::uint64_t seed);

// Sensor-on vs sensor-off link maintenance along a route.
struct RebeamCmpParams {
    double beamwidth_deg = 30.0;
    double noise_sigma_deg = defaults::kSensorSigmaDeg;
    SimTime sample_period = SimTime::us(defaults::kSensorPeriodUs);
    double speed_mps = defaults::kWalkSpeedMps;
    // rectangle loop corners and the AP placement
    double x0 = 1.0, y0 = 1.0, x1 = 7.0, y1 = 5.0;
    Vec2 ap_position{4.0, 3.0};
};
MetricsRecord run_rebeam_cmp(const RebeamCmpParams& params, std::uint64_t seed);

// Full CogCell run: association, sessions, handover, fall-back.
struct CogcellRunParams {
    ControllerConfig controller;
    MacConfig mac;
    std::vector<DeviceSpec> devices;
    double duration_s = defaults::kDurationS;
    std::ostream* trace = nullptr;
};
MetricsRecord run_cogcell(const CogcellRunParams& params, std::uint64_t seed);

} // namespace cogsim

#endif
