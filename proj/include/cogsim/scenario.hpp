#ifndef COGSIM_SCENARIO_HPP
#define COGSIM_SCENARIO_HPP

#include <string>
#include <vector>

#include "cogsim/engine.hpp"

namespace cogsim {

enum class ExperimentKind { Cogcell, AccessMix, Bianchi, Discovery, Rebeam };

struct RouteSpec {
    enum class Kind { Stationary, Line, LShape, Rectangle, Waypoints, RandomWaypoint } kind =
        Kind::Stationary;
    std::vector<Vec2> points; // meaning depends on kind
    int random_waypoints = 5;
    double speed_mps = defaults::kWalkSpeedMps;
};

struct DeviceConfig {
    int id = 1;
    Vec2 position{2.0, 2.0};
    RouteSpec route;
    std::uint64_t session_bytes = 0;
    double session_start_s = -1.0;
};

// Everything a run needs, as parsed from the flat config text. Key names
// carry their units; every default here matches defaults.hpp.
struct Scenario {
    std::string name = "scenario";

    // [run]
    double duration_s = defaults::kDurationS;
    std::uint64_t seed = defaults::kSeed;
    ExperimentKind experiment = ExperimentKind::Cogcell;

    // [floorplan]
    bool four_room_preset = true;
    double width_m = 16.0;
    double height_m = 12.0;
    std::vector<Room> custom_rooms;

    // [wifi_ap]
    Vec2 wifi_ap{8.0, 6.0};

    // [picocells]
    bool picocells_auto = true;
    std::vector<std::pair<int, Vec2>> picocells; // (room, position)

    // [mac] / [mac.req60] / [mac.wifi24]
    bool aifs_differentiation = false;
    int cw_min[2] = {defaults::kReq60CwMin, defaults::kWifi24CwMin};
    int cw_max[2] = {defaults::kReq60CwMax, defaults::kWifi24CwMax};
    int retry_limit[2] = {defaults::kRetryLimit, defaults::kRetryLimit};
    std::int64_t sifs_us = defaults::kSifs24Us;
    std::int64_t slot_us = defaults::kSlot24Us;

    // [mmwave]
    double mm_beamwidth_deg = defaults::kMmwaveBeamwidthDeg;
    std::int64_t cbap_duration_us = defaults::kCbapDurationUs;

    // [propagation]
    double wall_loss_db = defaults::kWallLossDb24;
    double tx_power_dbm = defaults::kTxPowerDbm;
    double noise_floor_24_dbm = defaults::kNoiseFloor24Dbm;
    double noise_floor_60_dbm = defaults::kNoiseFloor60Dbm;
    std::vector<std::pair<double, std::uint64_t>> rate_table_24; // empty = defaults
    std::vector<std::pair<double, std::uint64_t>> rate_table_60;

    // [discovery]
    int discovery_devices = 10;
    double discovery_beamwidth_deg = defaults::kDeviceBeamwidthDeg;
    int uncertainty_sectors = defaults::kEstimateUncertaintySectors;
    double estimate_sigma_deg = -1.0; // < 0: half a sector of the beamwidth
    DiscoveryMode discovery_mode = DiscoveryMode::Both;

    // [beamtrack]
    BeamtrackMode beam_mode = BeamtrackMode::SensorOn;
    std::int64_t sample_period_us = defaults::kSensorPeriodUs;
    double sensor_sigma_deg = defaults::kSensorSigmaDeg;
    double track_beamwidth_deg = 30.0; // rebeam experiment

    // [fallback]
    std::int64_t outage_threshold_us = defaults::kOutageThresholdUs;
    std::int64_t hysteresis_us = defaults::kHysteresisUs;

    // [traffic]
    bool saturated = true;
    int stations_req60 = 5;
    int stations_wifi24 = 5;
    double arrival_per_s = 200.0;

    // [blockage]
    double blockage_start_s = -1.0;

    // [device N] sections
    std::vector<DeviceConfig> devices;
};

// The 4-room layout of the default scenarios: one central WiFi AP and one
// ceiling picocell per room.
Scenario default_scenario();

// Parses and validates a scenario file. Errors name the offending key and
// line number.
Scenario load_scenario(const std::string& path);
Scenario parse_scenario(const std::string& text, const std::string& name);

// Dotted-path overrides for --set and sweep axes, e.g. "mac.req60.cw_min".
// Unknown keys or non-scalar targets are a ConfigError. Overrides skip
// validation so several can be applied together; run validate_scenario once
// they are all in.
void apply_override(Scenario& s, const std::string& key, const std::string& value);
void validate_scenario(const Scenario& s);
std::vector<std::string> overridable_keys();

// Build the runtime pieces out of the declarative config.
FloorPlan build_floorplan(const Scenario& s);
PropagationParams build_propagation(const Scenario& s);
MobilityTrace build_route(const DeviceConfig& d, double speed_fallback, std::uint64_t seed);
CogcellRunParams build_cogcell_params(const Scenario& s);

// Runs whichever experiment the scenario selects.
MetricsRecord run_scenario(const Scenario& s, std::uint64_t seed, std::ostream* trace = nullptr);

struct SweepSpec {
    std::string axis;
    std::vector<std::string> values; // verbatim, applied through apply_override
    int seeds_per_point = 1;
    std::uint64_t seed_stride = defaults::kSweepSeedStride;
};

// Runs values x seeds runs (worker threads allowed); rows come back in
// deterministic (point, replicate) order with seed = base + point*stride + rep.
std::vector<MetricsRecord> run_sweep(const Scenario& base, const SweepSpec& sweep);

} // namespace cogsim

#endif
