#ifndef COGSIM_CONTROLLER_HPP
#define COGSIM_CONTROLLER_HPP

#include <optional>
#include <vector>

#include "cogsim/beamtrack.hpp"
#include "cogsim/discovery.hpp"
#include "cogsim/floorplan.hpp"
#include "cogsim/mac_control.hpp"
#include "cogsim/mac_mmwave.hpp"
#include "cogsim/metrics.hpp"
#include "cogsim/mobility.hpp"
#include "cogsim/propagation.hpp"
#include "cogsim/sim_core.hpp"

namespace cogsim {

struct FallbackPolicy {
    SimTime outage_threshold = SimTime::us(defaults::kOutageThresholdUs);
    SimTime hysteresis = SimTime::us(defaults::kHysteresisUs);
};

// Debounced routing decision: 60 GHz must be out for outage_threshold before
// traffic moves to 2.4 GHz, and back for hysteresis before it moves home.
enum class DataRoute { Use60g, Use24g };

class FallbackTracker {
public:
    explicit FallbackTracker(FallbackPolicy policy) : policy_(policy) {}

    DataRoute route() const { return route_; }
    int decision_changes() const { return changes_; }

    // Reports the 60 GHz availability seen at `now`; returns the route to use.
    DataRoute update(bool link_available, SimTime now);

    // Unconditional switch, e.g. when a session starts in a room that has no
    // picocell at all.
    void force(DataRoute route, SimTime now);

    // Time at which the pending decision will flip if the condition holds, if
    // any; callers schedule a re-check there.
    std::optional<SimTime> pending_flip() const;

private:
    FallbackPolicy policy_;
    DataRoute route_ = DataRoute::Use60g;
    std::optional<SimTime> outage_since_;
    std::optional<SimTime> restored_since_;
    int changes_ = 0;
};

enum class DevicePhase { Idle, WifiAssociated, Requesting60g, Beamformed, Transferring, Fallback };

struct DeviceSpec {
    NodeId id = 0;
    MobilityTrace trace;
    std::uint64_t session_bytes = 0;
    SimTime session_start{-1}; // < 0 means the device never requests a session
};

struct ControllerConfig {
    FloorPlan plan = FloorPlan::four_room();
    Vec2 wifi_ap_position{8.0, 6.0};
    // indexed by room; nullopt for rooms without a PCP/AP
    std::vector<std::optional<Vec2>> picocell_positions;
    SectorConfig sectors;                 // per picocell
    PropagationParams prop;
    double estimate_sigma_deg = defaults::kMmwaveBeamwidthDeg * defaults::kEstimateSigmaSectorFraction;
    int estimate_uncertainty = defaults::kEstimateUncertaintySectors;
    BeamtrackMode beam_mode = BeamtrackMode::SensorOn;
    SimTime sensor_period = SimTime::us(defaults::kSensorPeriodUs);
    double sensor_sigma_deg = defaults::kSensorSigmaDeg;
    FallbackPolicy fallback;
    SimTime blockage_start{-1}; // < 0 means never; afterwards all 60 GHz links block
    std::uint64_t seed = defaults::kSeed;
};

// The dual-band orchestration: association and channel requests on 2.4 GHz,
// payload on the room picocell's 60 GHz link, sensor-maintained beams,
// room-handover on wall crossings, and debounced fall-back to 2.4 GHz.
class CogcellController {
public:
    CogcellController(Simulator& sim, ControlChannel& channel, MetricsCollector& metrics,
                      ControllerConfig config);

    // Registers a device and schedules its association and session.
    void add_device(DeviceSpec spec);

    // Queue audits and pending-byte accounting, call once after run_until.
    void finalize(SimTime end);

    DevicePhase phase(NodeId device) const;
    int decision_changes(NodeId device) const;
    int association_count(NodeId device) const;

private:
    struct Device {
        DeviceSpec spec;
        MacStation* station = nullptr;
        DevicePhase phase = DevicePhase::Idle;
        int room = -1;
        std::optional<int> picocell;
        std::uint64_t remaining = 0;
        SimTime request_t0;
        bool session_active = false;
        bool pending_session = false; // session start arrived before association
        int associations = 0;

        // beam state
        bool beam_ok = false;
        int ap_sector = 0;
        Vec2 est_pos;
        std::uint64_t window_epoch = 0; // invalidates stale window events

        FallbackTracker fallback{FallbackPolicy{}};
        bool pump_active = false; // a 2.4 GHz fallback frame is in flight
        CbapSchedule sched;
        RngStream sensor_rng;
        RngStream estimate_rng;
    };

    Device& dev(NodeId id);
    const Device& dev(NodeId id) const;
    Vec2 position(const Device& d) const { return d.spec.trace.position_at(sim_.now()); }

    void associate(Device& d);
    void start_session(Device& d);
    void handle_request_granted(Device& d);
    // AP directs the room picocell over 2.4 GHz and waits for its confirm.
    void coordinate_picocell(Device& d);
    void begin_beamforming(Device& d);
    void beamforming_done(Device& d, const SweepResult& sweep);
    void enter_fallback_session(Device& d);

    void schedule_window_pass(Device& d);
    void window_pass(Device& d, std::uint64_t epoch);
    void complete_session(Device& d);

    void schedule_sensor_tick(Device& d);
    void sensor_tick(Device& d);
    void trigger_rebeam(Device& d, RebeamCause cause);

    void schedule_handovers(Device& d);
    void handover(Device& d, int new_room);
    void start_rediscovery(Device& d);

    void evaluate_route(Device& d);
    void pump_fallback_frame(Device& d);

    bool link_available(const Device& d) const;
    LinkBudget current_link(const Device& d) const;
    bool blockage_active() const {
        return config_.blockage_start >= SimTime::ns(0) && sim_.now() >= config_.blockage_start;
    }

    Simulator& sim_;
    ControlChannel& channel_;
    MetricsCollector& metrics_;
    ControllerConfig config_;
    MacStation* ap_station_ = nullptr;
    std::vector<MacStation*> pico_stations_; // tri-band PCP/APs on the 2.4 channel
    std::vector<Device> devices_;
    std::vector<SimTime> picocell_free_;    // sweep serialization per picocell
    std::vector<SimTime> window_claimed_;   // one transfer per CBAP window per picocell
};

} // namespace cogsim

#endif
