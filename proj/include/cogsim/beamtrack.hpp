#ifndef COGSIM_BEAMTRACK_HPP
#define COGSIM_BEAMTRACK_HPP

#include <vector>

#include "cogsim/mac_mmwave.hpp"
#include "cogsim/mobility.hpp"
#include "cogsim/rng.hpp"

namespace cogsim {

enum class BeamtrackMode { SensorOff, SensorOn };

// One reading of the device's rotation-vector sensor: world-frame azimuth of
// the device orientation, with Gaussian noise.
struct SensorSample {
    SimTime t;
    double azimuth_deg = 0.0;
    double noise_sigma_deg = 0.0;
};

struct BeamAlignment {
    int ap_sector = 0;
    int device_sector = 0; // unused while the device side is isotropic
    double angular_error_deg = 0.0;
    bool aligned = true;
};

enum class RebeamCause { Misalignment, PredictionMiss };

struct RebeamEvent {
    SimTime t;
    RebeamCause cause;
    SimTime cost; // sweep airtime spent recovering
};

struct RebeamLog {
    BeamtrackMode mode = BeamtrackMode::SensorOff;
    std::vector<RebeamEvent> events;

    int count() const { return static_cast<int>(events.size()); }
    SimTime total_cost() const {
        SimTime sum;
        for (const auto& e : events) sum += e.cost;
        return sum;
    }
};

struct BeamtrackConfig {
    SectorConfig ap_sectors;             // the PCP/AP side; device side isotropic
    Vec2 ap_position;
    SimTime sample_period = SimTime::us(defaults::kSensorPeriodUs);
    double noise_sigma_deg = defaults::kSensorSigmaDeg;
    double assumed_speed_mps = defaults::kWalkSpeedMps; // known to the predictor
    SimTime sweep_cost;                  // one full re-beamforming

    static BeamtrackConfig with_beamwidth(double beamwidth_deg, Vec2 ap_position);
};

// true_heading + N(0, sigma), wrapped into [0, 360).
SensorSample sample_sensor(SimTime t, double true_heading_deg, double noise_sigma_deg,
                           RngStream& rng);

// Dead-reckons the device one prediction horizon ahead from an estimated
// position and the sensed heading, then returns the AP sector covering the
// predicted bearing.
int predict_sector(const SensorSample& sample, Vec2 estimated_position, Vec2 ap_position,
                   double speed_mps, SimTime horizon, const SectorConfig& sectors);

BeamAlignment check_alignment(const SectorConfig& sectors, int current_sector, Vec2 ap_position,
                              Vec2 device_position);

// Walks the trace at the sampling period and keeps the AP beam pointed at the
// device. sensor_off re-sweeps whenever the alignment check fails; sensor_on
// switches to the predicted sector for free and only sweeps on a prediction
// miss (still misaligned after the switch).
RebeamLog maintain_link(const MobilityTrace& trace, BeamtrackMode mode,
                        const BeamtrackConfig& config, RngStream& sensor_rng);

// Exact number of sector-boundary crossings of the AP->device bearing along a
// polyline route. The bearing sweeps monotonically within each segment, so the
// count follows from the endpoint bearings and the sweep direction.
int sector_boundary_crossings(const MobilityTrace& trace, Vec2 ap_position,
                              const SectorConfig& sectors);

} // namespace cogsim

#endif
