#include "cogsim/beamtrack.hpp"

#include <cmath>

namespace cogsim {

BeamtrackConfig BeamtrackConfig::with_beamwidth(double beamwidth_deg, Vec2 ap_position) {
    BeamtrackConfig cfg;
    cfg.ap_sectors = SectorConfig::from_beamwidth(beamwidth_deg);
    cfg.ap_position = ap_position;
    cfg.sweep_cost =
        SweepTimings::standard().duration_for_pairs(cfg.ap_sectors.sector_count); // device isotropic
    return cfg;
}

SensorSample sample_sensor(SimTime t, double true_heading_deg, double noise_sigma_deg,
                           RngStream& rng) {
    double az = true_heading_deg;
    if (noise_sigma_deg > 0.0) az += rng.gaussian(0.0, noise_sigma_deg);
    return {t, wrap_deg(az), noise_sigma_deg};
}

int predict_sector(const SensorSample& sample, Vec2 estimated_position, Vec2 ap_position,
                   double speed_mps, SimTime horizon, const SectorConfig& sectors) {
    const double step = speed_mps * horizon.seconds();
    const double rad = sample.azimuth_deg * M_PI / 180.0;
    const Vec2 next = estimated_position + Vec2{std::cos(rad), std::sin(rad)} * step;
    return sectors.sector_of(bearing_deg(ap_position, next));
}

BeamAlignment check_alignment(const SectorConfig& sectors, int current_sector, Vec2 ap_position,
                              Vec2 device_position) {
    const double bearing = bearing_deg(ap_position, device_position);
    BeamAlignment a;
    a.ap_sector = current_sector;
    a.angular_error_deg = angle_between_deg(sectors.boresight_of(current_sector), bearing);
    a.aligned = a.angular_error_deg <= sectors.beamwidth_deg / 2.0;
    return a;
}

RebeamLog maintain_link(const MobilityTrace& trace, BeamtrackMode mode,
                        const BeamtrackConfig& config, RngStream& sensor_rng) {
    RebeamLog log;
    log.mode = mode;
    if (trace.stationary()) return log;

    const SectorConfig& sectors = config.ap_sectors;
    Vec2 true_pos = trace.position_at(SimTime::ns(0));
    int current = sectors.sector_of(bearing_deg(config.ap_position, true_pos));
    Vec2 est_pos = true_pos; // anchored at initial beamforming

    const SimTime period = config.sample_period;
    for (SimTime t = period; t <= trace.span(); t += period) {
        const PoseSample pose = trace.pose_at(t);
        const BeamAlignment align = check_alignment(sectors, current, config.ap_position, pose.position);

        if (mode == BeamtrackMode::SensorOff) {
            if (!align.aligned) {
                log.events.push_back({t, RebeamCause::Misalignment, config.sweep_cost});
                current = sectors.sector_of(bearing_deg(config.ap_position, pose.position));
            }
            continue;
        }

        if (!align.aligned) {
            // the last predicted switch (or lack of one) left the link broken
            log.events.push_back({t, RebeamCause::PredictionMiss, config.sweep_cost});
            current = sectors.sector_of(bearing_deg(config.ap_position, pose.position));
            est_pos = pose.position;
        }
        // advance the dead-reckoned estimate to now, then predict one horizon
        // ahead and switch for the coming period
        const SensorSample s = sample_sensor(t, pose.heading_deg, config.noise_sigma_deg, sensor_rng);
        const double rad = s.azimuth_deg * M_PI / 180.0;
        est_pos = est_pos + Vec2{std::cos(rad), std::sin(rad)} * (config.assumed_speed_mps * period.seconds());
        const int predicted =
            predict_sector(s, est_pos, config.ap_position, config.assumed_speed_mps, period, sectors);
        if (predicted != current) current = predicted; // zero-cost beam switch
    }
    return log;
}

int sector_boundary_crossings(const MobilityTrace& trace, Vec2 ap_position,
                              const SectorConfig& sectors) {
    const auto& wps = trace.waypoints();
    int total = 0;
    const int n = sectors.sector_count;
    const double bw = sectors.beamwidth_deg;

    for (std::size_t i = 0; i + 1 < wps.size(); ++i) {
        const Vec2 a = wps[i].position;
        const Vec2 b = wps[i + 1].position;
        if (a == b) continue;
        const double theta_a = bearing_deg(ap_position, a);
        const double theta_b = bearing_deg(ap_position, b);
        // The bearing from a fixed point to a point moving along a straight
        // line sweeps monotonically; the sense is the sign of cross(a-ap, b-a).
        const Vec2 rel = a - ap_position;
        const Vec2 dir = b - a;
        const double cross = rel.x * dir.y - rel.y * dir.x;
        if (cross == 0.0) continue; // radial motion, bearing constant
        const bool ccw = cross > 0.0;
        const double arc = ccw ? wrap_deg(theta_b - theta_a) : wrap_deg(theta_a - theta_b);
        for (int k = 0; k < n; ++k) {
            const double boundary = wrap_deg((k + 0.5) * bw);
            const double off = ccw ? wrap_deg(boundary - theta_a) : wrap_deg(theta_a - boundary);
            if (off > 0.0 && off <= arc) ++total;
        }
    }
    return total;
}

} // namespace cogsim
