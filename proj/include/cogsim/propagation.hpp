#ifndef COGSIM_PROPAGATION_HPP
#define COGSIM_PROPAGATION_HPP

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "cogsim/defaults.hpp"
#include "cogsim/floorplan.hpp"
#include "cogsim/geometry.hpp"

namespace cogsim {

enum class Band { Ghz24, Ghz60 };

inline double band_frequency_hz(Band b) { return b == Band::Ghz24 ? 2.4e9 : 60e9; }

// Flat-top pattern: mainlobe gain inside the beamwidth cone, a fixed sidelobe
// floor outside. beamwidth 360 means isotropic (0 dBi everywhere).
struct AntennaPattern {
    double beamwidth_deg = 360.0;
    double mainlobe_gain_dbi = 0.0;
    double sidelobe_gain_dbi = defaults::kSidelobeGainDbi;
    double boresight_deg = 0.0;

    static AntennaPattern isotropic() { return {}; }
    static AntennaPattern sectorized(double beamwidth_deg, double boresight_deg = 0.0);
};

// Solid-angle cone gain 10*log10(2 / (1 - cos(bw/2))).
double cone_mainlobe_gain_dbi(double beamwidth_deg);

struct RadioConfig {
    Band band = Band::Ghz24;
    double tx_power_dbm = defaults::kTxPowerDbm;
    double noise_floor_dbm = defaults::kNoiseFloor24Dbm;
    AntennaPattern antenna;

    static RadioConfig wifi(AntennaPattern a = AntennaPattern::isotropic());
    static RadioConfig mmwave(AntennaPattern a);
};

struct LinkBudget {
    double rx_power_dbm = 0.0;
    double snr_db = 0.0;
    bool blocked = false;
    std::uint64_t rate_bps = 0;
};

struct PropagationParams {
    double wall_loss_db_24 = defaults::kWallLossDb24;
    // SNR staircase per band: (min snr dB, rate b/s), ascending. A link below
    // the first step carries nothing; steps are never interpolated.
    std::vector<std::pair<double, std::uint64_t>> rate_table_24;
    std::vector<std::pair<double, std::uint64_t>> rate_table_60;

    PropagationParams();
};

// Friis free-space loss plus per-wall handling. 2.4 GHz pays wall_loss_db per
// wall; 60 GHz does not penetrate walls at all, so any wall means no link
// (nullopt). distance must be positive.
std::optional<double> path_loss_db(Band band, double distance_m, int walls_crossed,
                                   double wall_loss_db_24 = defaults::kWallLossDb24);

// Flat-top lookup; angle is off-boresight in [0, 180].
double antenna_gain_dbi(const AntennaPattern& pattern, double angle_off_boresight_deg);

std::uint64_t achievable_rate_bps(const PropagationParams& params, Band band, double snr_db);

// Full link budget between two placed radios, including both antenna gains
// evaluated against the actual geometry.
LinkBudget link_budget(const PropagationParams& params, const RadioConfig& tx, Vec2 tx_pos,
                       const RadioConfig& rx, Vec2 rx_pos, int walls_crossed);

// Same, with the wall count taken from the floor plan.
LinkBudget link_budget(const PropagationParams& params, const FloorPlan& plan,
                       const RadioConfig& tx, Vec2 tx_pos, const RadioConfig& rx, Vec2 rx_pos);

} // namespace cogsim

#endif
