#include "cogsim/propagation.hpp"

#include <cmath>

#include "cogsim/errors.hpp"

namespace cogsim {

namespace {
constexpr double kSpeedOfLight = 299792458.0;
} // namespace

double cone_mainlobe_gain_dbi(double beamwidth_deg) {
    if (beamwidth_deg >= 360.0) return 0.0;
    const double half = beamwidth_deg * M_PI / 360.0;
    return 10.0 * std::log10(2.0 / (1.0 - std::cos(half)));
}

AntennaPattern AntennaPattern::sectorized(double beamwidth_deg, double boresight_deg) {
    AntennaPattern p;
    p.beamwidth_deg = beamwidth_deg;
    p.mainlobe_gain_dbi = cone_mainlobe_gain_dbi(beamwidth_deg);
    p.boresight_deg = boresight_deg;
    return p;
}

RadioConfig RadioConfig::wifi(AntennaPattern a) {
    return {Band::Ghz24, defaults::kTxPowerDbm, defaults::kNoiseFloor24Dbm, a};
}

RadioConfig RadioConfig::mmwave(AntennaPattern a) {
    return {Band::Ghz60, defaults::kTxPowerDbm, defaults::kNoiseFloor60Dbm, a};
}

PropagationParams::PropagationParams() {
    // 802.11g-like ladder up to the 54 Mb/s peak.
    rate_table_24 = {{6, 6'000'000},   {8, 9'000'000},   {10, 12'000'000}, {13, 18'000'000},
                     {16, 24'000'000}, {20, 36'000'000}, {24, 48'000'000}, {26, 54'000'000}};
    // Single-carrier-style ladder up to the 7 Gb/s peak.
    rate_table_60 = {{1, 385'000'000},   {3, 770'000'000},   {5, 1'155'000'000},
                     {8, 1'925'000'000}, {11, 2'310'000'000}, {15, 3'850'000'000},
                     {19, 5'775'000'000}, {24, 7'000'000'000}};
}

std::optional<double> path_loss_db(Band band, double distance_m, int walls_crossed,
                                   double wall_loss_db_24) {
    if (distance_m <= 0.0) throw SimError("path loss requires a positive distance");
    const double friis =
        20.0 * std::log10(4.0 * M_PI * distance_m * band_frequency_hz(band) / kSpeedOfLight);
    if (band == Band::Ghz60) {
        if (walls_crossed >= 1) return std::nullopt;
        return friis;
    }
    return friis + wall_loss_db_24 * walls_crossed;
}

double antenna_gain_dbi(const AntennaPattern& pattern, double angle_off_boresight_deg) {
    if (pattern.beamwidth_deg >= 360.0) return 0.0;
    return angle_off_boresight_deg <= pattern.beamwidth_deg / 2.0 ? pattern.mainlobe_gain_dbi
                                                                  : pattern.sidelobe_gain_dbi;
}

std::uint64_t achievable_rate_bps(const PropagationParams& params, Band band, double snr_db) {
    const auto& table = band == Band::Ghz24 ? params.rate_table_24 : params.rate_table_60;
    std::uint64_t rate = 0;
    for (const auto& [min_snr, step_rate] : table) {
        if (snr_db >= min_snr) rate = step_rate;
    }
    return rate;
}

LinkBudget link_budget(const PropagationParams& params, const RadioConfig& tx, Vec2 tx_pos,
                       const RadioConfig& rx, Vec2 rx_pos, int walls_crossed) {
    const auto loss =
        path_loss_db(tx.band, distance(tx_pos, rx_pos), walls_crossed, params.wall_loss_db_24);
    LinkBudget out;
    if (!loss) {
        out.blocked = true;
        out.rx_power_dbm = -999.0;
        out.snr_db = -999.0;
        return out;
    }
    const double fwd = bearing_deg(tx_pos, rx_pos);
    const double rev = bearing_deg(rx_pos, tx_pos);
    const double gain_tx = antenna_gain_dbi(tx.antenna, angle_between_deg(tx.antenna.boresight_deg, fwd));
    const double gain_rx = antenna_gain_dbi(rx.antenna, angle_between_deg(rx.antenna.boresight_deg, rev));
    out.rx_power_dbm = tx.tx_power_dbm + gain_tx + gain_rx - *loss;
    out.snr_db = out.rx_power_dbm - rx.noise_floor_dbm;
    out.rate_bps = achievable_rate_bps(params, tx.band, out.snr_db);
    return out;
}

LinkBudget link_budget(const PropagationParams& params, const FloorPlan& plan,
                       const RadioConfig& tx, Vec2 tx_pos, const RadioConfig& rx, Vec2 rx_pos) {
    return link_budget(params, tx, tx_pos, rx, rx_pos, plan.walls_crossed(tx_pos, rx_pos));
}

} // namespace cogsim
