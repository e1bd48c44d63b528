#ifndef COGSIM_DEFAULTS_HPP
#define COGSIM_DEFAULTS_HPP

#include <cstdint>

// Single source of truth for every tunable the scenario format can override.
// Units are part of each name. README's "Defaults" section points here.
namespace cogsim::defaults {

// --- control-plane MAC (2.4 GHz), prioritized access categories ---
inline constexpr int kReq60CwMin = 8;
inline constexpr int kReq60CwMax = 16;
inline constexpr int kWifi24CwMin = 32;
inline constexpr int kWifi24CwMax = 256;
inline constexpr int kRetryLimit = 5;
inline constexpr std::int64_t kSifs24Us = 10;
inline constexpr std::int64_t kSlot24Us = 20;     // DIFS = SIFS + 2*slot = 50 us
inline constexpr std::uint64_t kCtrlRateBps = 1'000'000;
inline constexpr std::uint64_t kWifiDataRateBps = 54'000'000;

// --- frame sizes (bytes) ---
inline constexpr int kRtsBytes = 20;
inline constexpr int kCtsBytes = 14;
inline constexpr int kAckBytes = 14;
inline constexpr int kPhyHeaderBytes = 16;
inline constexpr int kMacHeaderBytes = 24;
inline constexpr int kWifiDataBytes = 1024;
inline constexpr int kAssocReqBytes = 1024;
inline constexpr int kAssocRespBytes = 16;
inline constexpr int kSweepFrameBytes = 1024;
inline constexpr int kChanReq60Bytes = 16;
inline constexpr int kCoordFrameBytes = 16;

// --- 60 GHz MAC ---
inline constexpr std::int64_t kSifs60Us = 3;
inline constexpr std::int64_t kRifsUs = 300;
inline constexpr std::int64_t kCbapDurationUs = 10'000; // per sector
inline constexpr double kMmwaveBeamwidthDeg = 90.0;
inline constexpr std::uint64_t kSweepCtrlRateBps = 27'500'000;
inline constexpr std::int64_t kBeamRefineExtraUs = 0; // estimate-informed sweeps skip level 2
inline constexpr int kRefinePairs = 9; // 3x3 sub-beam grid, level 2 of exhaustive training

// --- propagation / radios ---
inline constexpr double kTxPowerDbm = 10.0;
inline constexpr double kNoiseFloor24Dbm = -85.0; // 20 MHz channel
inline constexpr double kNoiseFloor60Dbm = -70.0; // 2.16 GHz channel
inline constexpr double kWallLossDb24 = 5.0;      // per wall; 60 GHz blocks outright
inline constexpr double kSidelobeGainDbi = -10.0;

// --- discovery ---
inline constexpr double kDeviceBeamwidthDeg = 60.0; // discovery experiments
inline constexpr int kEstimateUncertaintySectors = 1;
// direction-estimate noise defaults to half a sector of the 60 GHz pattern
inline constexpr double kEstimateSigmaSectorFraction = 0.5;

// --- beam tracking ---
inline constexpr std::int64_t kSensorPeriodUs = 100'000;
inline constexpr double kSensorSigmaDeg = 2.0;
inline constexpr double kWalkSpeedMps = 1.0;

// --- controller fall-back ---
inline constexpr std::int64_t kOutageThresholdUs = 20'000;
inline constexpr std::int64_t kHysteresisUs = 100'000;

// --- scenario ---
inline constexpr double kDurationS = 10.0;
inline constexpr std::uint64_t kSeed = 1;
inline constexpr std::uint64_t kSweepSeedStride = 1000;

} // namespace cogsim::defaults

#endif
