// Independent oracles used by the unit and acceptance suites. These stay
// separate from the library on purpose: they validate the simulation paths
// through different math.
#ifndef COGSIM_TESTS_ORACLES_HPP
#define COGSIM_TESTS_ORACLES_HPP

#include <cmath>
#include <cstdint>

#include "cogsim/beamtrack.hpp"
#include "cogsim/rng.hpp"

namespace oracles {

// Per-stage expected attempts / backoff slots of the two-equation saturation
// model, with the CW ladder min(cw_min * 2^i, cw_max) and draws in [0, W-1].
inline double saturation_tau_at(double p, int cw_min, int cw_max, int retry_limit) {
    double attempts = 0, slots = 0, stage_prob = 1;
    for (int i = 0; i <= retry_limit; ++i) {
        long cw = cw_min;
        for (int k = 0; k < i && cw < cw_max; ++k) cw *= 2;
        if (cw > cw_max) cw = cw_max;
        attempts += stage_prob;
        slots += stage_prob * static_cast<double>(cw - 1) / 2.0;
        stage_prob *= p;
    }
    return attempts / (attempts + slots);
}

// Fixed point of tau = f(p), p = 1 - (1 - tau)^(n-1), solved by bisection on
// the conditional collision probability.
inline double saturation_tau(int n, int cw_min, int cw_max, int retry_limit) {
    double lo = 0.0, hi = 1.0;
    for (int it = 0; it < 200; ++it) {
        const double p = (lo + hi) / 2.0;
        const double tau = saturation_tau_at(p, cw_min, cw_max, retry_limit);
        const double implied = 1.0 - std::pow(1.0 - tau, n - 1);
        if (p < implied)
            lo = p;
        else
            hi = p;
    }
    return saturation_tau_at((lo + hi) / 2.0, cw_min, cw_max, retry_limit);
}

// Brute-force rendezvous: the AP beacons sector by sector while one device
// listens in a fresh random sector each step; returns the mean step count
// until alignment over `trials` independent device placements.
inline double rendezvous_mean_steps(int ap_sectors, int dev_sectors, int trials,
                                    std::uint64_t seed) {
    cogsim::RngStream rng(seed, 12345);
    std::int64_t total = 0;
    for (int t = 0; t < trials; ++t) {
        const int true_ap = static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(ap_sectors)));
        const int true_dev =
            static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(dev_sectors)));
        std::int64_t steps = 0;
        for (;;) {
            const int beacon = static_cast<int>(steps % ap_sectors);
            ++steps;
            const int listen =
                static_cast<int>(rng.uniform_below(static_cast<std::uint32_t>(dev_sectors)));
            if (beacon == true_ap && listen == true_dev) break;
        }
        total += steps;
    }
    return static_cast<double>(total) / trials;
}

} // namespace oracles

#endif
