#pragma once

#include <cstdint>
#include <vector>

#include "jumpcp/eta_profile.hpp"
#include "jumpcp/jump_measure.hpp"
#include "jumpcp/rng.hpp"
#include "jumpcp/sample_path.hpp"

namespace jumpcp {

struct SimConfig {
    std::size_t n = 4000;
    double horizon = 100.0;
    EtaProfile profile = EtaProfile::constant(1.0);
    bool brownian_overlay = false;  // adds dt + dW on top of the jumps
    double cap = 1e6;               // jump size support is (0, cap]
    double mass_floor_tol = 1e-4;   // expected discarded small-jump sum per unit time
    std::size_t oversample = 15;    // sub-segments per observation step
    bool log_jumps = false;

    double delta_n() const { return horizon / static_cast<double>(n); }
    void validate() const;
};

// Smallest retained jump size: jumps below it contribute at most tol in expected
// absolute sum per unit time, which keeps the compound-Poisson truncation bias far
// below every tolerance used downstream.
double mass_floor(const SqrtStableMeasure& measure, double tol);

struct SegmentJumps {
    std::vector<double> times;  // offsets in (0, duration]
    std::vector<double> sizes;
};

// Jumps of the measure over a window of the given duration, truncated at the mass
// floor. Event count is Poisson, sizes are inverse-tail draws, times are uniform.
SegmentJumps simulate_levy_segment(const SqrtStableMeasure& measure, double duration,
                                   double mass_floor_tol, RngStream& rng);

// Path of the time-rescaled jump model. Each observation step Delta_n is split into
// `oversample` sub-segments and each sub-segment draws from the kernel frozen at its
// own rescaled midpoint-free right endpoint, so time variation within a step is
// resolved well below statistical noise. Piecewise-constant profiles with a break at
// theta0 use two independent jump streams split at floor(n * theta0), which keeps the
// pre-break path identical across break amplitudes.
SamplePath simulate_path(const SimConfig& config, std::uint64_t master_seed,
                         std::uint64_t replication = 0);

}  // namespace jumpcp
