#include "jumpcp/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jumpcp/kernel.hpp"

namespace jumpcp {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

struct SegmentSampler {
    double z_min = 0.0;
    double rate = 0.0;  // Poisson intensity of retained jumps per unit time
};

SegmentSampler make_sampler(const SqrtStableMeasure& measure, double tol) {
    SegmentSampler s;
    s.z_min = mass_floor(measure, tol);
    s.rate = s.z_min < measure.upper() ? measure.tail(s.z_min) : 0.0;
    return s;
}

// Sizes come from inverting the tail at a uniform point of (0, rate], so the
// smallest admissible size is exactly z_min and the upper endpoint is excluded.
// The time draw always happens, so paths do not depend on whether jumps are logged.
template <class PerJump>
void sample_jumps(const SqrtStableMeasure& measure, const SegmentSampler& sampler, double duration,
                  RngStream& rng, PerJump&& per_jump) {
    const long long count = rng.poisson(duration * sampler.rate);
    for (long long k = 0; k < count; ++k) {
        const double size = measure.inverse_tail(rng.uniform() * sampler.rate);
        const double time = rng.uniform() * duration;
        per_jump(time, size);
    }
}

}  // namespace

void SimConfig::validate() const {
    if (n == 0) throw std::invalid_argument("simulation: n must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("simulation: horizon must be positive");
    if (!(cap > 0.0)) throw std::invalid_argument("simulation: cap must be positive");
    if (!(mass_floor_tol > 0.0))
        throw std::invalid_argument("simulation: mass floor tolerance must be positive");
    if (oversample == 0) throw std::invalid_argument("simulation: oversample must be positive");
    profile.validate();
}

double mass_floor(const SqrtStableMeasure& measure, double tol) {
    measure.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("mass floor: tolerance must be positive");
    // Expected sum of jumps below z is sqrt(eta * z / pi); solve for z at tol.
    return tol * tol * kPi / measure.eta;
}

SegmentJumps simulate_levy_segment(const SqrtStableMeasure& measure, double duration,
                                   double mass_floor_tol, RngStream& rng) {
    measure.validate();
    if (!(duration > 0.0))
        throw std::invalid_argument("segment simulation: duration must be positive");
    const SegmentSampler sampler = make_sampler(measure, mass_floor_tol);
    SegmentJumps out;
    sample_jumps(measure, sampler, duration, rng, [&](double time, double size) {
        out.times.push_back(time);
        out.sizes.push_back(size);
    });
    return out;
}

SamplePath simulate_path(const SimConfig& config, std::uint64_t master_seed,
                         std::uint64_t replication) {
    config.validate();
    const SqrtStableKernel kernel{config.profile, config.cap};

    const std::size_t n = config.n;
    const std::size_t over = config.oversample;
    const double dn = config.delta_n();
    const double sub_dt = dn / static_cast<double>(over);
    const double fine = static_cast<double>(n * over);

    // A step change gets an independent stream per regime so the pre-change part
    // of the path is identical across post-change levels with the same seed.
    const bool split_streams = config.profile.kind == EtaProfile::Kind::abrupt_step;
    const std::size_t split_step =
        split_streams
            ? static_cast<std::size_t>(std::floor(static_cast<double>(n) * config.profile.theta0))
            : n;

    RngStream jumps_pre = RngStream::derive(master_seed, replication, StreamRole::path, 0);
    RngStream jumps_post = RngStream::derive(master_seed, replication, StreamRole::path, 1);
    RngStream overlay = RngStream::derive(master_seed, replication, StreamRole::overlay, 0);

    SamplePath path;
    path.n = n;
    path.delta_n = dn;
    path.values.assign(n + 1, 0.0);

    const double sqrt_dn = std::sqrt(dn);
    double level = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
        RngStream& jump_rng = (split_streams && i > split_step) ? jumps_post : jumps_pre;
        double increment = 0.0;
        for (std::size_t j = 1; j <= over; ++j) {
            const std::size_t m = (i - 1) * over + j;
            const double y = static_cast<double>(m) / fine;
            const SqrtStableMeasure measure = kernel.measure_at(y);
            const SegmentSampler sampler = make_sampler(measure, config.mass_floor_tol);
            const double seg_start = static_cast<double>(m - 1) * sub_dt;
            sample_jumps(measure, sampler, sub_dt, jump_rng, [&](double t_loc, double size) {
                increment += size;
                if (config.log_jumps) path.jumps.push_back({seg_start + t_loc, size, y});
            });
        }
        if (config.brownian_overlay) increment += dn + sqrt_dn * overlay.normal();
        level += increment;
        path.values[i] = level;
    }
    // Jump times are drawn unordered inside each sub-segment; the log is sorted
    // so consumers can rely on chronological order. Sorting does not touch the
    // increments or the draw sequence.
    std::stable_sort(path.jumps.begin(), path.jumps.end(),
                     [](const JumpEvent& a, const JumpEvent& b) { return a.time < b.time; });
    return path;
}

}  // namespace jumpcp
