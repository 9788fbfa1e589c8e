#pragma once

#include "jumpcp/kernel.hpp"
#include "jumpcp/levy_distribution.hpp"
#include "jumpcp/rho.hpp"

#include <span>

namespace jumpcp {

// A point of the two-argument limit field: rescaled time theta, jump level t.
struct ProcessPoint {
    double theta = 0.0;
    double t = 0.0;
};

// A point of the three-argument time-variation field: 0 <= kappa <= theta <= 1.
struct VariationPoint {
    double kappa = 0.0;
    double theta = 0.0;
    double t = 0.0;
};

// kappa/theta with the 0/0 := 1 convention used throughout the variation field.
inline double variation_ratio(double kappa, double theta) {
    if (theta == 0.0 && kappa == 0.0) return 1.0;
    return kappa / theta;
}

// Population time-variation D(kappa, theta, t) = N(kappa,t) - (kappa/theta) N(theta,t)
// for the two-regime kernel; vanishes identically when nu1 == nu2 or theta <= theta0.
template <JumpMeasureLike M>
double time_variation_two_regime(const TwoRegimeKernel<M>& kernel, const RhoFunction& rho, double kappa,
                                 double theta, double t) {
    if (kappa > theta) throw std::invalid_argument("time variation: kappa must not exceed theta");
    const double nk = levy_distribution(kernel, rho, WeightPower::plain, kappa, t);
    const double nt = levy_distribution(kernel, rho, WeightPower::plain, theta, t);
    return nk - variation_ratio(kappa, theta) * nt;
}

// Envelope sup over levels and over 0 <= kappa <= theta' <= theta of |D| for the
// two-regime kernel: V0 * theta0 * (1 - theta0/theta)^+ with
// V0 = max over the level grid of |mass(nu1, t) - mass(nu2, t)|.
template <JumpMeasureLike M>
double time_variation_envelope_two_regime(const TwoRegimeKernel<M>& kernel, const RhoFunction& rho, double theta,
                                          std::span<const double> levels) {
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("time variation envelope: theta outside [0,1]");
    double v0 = 0.0;
    for (double t : levels) {
        const double d = std::fabs(weighted_tail_mass(kernel.nu1, rho, WeightPower::plain, t) -
                                   weighted_tail_mass(kernel.nu2, rho, WeightPower::plain, t));
        v0 = std::max(v0, d);
    }
    if (theta <= kernel.theta0) return 0.0;
    return v0 * kernel.theta0 * (1.0 - kernel.theta0 / theta);
}

// Limit covariance of the rescaled CUSUM field under a constant kernel:
// (theta1 ^ theta2 - theta1 theta2) * integral of rho^2 below t1 ^ t2.
template <JumpMeasureLike M>
double cusum_limit_covariance(const M& nu0, const RhoFunction& rho, ProcessPoint p, ProcessPoint q) {
    const double tmin = std::min(p.t, q.t);
    const double bridge = std::min(p.theta, q.theta) - p.theta * q.theta;
    return bridge * weighted_tail_mass(nu0, rho, WeightPower::squared, tmin);
}

// Limit covariance of the rescaled time-variation field under a general kernel:
// four squared-weight integrals with the kappa/theta ratios as coefficients.
// Degenerates to zero when kappa == theta on either argument.
double variation_limit_covariance(const SqrtStableKernel& kernel, const RhoFunction& rho, VariationPoint p,
                                  VariationPoint q);

// Amplitude A making the gradual profile's envelope sup over the level grid equal
// to `target` at theta = 1: the envelope is linear in A, so this is a ratio of the
// target to the unit-amplitude envelope. The (kappa, theta') sup is scanned on a
// dense grid (the envelope is smooth; that is ample for scenario calibration).
double gradual_amplitude_for_envelope(const RhoFunction& rho, double theta0, double exponent,
                                      std::span<const double> levels, double target, double cap = 1e6);

}  // namespace jumpcp
