#include "jumpcp/analytic.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jumpcp {

double variation_limit_covariance(const SqrtStableKernel& kernel, const RhoFunction& rho, VariationPoint p,
                                  VariationPoint q) {
    for (const VariationPoint& v : {p, q}) {
        if (v.kappa < 0.0 || v.kappa > v.theta || v.theta > 1.0)
            throw std::invalid_argument("variation covariance: require 0 <= kappa <= theta <= 1");
    }
    const double tmin = std::min(p.t, q.t);
    auto mass_to = [&](double a) { return levy_distribution(kernel, rho, WeightPower::squared, a, tmin); };
    const double r1 = variation_ratio(p.kappa, p.theta);
    const double r2 = variation_ratio(q.kappa, q.theta);
    return mass_to(std::min(p.kappa, q.kappa)) - r1 * mass_to(std::min(q.kappa, p.theta)) -
           r2 * mass_to(std::min(p.kappa, q.theta)) + r1 * r2 * mass_to(std::min(p.theta, q.theta));
}

double gradual_amplitude_for_envelope(const RhoFunction& rho, double theta0, double exponent,
                                      std::span<const double> levels, double target, double cap) {
    if (!(target > 0.0)) throw std::invalid_argument("gradual calibration: target must be positive");
    if (theta0 < 0.0 || theta0 >= 1.0) throw std::invalid_argument("gradual calibration: theta0 outside [0,1)");
    if (!(exponent > 0.0)) throw std::invalid_argument("gradual calibration: exponent must be positive");
    if (levels.empty()) throw std::invalid_argument("gradual calibration: empty level grid");

    const SqrtStableMeasure unit{1.0, cap};
    double mass_max = 0.0;
    for (double t : levels) mass_max = std::max(mass_max, weighted_tail_mass(unit, rho, WeightPower::plain, t));
    if (!(mass_max > 0.0)) throw std::invalid_argument("gradual calibration: weight mass vanishes on the grid");

    // At unit amplitude, D(kappa, theta') = mass(t) * (phi(kappa) - (kappa/theta') phi(theta'))
    // with phi(x) = ((x - theta0)^+)^{w+1} / (w+1): scan the triangle densely.
    const double w1 = exponent + 1.0;
    auto phi = [&](double x) { return std::pow(std::max(0.0, x - theta0), w1) / w1; };
    constexpr int kGrid = 4000;
    double base = 0.0;
    for (int j = 1; j <= kGrid; ++j) {
        const double th = static_cast<double>(j) / kGrid;
        if (th <= theta0) continue;
        const double slope = phi(th) / th;
        for (int i = 0; i <= j; ++i) {
            const double k = static_cast<double>(i) / kGrid;
            base = std::max(base, std::fabs(phi(k) - k * slope));
        }
    }
    if (!(base > 0.0)) throw std::invalid_argument("gradual calibration: degenerate profile");
    return target / (mass_max * base);
}

}  // namespace jumpcp
