#pragma once

#include "jumpcp/jump_measure.hpp"
#include "jumpcp/kernel.hpp"
#include "jumpcp/quadrature.hpp"
#include "jumpcp/rho.hpp"

#include <algorithm>
#include <array>
#include <functional>

namespace jumpcp {

enum class WeightPower { plain, squared };

// One-dimensional weighted mass below a level: integral of weight(z) over (0, min(t, upper)]
// against the measure's density. Zero for t <= 0. Adaptive quadrature split at the
// weight's shoulder breakpoints 1 and 2; the z^{-1/2-ish} integrand near zero is mild
// because the weight vanishes like z^power there.
template <JumpMeasureLike M>
double weighted_tail_mass(const M& measure, const RhoFunction& rho, WeightPower wp, double t,
                          double abs_tol = 1e-10) {
    const double hi = std::min(t, measure.upper());
    if (!(hi > 0.0)) return 0.0;
    std::function<double(double)> f;
    if (wp == WeightPower::plain) {
        f = [&](double z) { return rho(z) * measure.density(z); };
    } else {
        f = [&](double z) {
            const double r = rho(z);
            return r * r * measure.density(z);
        };
    }
    const std::array<double, 2> kinks{1.0, 2.0};
    return integrate(f, 0.0, hi, abs_tol, kinks);
}

// Sequential weighted jump distribution function N(theta, t): the y-integral over
// [0, theta] of the weighted mass below t of the kernel's measure at y. For the
// sqrt-stable family the integrand factorizes as sqrt(eta(y)) * (mass at eta = 1)
// whenever t <= cap * min eta, and the sqrt(eta) integral is exact for every
// profile shape; otherwise fall back to adaptive quadrature in y.
double levy_distribution(const SqrtStableKernel& kernel, const RhoFunction& rho, WeightPower wp, double theta,
                         double t, double abs_tol = 1e-10);

// Same for the generic two-regime kernel: exact two-segment sum.
template <JumpMeasureLike M>
double levy_distribution(const TwoRegimeKernel<M>& kernel, const RhoFunction& rho, WeightPower wp, double theta,
                         double t, double abs_tol = 1e-10) {
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("levy distribution: theta outside [0,1]");
    const double left = std::min(theta, kernel.theta0);
    const double right = std::max(0.0, theta - kernel.theta0);
    double out = 0.0;
    if (left > 0.0) out += left * weighted_tail_mass(kernel.nu1, rho, wp, t, abs_tol);
    if (right > 0.0) out += right * weighted_tail_mass(kernel.nu2, rho, wp, t, abs_tol);
    return out;
}

}  // namespace jumpcp
