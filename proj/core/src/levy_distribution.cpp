#include "jumpcp/levy_distribution.hpp"

#include <stdexcept>

namespace jumpcp {

double levy_distribution(const SqrtStableKernel& kernel, const RhoFunction& rho, WeightPower wp, double theta,
                         double t, double abs_tol) {
    if (theta < 0.0 || theta > 1.0) throw std::invalid_argument("levy distribution: theta outside [0,1]");
    if (theta == 0.0 || !(t > 0.0)) return 0.0;

    // The density scales as sqrt(eta), so as long as no measure in play is cut by
    // its own upper endpoint below t, the y- and z-integrals factorize and the
    // sqrt(eta) integral is exact.
    if (t <= kernel.cap * kernel.profile.min_value()) {
        const SqrtStableMeasure unit{1.0, kernel.cap};
        const double base = weighted_tail_mass(unit, rho, wp, t, abs_tol);
        return base * kernel.profile.sqrt_integral(0.0, theta);
    }

    switch (kernel.profile.kind) {
        case EtaProfile::Kind::constant:
            return theta * weighted_tail_mass(kernel.measure_at(0.0), rho, wp, t, abs_tol);
        case EtaProfile::Kind::abrupt_step: {
            const double left = std::min(theta, kernel.profile.theta0);
            const double right = std::max(0.0, theta - kernel.profile.theta0);
            double out = 0.0;
            if (left > 0.0) out += left * weighted_tail_mass(kernel.measure_at(0.0), rho, wp, t, abs_tol);
            if (right > 0.0) out += right * weighted_tail_mass(kernel.measure_at(1.0), rho, wp, t, abs_tol);
            return out;
        }
        case EtaProfile::Kind::gradual_power: {
            const double theta0 = kernel.profile.theta0;
            double out = std::min(theta, theta0) * weighted_tail_mass(kernel.measure_at(0.0), rho, wp, t, abs_tol);
            if (theta > theta0) {
                auto inner = [&](double y) { return weighted_tail_mass(kernel.measure_at(y), rho, wp, t, abs_tol); };
                out += integrate(inner, theta0, theta, abs_tol);
            }
            return out;
        }
    }
    return 0.0;
}

}  // namespace jumpcp
