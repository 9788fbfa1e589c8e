#pragma once

#include <stdexcept>
#include <cmath>

namespace jumpcp {

// Polynomial-capped weight for jump increments. Quadratic-type growth near the
// origin, a smooth shoulder on [1,2], constant beyond 2:
//   scale * 2|z|^power          for |z| <= 1
//   scale * (4p|z| - p z^2 + 2 - 3p)  for 1 <= |z| <= 2   (p = power)
//   scale * (2 + power)         for |z| >= 2
// Continuously differentiable in z; even; zero at zero; nondecreasing in |z|.
struct RhoFunction {
    double scale = 1.0;   // multiplies the whole weight; must be > 0
    double power = 2.0;   // small-jump exponent; must be > 1

    double operator()(double z) const {
        const double a = std::fabs(z);
        if (a <= 1.0) return scale * 2.0 * std::pow(a, power);
        if (a <= 2.0) return scale * (4.0 * power * a - power * a * a + 2.0 - 3.0 * power);
        return scale * (2.0 + power);
    }

    // d/dz, odd in z. Bounded by 4*power*scale*|z|^{power-1}.
    double derivative(double z) const {
        const double a = std::fabs(z);
        const double sign = z < 0.0 ? -1.0 : 1.0;
        if (a <= 1.0) return sign * scale * 2.0 * power * std::pow(a, power - 1.0);
        if (a <= 2.0) return sign * scale * (4.0 * power - 2.0 * power * a);
        return 0.0;
    }

    double plateau() const { return scale * (2.0 + power); }

    void validate() const {
        if (!(scale > 0.0)) throw std::invalid_argument("rho: scale must be positive");
        if (!(power > 1.0)) throw std::invalid_argument("rho: power must exceed 1");
    }
};

// Squared weight, used wherever the limit variance integrates rho^2.
struct RhoSquared {
    RhoFunction rho;
    double operator()(double z) const {
        const double v = rho(z);
        return v * v;
    }
};

}  // namespace jumpcp
