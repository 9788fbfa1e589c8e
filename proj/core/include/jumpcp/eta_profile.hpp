#pragma once

#include <stdexcept>
#include <cmath>
#include <algorithm>

namespace jumpcp {

// Intensity profile eta(y) on rescaled time y in [0,1]. Three shapes:
//   constant:      eta(y) = level
//   abrupt_step:   eta(y) = 1 for y <= theta0, psi for y > theta0
//   gradual_power: eta(y) = 1 for y <= theta0, (amplitude*(y-theta0)^exponent + 1)^2 after
// The gradual shape is continuous at theta0 by construction and its square root
// integrates in closed form, which the distribution-function code exploits.
struct EtaProfile {
    enum class Kind { constant, abrupt_step, gradual_power };

    Kind kind = Kind::constant;
    double level = 1.0;      // constant only
    double theta0 = 0.0;     // change location (step / gradual)
    double psi = 1.0;        // post-change level (step)
    double amplitude = 0.0;  // A (gradual)
    double exponent = 1.0;   // w (gradual)

    static EtaProfile constant(double level) {
        EtaProfile p;
        p.kind = Kind::constant;
        p.level = level;
        p.validate();
        return p;
    }
    static EtaProfile abrupt(double theta0, double psi) {
        EtaProfile p;
        p.kind = Kind::abrupt_step;
        p.theta0 = theta0;
        p.psi = psi;
        p.validate();
        return p;
    }
    static EtaProfile gradual(double theta0, double amplitude, double exponent) {
        EtaProfile p;
        p.kind = Kind::gradual_power;
        p.theta0 = theta0;
        p.amplitude = amplitude;
        p.exponent = exponent;
        p.validate();
        return p;
    }

    double value(double y) const {
        switch (kind) {
            case Kind::constant: return level;
            case Kind::abrupt_step: return y <= theta0 ? 1.0 : psi;
            case Kind::gradual_power: {
                if (y <= theta0) return 1.0;
                const double s = amplitude * std::pow(y - theta0, exponent) + 1.0;
                return s * s;
            }
        }
        return level;
    }

    double sqrt_value(double y) const {
        switch (kind) {
            case Kind::constant: return std::sqrt(level);
            case Kind::abrupt_step: return y <= theta0 ? 1.0 : std::sqrt(psi);
            case Kind::gradual_power:
                return y <= theta0 ? 1.0 : amplitude * std::pow(y - theta0, exponent) + 1.0;
        }
        return std::sqrt(level);
    }

    // Exact integral of sqrt(eta) over [a, b] within [0,1]; power rule on the gradual arm.
    double sqrt_integral(double a, double b) const {
        if (b < a) throw std::invalid_argument("eta profile: integration bounds reversed");
        switch (kind) {
            case Kind::constant: return (b - a) * std::sqrt(level);
            case Kind::abrupt_step: {
                const double lo = std::min(b, theta0);
                const double left = std::max(0.0, lo - a);
                const double right = std::max(0.0, b - std::max(a, theta0));
                return left + right * std::sqrt(psi);
            }
            case Kind::gradual_power: {
                const double left = std::max(0.0, std::min(b, theta0) - std::min(a, theta0));
                const double lo = std::max(a, theta0);
                if (b <= lo) return left;
                const double w1 = exponent + 1.0;
                const double tail = (b - lo) + amplitude / w1 * (std::pow(b - theta0, w1) - std::pow(lo - theta0, w1));
                return left + tail;
            }
        }
        return 0.0;
    }

    double min_value() const {
        switch (kind) {
            case Kind::constant: return level;
            case Kind::abrupt_step: return std::min(1.0, psi);
            case Kind::gradual_power: return amplitude >= 0.0 ? 1.0 : value(1.0);
        }
        return level;
    }

    bool piecewise_constant() const { return kind != Kind::gradual_power; }

    void validate() const {
        switch (kind) {
            case Kind::constant:
                if (!(level > 0.0)) throw std::invalid_argument("eta profile: level must be positive");
                break;
            case Kind::abrupt_step:
                if (!(psi > 0.0)) throw std::invalid_argument("eta profile: psi must be positive");
                if (theta0 < 0.0 || theta0 > 1.0) throw std::invalid_argument("eta profile: theta0 outside [0,1]");
                break;
            case Kind::gradual_power:
                if (theta0 < 0.0 || theta0 > 1.0) throw std::invalid_argument("eta profile: theta0 outside [0,1]");
                if (!(exponent > 0.0)) throw std::invalid_argument("eta profile: exponent must be positive");
                if (amplitude < 0.0) throw std::invalid_argument("eta profile: amplitude must be nonnegative");
                if (!(value(1.0) > 0.0)) throw std::invalid_argument("eta profile: eta must stay positive");
                break;
        }
    }
};

}  // namespace jumpcp
