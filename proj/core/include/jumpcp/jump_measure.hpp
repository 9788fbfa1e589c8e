#pragma once

#include <concepts>
#include <stdexcept>
#include <cmath>

namespace jumpcp {

// One-sided jump-size measure with square-root tail, truncated at eta*cap:
//   tail(z) = nu([z, inf)) = sqrt(eta/(pi z)) - sqrt(1/(pi cap))   for 0 < z <= eta*cap
//   density(z) = 0.5 * sqrt(eta/pi) * z^{-3/2}                     on (0, eta*cap]
// tail(eta*cap) = 0, so there is no atom at the upper endpoint, and the inverse
// tail is closed form: inverse_tail(x) = eta / (pi * (x + sqrt(1/(pi cap)))^2).
struct SqrtStableMeasure {
    double eta = 1.0;
    double cap = 1e6;

    double upper() const { return eta * cap; }

    double tail(double z) const {
        if (!(z > 0.0)) throw std::invalid_argument("sqrt-stable tail: z must be positive");
        if (z >= upper()) return 0.0;
        return std::sqrt(eta / (kPi * z)) - edge();
    }

    double density(double z) const {
        if (!(z > 0.0)) throw std::invalid_argument("sqrt-stable density: z must be positive");
        if (z > upper()) return 0.0;
        return 0.5 * std::sqrt(eta / kPi) / (z * std::sqrt(z));
    }

    // tail(inverse_tail(x)) = x for x in [0, tail(0+)); monotone decreasing in x.
    double inverse_tail(double x) const {
        if (x < 0.0) throw std::invalid_argument("sqrt-stable inverse tail: x must be nonnegative");
        const double s = x + edge();
        return eta / (kPi * s * s);
    }

    void validate() const {
        if (!(eta > 0.0)) throw std::invalid_argument("sqrt-stable measure: eta must be positive");
        if (!(cap > 0.0)) throw std::invalid_argument("sqrt-stable measure: cap must be positive");
    }

  private:
    static constexpr double kPi = 3.141592653589793238462643383279502884;
    double edge() const { return std::sqrt(1.0 / (kPi * cap)); }
};

// Anything exposing a tail, a density, and a finite upper support endpoint.
template <class M>
concept JumpMeasureLike = requires(const M& m, double z) {
    { m.tail(z) } -> std::convertible_to<double>;
    { m.density(z) } -> std::convertible_to<double>;
    { m.upper() } -> std::convertible_to<double>;
};

}  // namespace jumpcp
