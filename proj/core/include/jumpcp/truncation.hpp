#pragma once

#include <cmath>
#include <stdexcept>

namespace jumpcp {

// Increment truncation v_n = gamma * delta_n^omega. Only increments with
// |dx| > v_n enter the empirical distribution function; with omega < 1 the
// threshold shrinks slower than the diffusive scale sqrt(delta_n), so a
// Brownian component is suppressed asymptotically.
struct TruncationSpec {
    double gamma = 1.0;
    double omega = 0.75;

    double threshold(double delta_n) const {
        if (!(delta_n > 0.0)) throw std::invalid_argument("truncation: delta_n must be positive");
        return gamma * std::pow(delta_n, omega);
    }

    void validate() const {
        if (!(gamma > 0.0)) throw std::invalid_argument("truncation: gamma must be positive");
        if (!(omega > 0.0 && omega < 1.0))
            throw std::invalid_argument("truncation: omega must lie in (0, 1)");
    }
};

}  // namespace jumpcp
