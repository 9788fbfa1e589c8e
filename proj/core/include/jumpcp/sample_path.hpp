#pragma once

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace jumpcp {

struct JumpEvent {
    double time = 0.0;        // calendar time in [0, horizon]
    double size = 0.0;        // jump size, positive
    double level_time = 0.0;  // rescaled time y in (0, 1] of the governing kernel
};

// Discretely observed path: values[i] is the level at time i * delta_n,
// values[0] == 0. Jump events are recorded only when the simulator is asked to.
struct SamplePath {
    std::size_t n = 0;
    double delta_n = 0.0;
    std::vector<double> values;
    std::vector<JumpEvent> jumps;

    double horizon() const { return static_cast<double>(n) * delta_n; }

    double increment(std::size_t i) const {
        if (i == 0 || i > n) throw std::out_of_range("SamplePath::increment: index out of range");
        return values[i] - values[i - 1];
    }
};

}  // namespace jumpcp
