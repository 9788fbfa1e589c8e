#pragma once

#include "jumpcp/eta_profile.hpp"
#include "jumpcp/jump_measure.hpp"

namespace jumpcp {

// Time-indexed family of sqrt-stable jump measures: at rescaled time y the jump
// sizes follow SqrtStableMeasure{eta(y), cap}. This is the transition kernel all
// simulated paths draw from.
struct SqrtStableKernel {
    EtaProfile profile;
    double cap = 1e6;

    SqrtStableMeasure measure_at(double y) const { return SqrtStableMeasure{profile.value(y), cap}; }

    double tail(double y, double z) const { return measure_at(y).tail(z); }
    double inverse_tail(double y, double x) const { return measure_at(y).inverse_tail(x); }

    void validate() const {
        profile.validate();
        if (!(cap > 0.0)) throw std::invalid_argument("kernel: cap must be positive");
    }
};

// Two-regime kernel over arbitrary jump measures: nu1 on [0, theta0], nu2 after.
// Used by the closed-form oracles; the simulator always works with SqrtStableKernel.
template <JumpMeasureLike M>
struct TwoRegimeKernel {
    M nu1;
    M nu2;
    double theta0 = 0.5;

    const M& measure_at(double y) const { return y <= theta0 ? nu1 : nu2; }

    void validate() const {
        if (theta0 < 0.0 || theta0 > 1.0) throw std::invalid_argument("two-regime kernel: theta0 outside [0,1]");
    }
};

using AbruptPairKernel = TwoRegimeKernel<SqrtStableMeasure>;

}  // namespace jumpcp
