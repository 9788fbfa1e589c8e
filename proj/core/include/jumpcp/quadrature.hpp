#pragma once

#include <functional>
#include <span>
#include <cstddef>

namespace jumpcp {

// Adaptive Gauss-Kronrod (7/15) integration with interval bisection. The initial
// subdivision honors the supplied breakpoints (integrand kinks), then intervals
// are split greedily until the summed Kronrod error estimate is below abs_tol.
// Throws std::runtime_error with the achieved error estimate when the interval
// budget is exhausted before convergence.
double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol = 1e-10,
                 std::span<const double> breakpoints = {});

}  // namespace jumpcp
