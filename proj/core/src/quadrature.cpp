#include "jumpcp/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <stdexcept>
#include <vector>

namespace jumpcp {
namespace {

// 15-point Kronrod extension of the 7-point Gauss rule on [-1, 1].
constexpr double kNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
};
constexpr double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
};
constexpr double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
};

struct Segment {
    double a, b, value, error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment evaluate(const std::function<double(double)>& f, double a, double b) {
    const double half = 0.5 * (b - a);
    const double mid = 0.5 * (a + b);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(mid - half * kNodes[i]);
        fv[14 - i] = f(mid + half * kNodes[i]);
    }
    fv[7] = f(mid);

    double resk = kKronrodWeights[7] * fv[7];
    double resg = kGaussWeights[3] * fv[7];
    for (int i = 0; i < 7; ++i) {
        resk += kKronrodWeights[i] * (fv[i] + fv[14 - i]);
        if (i % 2 == 1) resg += kGaussWeights[i / 2] * (fv[i] + fv[14 - i]);
    }
    const double mean = 0.5 * resk;
    double resasc = kKronrodWeights[7] * std::fabs(fv[7] - mean);
    for (int i = 0; i < 7; ++i)
        resasc += kKronrodWeights[i] * (std::fabs(fv[i] - mean) + std::fabs(fv[14 - i] - mean));
    resasc *= half;

    double err = std::fabs((resk - resg) * half);
    if (resasc != 0.0 && err != 0.0)
        err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
    return Segment{a, b, resk * half, err};
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b, double abs_tol,
                 std::span<const double> breakpoints) {
    if (!(b > a)) return 0.0;
    if (!(abs_tol > 0.0)) throw std::invalid_argument("integrate: tolerance must be positive");

    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a && c < b) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    std::priority_queue<Segment> queue;
    double total = 0.0, total_err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        Segment s = evaluate(f, cuts[i], cuts[i + 1]);
        total += s.value;
        total_err += s.error;
        queue.push(s);
    }

    constexpr std::size_t kMaxSegments = 4000;
    std::size_t splits = 0;
    while (total_err > abs_tol && splits < kMaxSegments) {
        Segment worst = queue.top();
        queue.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) break;  // interval at floating-point resolution
        Segment left = evaluate(f, worst.a, mid);
        Segment right = evaluate(f, mid, worst.b);
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        ++splits;
    }
    if (total_err > abs_tol) {
        std::ostringstream msg;
        msg << "integrate: failed to reach tolerance " << abs_tol << "; achieved error estimate " << total_err;
        throw std::runtime_error(msg.str());
    }
    return total;
}

}  // namespace jumpcp
