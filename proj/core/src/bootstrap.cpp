#include "jumpcp/bootstrap.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jumpcp/grids.hpp"

namespace jumpcp {

void MultiplierSpec::validate() const {
    if (replications == 0) throw std::invalid_argument("multipliers: B must be positive");
}

std::string to_string(MultiplierKind kind) {
    switch (kind) {
        case MultiplierKind::gaussian: return "gaussian";
        case MultiplierKind::rademacher: return "rademacher";
        case MultiplierKind::constant_one: return "constant_one";
    }
    throw std::logic_error("to_string: unknown multiplier kind");
}

MultiplierKind multiplier_kind_from_string(const std::string& text) {
    if (text == "gaussian") return MultiplierKind::gaussian;
    if (text == "rademacher") return MultiplierKind::rademacher;
    if (text == "constant_one") return MultiplierKind::constant_one;
    throw std::invalid_argument("unknown multiplier kind: " + text);
}

void draw_multipliers(std::span<double> out, MultiplierKind kind, RngStream& rng) {
    switch (kind) {
        case MultiplierKind::gaussian:
            for (double& x : out) x = rng.normal();
            return;
        case MultiplierKind::rademacher:
            // uniform on (0, 1]: the sign split at 1/2 is exactly balanced
            for (double& x : out) x = rng.uniform() <= 0.5 ? -1.0 : 1.0;
            return;
        case MultiplierKind::constant_one:
            for (double& x : out) x = 1.0;
            return;
    }
    throw std::invalid_argument("multipliers: unknown kind");
}

std::vector<double> draw_multipliers(std::size_t n, MultiplierKind kind, RngStream& rng) {
    std::vector<double> xi(n);
    draw_multipliers(std::span<double>(xi), kind, rng);
    return xi;
}

double bootstrap_cusum(const IncrementWeights& w, std::span<const double> xi, double theta,
                       double t) {
    const std::size_t u = level_index(w.levels, t);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.cusum_point(u, w.step_of(theta)) / w.scale_root();
}

double bootstrap_cusum_sup(const IncrementWeights& w, std::span<const double> xi) {
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.cusum_sup() / w.scale_root();
}

double bootstrap_cusum_sup_at(const IncrementWeights& w, std::span<const double> xi, double t0) {
    const std::size_t u = level_index(w.levels, t0);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.cusum_sup_at(u) / w.scale_root();
}

double bootstrap_variation(const IncrementWeights& w, std::span<const double> xi, double kappa,
                           double theta, double t) {
    if (kappa > theta)
        throw std::invalid_argument("bootstrap variation: kappa must not exceed theta");
    const std::size_t u = level_index(w.levels, t);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.variation_point(u, w.step_of(kappa), w.step_of(theta)) / w.scale_root();
}

double bootstrap_variation_sup(const IncrementWeights& w, std::span<const double> xi,
                               double theta) {
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.variation_sup(w.step_of(theta)) / w.scale_root();
}

double bootstrap_variation_sup_at(const IncrementWeights& w, std::span<const double> xi,
                                  double theta, double t0) {
    const std::size_t u = level_index(w.levels, t0);
    const PrefixField field(w, PrefixField::Kind::plain, xi);
    return field.variation_sup_at(u, w.step_of(theta)) / w.scale_root();
}

double empirical_quantile(std::vector<double> values, double level) {
    if (values.empty()) throw std::invalid_argument("empirical quantile: empty sample");
    if (!(level > 0.0 && level < 1.0))
        throw std::invalid_argument("empirical quantile: level must lie in (0, 1)");
    const double count = static_cast<double>(values.size());
    std::size_t rank = static_cast<std::size_t>(std::ceil(level * count - 1e-9));
    if (rank < 1) rank = 1;
    if (rank > values.size()) rank = values.size();
    std::nth_element(values.begin(), values.begin() + (rank - 1), values.end());
    return values[rank - 1];
}

double kolmogorov_cdf(double x) {
    if (!(x > 0.0)) return 0.0;
    double sum = 0.0;
    double sign = 1.0;
    for (int k = 1; k <= 1000; ++k) {
        const double term = std::exp(-2.0 * k * k * x * x);
        sum += sign * term;
        sign = -sign;
        if (term < 1e-18) break;
    }
    const double cdf = 1.0 - 2.0 * sum;
    return std::clamp(cdf, 0.0, 1.0);
}

double ks_quantile(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("ks quantile: alpha must lie in (0, 1)");
    const double target = 1.0 - alpha;
    double lo = 1e-8;
    double hi = 10.0;
    while (hi - lo > 1e-10) {
        const double mid = 0.5 * (lo + hi);
        if (kolmogorov_cdf(mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace jumpcp
