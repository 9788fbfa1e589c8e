#pragma once

// Shared test helpers: synthetic paths with controlled increments, brute-force
// statistic scans, and goodness-of-fit machinery for the distributional checks.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <random>
#include <stdexcept>
#include <vector>

#include "jumpcp/sample_path.hpp"
#include "jumpcp/weights.hpp"

namespace testsupport {

// Path with prescribed increments; values are their running sum.
inline jumpcp::SamplePath path_from_increments(const std::vector<double>& increments,
                                               double delta_n) {
    jumpcp::SamplePath path;
    path.n = increments.size();
    path.delta_n = delta_n;
    path.values.resize(increments.size() + 1, 0.0);
    for (std::size_t i = 0; i < increments.size(); ++i)
        path.values[i + 1] = path.values[i] + increments[i];
    return path;
}

// Mixture increments: mostly below `threshold`, occasionally well above and of
// either sign, so survivor patterns vary across draws.
inline jumpcp::SamplePath random_path(std::mt19937_64& gen, std::size_t n, double delta_n,
                                      double threshold) {
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> increments(n);
    for (double& dx : increments) {
        const double u = unit(gen);
        if (u < 0.55) {
            dx = (unit(gen) - 0.5) * threshold;  // killed by truncation
        } else {
            const double sign = unit(gen) < 0.2 ? -1.0 : 1.0;
            dx = sign * (threshold * 1.01 + 3.5 * unit(gen));
        }
    }
    return path_from_increments(increments, delta_n);
}

// Brute-force sups over the full step range / integer triangle, evaluated
// through the same point accessors the scan engines use. Equality with the
// engines must be exact: every candidate the engine can return is one of these.
inline double bf_cusum_sup_at(const jumpcp::PrefixField& field, std::size_t u) {
    const std::size_t n = field.weights().n;
    double best = 0.0;
    for (std::size_t k = 0; k <= n; ++k)
        best = std::max(best, std::fabs(field.cusum_point(u, k)));
    return best;
}

inline double bf_cusum_sup(const jumpcp::PrefixField& field) {
    double best = 0.0;
    for (std::size_t u = 0; u < field.level_count(); ++u)
        best = std::max(best, bf_cusum_sup_at(field, u));
    return best;
}

inline double bf_variation_sup_at(const jumpcp::PrefixField& field, std::size_t u,
                                  std::size_t k_max) {
    double best = 0.0;
    for (std::size_t k2 = 0; k2 <= k_max; ++k2)
        for (std::size_t k1 = 0; k1 <= k2; ++k1)
            best = std::max(best, std::fabs(field.variation_point(u, k1, k2)));
    return best;
}

inline double bf_variation_sup(const jumpcp::PrefixField& field, std::size_t k_max) {
    double best = 0.0;
    for (std::size_t u = 0; u < field.level_count(); ++u)
        best = std::max(best, bf_variation_sup_at(field, u, k_max));
    return best;
}

// Fully independent CUSUM from raw increments: own masking, own summation
// order. Agreement with the library is to tolerance, not bitwise.
inline double naive_cusum(const jumpcp::IncrementWeights& w, const jumpcp::RhoFunction& rho,
                          std::size_t k, double t) {
    double head = 0.0, total = 0.0;
    for (std::size_t i = 1; i <= w.n; ++i) {
        const double dx = w.increments[i - 1];
        if (!(std::fabs(dx) > w.threshold) || !(dx <= t)) continue;
        total += rho(dx);
        if (i <= k) head += rho(dx);
    }
    const double ratio = static_cast<double>(k) / static_cast<double>(w.n);
    return (head - ratio * total) / w.scale_root();
}

// Regularized lower incomplete gamma P(a, x): series for x < a + 1, Lentz
// continued fraction for the complement otherwise.
inline double gamma_p(double a, double x) {
    if (!(a > 0.0) || x < 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double term = 1.0 / a, sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= x / (a + k);
            sum += term;
            if (std::fabs(term) < std::fabs(sum) * 1e-15) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    double b = x + 1.0 - a, c = 1e300, d = 1.0 / b, h = d;
    for (int k = 1; k < 500; ++k) {
        const double an = -static_cast<double>(k) * (k - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < 1e-300) d = 1e-300;
        c = b + an / c;
        if (std::fabs(c) < 1e-300) c = 1e-300;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-15) break;
    }
    return 1.0 - std::exp(-x + a * std::log(x) - lg) * h;
}

inline double chi_square_cdf(double x, double dof) { return gamma_p(dof / 2.0, x / 2.0); }

// One-sample Kolmogorov-Smirnov distance sup_x |F_n(x) - F(x)|.
inline double ks_distance(std::vector<double> sample, const std::function<double(double)>& cdf) {
    if (sample.empty()) throw std::invalid_argument("ks_distance: empty sample");
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double dist = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        dist = std::max(dist, std::fabs(f - static_cast<double>(i) / n));
        dist = std::max(dist, std::fabs(static_cast<double>(i + 1) / n - f));
    }
    return dist;
}

// Pearson chi-square statistic and p-value for observed counts against Poisson
// cell probabilities with the upper tail pooled into the last cell.
struct ChiSquareResult {
    double statistic = 0.0;
    double p_value = 1.0;
    std::size_t cells = 0;
};

inline ChiSquareResult poisson_gof(const std::vector<long long>& counts, double mean,
                                   double min_expected = 5.0) {
    const double total = static_cast<double>(counts.size());
    long long max_count = 0;
    for (long long c : counts) max_count = std::max(max_count, c);

    // Poisson pmf by forward recursion, cells pooled to keep expectations above
    // min_expected; the final cell absorbs the whole upper tail.
    std::vector<double> probs;
    std::vector<double> observed;
    double pmf = std::exp(-mean), cum = pmf;
    double bucket_p = pmf;
    double bucket_obs = 0.0;
    std::vector<long long> histogram(static_cast<std::size_t>(max_count) + 1, 0);
    for (long long c : counts) ++histogram[static_cast<std::size_t>(c)];
    for (long long k = 0; k <= max_count; ++k) {
        if (k > 0) {
            pmf *= mean / static_cast<double>(k);
            cum += pmf;
            bucket_p += pmf;
        }
        bucket_obs += static_cast<double>(histogram[static_cast<std::size_t>(k)]);
        if (bucket_p * total >= min_expected) {
            probs.push_back(bucket_p);
            observed.push_back(bucket_obs);
            bucket_p = 0.0;
            bucket_obs = 0.0;
        }
    }
    // Upper tail beyond max_count plus any unflushed bucket.
    probs.push_back(bucket_p + (1.0 - cum));
    observed.push_back(bucket_obs);
    if (probs.size() < 2) throw std::invalid_argument("poisson_gof: sample too concentrated");

    ChiSquareResult out;
    out.cells = probs.size();
    for (std::size_t i = 0; i < probs.size(); ++i) {
        const double expected = probs[i] * total;
        if (expected > 0.0) {
            const double diff = observed[i] - expected;
            out.statistic += diff * diff / expected;
        }
    }
    out.p_value = 1.0 - chi_square_cdf(out.statistic, static_cast<double>(probs.size() - 1));
    return out;
}

}  // namespace testsupport
