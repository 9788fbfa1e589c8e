#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "jumpcp/rng.hpp"
#include "jumpcp/weights.hpp"

namespace jumpcp {

enum class MultiplierKind { gaussian, rademacher, constant_one };

std::string to_string(MultiplierKind kind);
MultiplierKind multiplier_kind_from_string(const std::string& text);

struct MultiplierSpec {
    MultiplierKind kind = MultiplierKind::gaussian;
    std::size_t replications = 200;  // B
    void validate() const;
};

// One multiplier per increment. gaussian and rademacher have mean 0 and
// variance 1; constant_one exists for the algebraic identity checks.
std::vector<double> draw_multipliers(std::size_t n, MultiplierKind kind, RngStream& rng);
void draw_multipliers(std::span<double> out, MultiplierKind kind, RngStream& rng);

// Multiplier counterparts of the data statistics. With xi = 1 each equals its
// data counterpart bitwise: both sides evaluate the same prefix-sum kernel.
double bootstrap_cusum(const IncrementWeights& w, std::span<const double> xi, double theta,
                       double t);
double bootstrap_cusum_sup(const IncrementWeights& w, std::span<const double> xi);
double bootstrap_cusum_sup_at(const IncrementWeights& w, std::span<const double> xi, double t0);
double bootstrap_variation(const IncrementWeights& w, std::span<const double> xi, double kappa,
                           double theta, double t);
double bootstrap_variation_sup(const IncrementWeights& w, std::span<const double> xi,
                               double theta);
double bootstrap_variation_sup_at(const IncrementWeights& w, std::span<const double> xi,
                                  double theta, double t0);

// ceil(level * B)-th order statistic: the smallest x with ecdf(x) >= level.
// The ceiling is taken with a 1e-9 slack so levels like 0.95 * 200 hit the
// intended rank despite rounding.
double empirical_quantile(std::vector<double> values, double level);

// P(sup |B(s)| <= x) for a Brownian bridge: 1 - 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 x^2)
double kolmogorov_cdf(double x);
// q with kolmogorov_cdf(q) = 1 - alpha, bisected to 1e-10
double ks_quantile(double alpha);

}  // namespace jumpcp
