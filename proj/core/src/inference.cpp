#include "jumpcp/inference.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>

#include "jumpcp/grids.hpp"

namespace jumpcp {

namespace {

void check_alpha(double alpha) {
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("inference: alpha must lie in (0, 1)");
}

// Whether any surviving increment carries weight at level u0, or at any grid
// level when u0 is empty. Survivor weights are strictly positive, so this is
// exactly "the tested statistic has mass behind it".
bool has_contributor(const IncrementWeights& w, std::optional<std::size_t> u0) {
    const std::size_t cutoff = u0 ? *u0 + 1 : w.levels.size();
    for (std::size_t slot : w.survivor_slot)
        if (slot < cutoff) return true;
    return false;
}

enum class StatKind { cusum, variation };

// Test statistic in final units: prefix-sum sup divided by sqrt(n delta_n).
// Multiplier draws evaluate the identical expression on a tilted field, so a
// unit multiplier vector reproduces the data statistic bit for bit.
double field_statistic(const PrefixField& field, StatKind kind, std::optional<std::size_t> u0) {
    const IncrementWeights& w = field.weights();
    double sup = 0.0;
    switch (kind) {
        case StatKind::cusum:
            sup = u0 ? field.cusum_sup_at(*u0) : field.cusum_sup();
            break;
        case StatKind::variation:
            sup = u0 ? field.variation_sup_at(*u0, w.n) : field.variation_sup(w.n);
            break;
    }
    return sup / w.scale_root();
}

TestReport bootstrap_test(const IncrementWeights& w, TestMethod method, StatKind kind,
                          std::optional<std::size_t> u0, std::optional<double> t0, double alpha,
                          const MultiplierSpec& mult, RngStream& rng) {
    check_alpha(alpha);
    mult.validate();

    TestReport report;
    report.method = method;
    report.alpha = alpha;
    report.replications = mult.replications;
    report.t0 = t0;
    report.degenerate = !has_contributor(w, u0);

    PrefixField field(w, PrefixField::Kind::plain);
    report.statistic = field_statistic(field, kind, u0);

    std::vector<double> draws(mult.replications);
    std::vector<double> xi(w.n);
    for (std::size_t b = 0; b < mult.replications; ++b) {
        draw_multipliers(std::span<double>(xi), mult.kind, rng);
        field.assign(w, PrefixField::Kind::plain, xi);
        draws[b] = field_statistic(field, kind, u0);
    }
    report.critical_value = empirical_quantile(std::move(draws), 1.0 - alpha);
    report.reject = report.statistic >= report.critical_value;
    return report;
}

// Decision curve sampled on a coarse stride plus the focus step and its
// neighbors, enough to plot and to inspect the crossing.
template <typename Value>
std::vector<CurvePoint> sample_curve(std::size_t n, std::size_t focus, Value&& value) {
    std::vector<std::size_t> steps;
    const std::size_t stride = std::max<std::size_t>(1, n / 32);
    for (std::size_t k = 0; k <= n; k += stride) steps.push_back(k);
    steps.push_back(n);
    steps.push_back(std::min(focus, n));
    if (focus > 0) steps.push_back(std::min(focus - 1, n));
    if (focus < n) steps.push_back(focus + 1);
    std::sort(steps.begin(), steps.end());
    steps.erase(std::unique(steps.begin(), steps.end()), steps.end());

    std::vector<CurvePoint> curve;
    curve.reserve(steps.size());
    for (std::size_t k : steps)
        curve.push_back({static_cast<double>(k) / static_cast<double>(n), value(k)});
    return curve;
}

// One threshold selection from pre-drawn multiplier seeds. Replaying seeds
// lets the five-step pipeline evaluate the same draws at two locations
// without storing B multiplier vectors.
double threshold_from_seeds(const IncrementWeights& w, PrefixField& field, std::vector<double>& xi,
                            double theta, double alpha, double r, MultiplierKind kind,
                            std::span<const std::uint64_t> seeds) {
    const std::size_t k_max = w.step_of(theta);
    std::vector<double> draws(seeds.size());
    for (std::size_t b = 0; b < seeds.size(); ++b) {
        RngStream stream(seeds[b]);
        draw_multipliers(std::span<double>(xi), kind, stream);
        field.assign(w, PrefixField::Kind::plain, xi);
        draws[b] = std::pow(field.variation_sup(k_max) / w.scale_root(), r);
    }
    return empirical_quantile(std::move(draws), 1.0 - alpha);
}

}  // namespace

std::string to_string(TestMethod method) {
    switch (method) {
        case TestMethod::abrupt_global: return "abrupt_global";
        case TestMethod::abrupt_pointwise_boot: return "abrupt_pointwise_boot";
        case TestMethod::abrupt_pointwise_exact: return "abrupt_pointwise_exact";
        case TestMethod::gradual_global: return "gradual_global";
        case TestMethod::gradual_pointwise: return "gradual_pointwise";
    }
    throw std::logic_error("to_string: unknown test method");
}

std::string to_string(EstimatorMethod method) {
    switch (method) {
        case EstimatorMethod::argmax_global: return "argmax_global";
        case EstimatorMethod::argmax_pointwise: return "argmax_pointwise";
        case EstimatorMethod::gradual_threshold: return "gradual_threshold";
        case EstimatorMethod::five_step: return "five_step";
    }
    throw std::logic_error("to_string: unknown estimator method");
}

void FiveStepConfig::validate() const {
    if (!(theta_pre > 0.0 && theta_pre < 1.0))
        throw std::invalid_argument("five_step: theta_pre must lie in (0, 1)");
    if (!(alpha > 0.0 && alpha < 1.0))
        throw std::invalid_argument("five_step: alpha must lie in (0, 1)");
    if (!(r > 0.0 && r <= 1.0))
        throw std::invalid_argument("five_step: r must lie in (0, 1]");
}

TestReport test_abrupt_global(const IncrementWeights& w, double alpha, const MultiplierSpec& mult,
                              RngStream& rng) {
    return bootstrap_test(w, TestMethod::abrupt_global, StatKind::cusum, std::nullopt,
                          std::nullopt, alpha, mult, rng);
}

TestReport test_abrupt_pointwise_boot(const IncrementWeights& w, double t0, double alpha,
                                      const MultiplierSpec& mult, RngStream& rng) {
    const std::size_t u0 = level_index(w.levels, t0);
    return bootstrap_test(w, TestMethod::abrupt_pointwise_boot, StatKind::cusum, u0, t0, alpha,
                          mult, rng);
}

TestReport test_abrupt_pointwise_exact(const IncrementWeights& w, double t0, double alpha) {
    check_alpha(alpha);
    const std::size_t u0 = level_index(w.levels, t0);

    TestReport report;
    report.method = TestMethod::abrupt_pointwise_exact;
    report.alpha = alpha;
    report.replications = 0;
    report.t0 = t0;
    report.degenerate = !(w.partial_squared(u0, w.n) > 0.0);
    report.statistic = pointwise_pivot(w, t0);
    report.critical_value = ks_quantile(alpha);
    report.reject = report.statistic >= report.critical_value;
    return report;
}

TestReport test_gradual_global(const IncrementWeights& w, double alpha, const MultiplierSpec& mult,
                               RngStream& rng) {
    return bootstrap_test(w, TestMethod::gradual_global, StatKind::variation, std::nullopt,
                          std::nullopt, alpha, mult, rng);
}

TestReport test_gradual_pointwise(const IncrementWeights& w, double t0, double alpha,
                                  const MultiplierSpec& mult, RngStream& rng) {
    const std::size_t u0 = level_index(w.levels, t0);
    return bootstrap_test(w, TestMethod::gradual_pointwise, StatKind::variation, u0, t0, alpha,
                          mult, rng);
}

ChangePointEstimate estimate_abrupt(const IncrementWeights& w, std::optional<double> t0) {
    std::optional<std::size_t> u0;
    if (t0) u0 = level_index(w.levels, *t0);

    PrefixField field(w, PrefixField::Kind::plain);
    const std::size_t level_count = w.levels.size();
    const auto magnitude = [&](std::size_t k) {
        if (u0) return std::fabs(field.cusum_point(*u0, k));
        double best = 0.0;
        for (std::size_t u = 0; u < level_count; ++u)
            best = std::max(best, std::fabs(field.cusum_point(u, k)));
        return best;
    };

    // Strict improvement keeps the smallest maximizer; K = 0 contributes 0.
    std::size_t best_k = 0;
    double best_value = magnitude(0);
    for (std::size_t k = 1; k <= w.n; ++k) {
        const double value = magnitude(k);
        if (value > best_value) {
            best_value = value;
            best_k = k;
        }
    }

    const double root = w.scale_root();
    ChangePointEstimate est;
    est.method = u0 ? EstimatorMethod::argmax_pointwise : EstimatorMethod::argmax_global;
    est.theta_hat = static_cast<double>(best_k) / static_cast<double>(w.n);
    est.degenerate = !(best_value > 0.0);
    est.curve = sample_curve(w.n, best_k, [&](std::size_t k) { return magnitude(k) / root; });
    return est;
}

double select_threshold(const IncrementWeights& w, double theta_pre, double alpha, double r,
                        const MultiplierSpec& mult, RngStream& rng) {
    if (!(theta_pre > 0.0 && theta_pre < 1.0))
        throw std::invalid_argument("select_threshold: theta_pre must lie in (0, 1)");
    check_alpha(alpha);
    if (!(r > 0.0 && r <= 1.0))
        throw std::invalid_argument("select_threshold: r must lie in (0, 1]");
    mult.validate();

    std::vector<std::uint64_t> seeds(mult.replications);
    for (auto& seed : seeds) seed = rng.next_u64();

    PrefixField field;
    std::vector<double> xi(w.n);
    return threshold_from_seeds(w, field, xi, theta_pre, alpha, r, mult.kind, seeds);
}

ChangePointEstimate estimate_gradual(const IncrementWeights& w, double lambda) {
    if (!(lambda >= 0.0))
        throw std::invalid_argument("estimate_gradual: lambda must be nonnegative");

    PrefixField field(w, PrefixField::Kind::plain);
    const double root = w.scale_root();
    const auto scaled = [&](std::size_t k) { return field.variation_sup(k) / root; };

    // The scaled curve is a running sup over a nested pair set, hence
    // nondecreasing in k exactly as computed; binary-search the first step in
    // [0, n) that exceeds lambda. Cells count at their left endpoints i/n.
    std::size_t lo = 0;
    std::size_t hi = w.n;
    while (lo < hi) {
        const std::size_t mid = lo + (hi - lo) / 2;
        if (scaled(mid) > lambda)
            hi = mid;
        else
            lo = mid + 1;
    }

    ChangePointEstimate est;
    est.method = EstimatorMethod::gradual_threshold;
    est.theta_hat = static_cast<double>(lo) / static_cast<double>(w.n);
    est.threshold_used = lambda;
    est.degenerate = !has_contributor(w, std::nullopt);
    est.curve = sample_curve(w.n, lo, scaled);
    return est;
}

ChangePointEstimate five_step_gradual(const IncrementWeights& w, const FiveStepConfig& config,
                                      const MultiplierSpec& mult, RngStream& rng) {
    config.validate();
    mult.validate();

    std::vector<std::uint64_t> seeds(mult.replications);
    for (auto& seed : seeds) seed = rng.next_u64();

    PrefixField field;
    std::vector<double> xi(w.n);

    const double lambda_first =
        threshold_from_seeds(w, field, xi, config.theta_pre, config.alpha, config.r, mult.kind,
                             seeds);
    const ChangePointEstimate first = estimate_gradual(w, lambda_first);
    const double lambda_final =
        threshold_from_seeds(w, field, xi, first.theta_hat, config.alpha, config.r, mult.kind,
                             seeds);

    ChangePointEstimate est = estimate_gradual(w, lambda_final);
    est.method = EstimatorMethod::five_step;
    est.threshold_initial = lambda_first;
    est.threshold_used = lambda_final;
    est.intermediate = first.theta_hat;
    return est;
}

TestReport test_abrupt_global(const SamplePath& path, const RhoFunction& rho,
                              const TruncationSpec& trunc, std::vector<double> level_grid,
                              double alpha, const MultiplierSpec& mult, RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return test_abrupt_global(w, alpha, mult, rng);
}

TestReport test_abrupt_pointwise_boot(const SamplePath& path, const RhoFunction& rho,
                                      const TruncationSpec& trunc, std::vector<double> level_grid,
                                      double t0, double alpha, const MultiplierSpec& mult,
                                      RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return test_abrupt_pointwise_boot(w, t0, alpha, mult, rng);
}

TestReport test_abrupt_pointwise_exact(const SamplePath& path, const RhoFunction& rho,
                                       const TruncationSpec& trunc, std::vector<double> level_grid,
                                       double t0, double alpha) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return test_abrupt_pointwise_exact(w, t0, alpha);
}

TestReport test_gradual_global(const SamplePath& path, const RhoFunction& rho,
                               const TruncationSpec& trunc, std::vector<double> level_grid,
                               double alpha, const MultiplierSpec& mult, RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return test_gradual_global(w, alpha, mult, rng);
}

TestReport test_gradual_pointwise(const SamplePath& path, const RhoFunction& rho,
                                  const TruncationSpec& trunc, std::vector<double> level_grid,
                                  double t0, double alpha, const MultiplierSpec& mult,
                                  RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return test_gradual_pointwise(w, t0, alpha, mult, rng);
}

ChangePointEstimate estimate_abrupt(const SamplePath& path, const RhoFunction& rho,
                                    const TruncationSpec& trunc, std::vector<double> level_grid,
                                    std::optional<double> t0) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return estimate_abrupt(w, t0);
}

double select_threshold(const SamplePath& path, const RhoFunction& rho,
                        const TruncationSpec& trunc, std::vector<double> level_grid,
                        double theta_pre, double alpha, double r, const MultiplierSpec& mult,
                        RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return select_threshold(w, theta_pre, alpha, r, mult, rng);
}

ChangePointEstimate estimate_gradual(const SamplePath& path, const RhoFunction& rho,
                                     const TruncationSpec& trunc, std::vector<double> level_grid,
                                     double lambda) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return estimate_gradual(w, lambda);
}

ChangePointEstimate five_step_gradual(const SamplePath& path, const RhoFunction& rho,
                                      const TruncationSpec& trunc, std::vector<double> level_grid,
                                      const FiveStepConfig& config, const MultiplierSpec& mult,
                                      RngStream& rng) {
    const IncrementWeights w = IncrementWeights::build(path, rho, trunc, std::move(level_grid));
    return five_step_gradual(w, config, mult, rng);
}

}  // namespace jumpcp
